//! Kleene-strict interpretation of terms and formulas in finite structures.

use std::collections::BTreeSet;

use thiserror::Error;

use super::structure::{for_each_tuple, PartialStructure};
use crate::syntax::{
    formula_diagnostics, sequent_diagnostics, term_diagnostics, Context, Formula, Sequent, Signature, Term, Theory,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("ill-formed input: {0}")]
    IllFormed(String),
    #[error("tuple has {found} entries for a context of length {expected}")]
    TupleLength { expected: usize, found: usize },
    #[error("tuple entry {position} is out of range for sort `{sort}`")]
    TupleEntry { position: usize, sort: String },
}

#[derive(Clone, Debug)]
pub(crate) enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Clone, Debug)]
pub(crate) enum CFormula {
    Rel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Conj(Vec<CFormula>),
}

pub(crate) fn compile_term(sig: &Signature, ctx: &Context, t: &Term) -> CTerm {
    match t {
        Term::Var(v) => CTerm::Var(ctx.position(v).expect("checked term")),
        Term::App(f, args) => CTerm::App(
            sig.function_index(f).expect("checked term"),
            args.iter().map(|a| compile_term(sig, ctx, a)).collect(),
        ),
    }
}

pub(crate) fn compile_formula(sig: &Signature, ctx: &Context, phi: &Formula) -> CFormula {
    match phi {
        Formula::Rel(r, args) => CFormula::Rel(
            sig.relation_index(r).expect("checked formula"),
            args.iter().map(|a| compile_term(sig, ctx, a)).collect(),
        ),
        Formula::Eq(l, r) => CFormula::Eq(compile_term(sig, ctx, l), compile_term(sig, ctx, r)),
        Formula::Truth => CFormula::Conj(Vec::new()),
        Formula::Conj(parts) => CFormula::Conj(parts.iter().map(|p| compile_formula(sig, ctx, p)).collect()),
    }
}

pub(crate) fn eval_term(m: &PartialStructure, t: &CTerm, tuple: &[usize]) -> Option<usize> {
    match t {
        CTerm::Var(i) => Some(tuple[*i]),
        CTerm::App(f, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_term(m, a, tuple)?);
            }
            m.function_value(*f, &vals)
        }
    }
}

pub(crate) fn eval_formula(m: &PartialStructure, phi: &CFormula, tuple: &[usize]) -> bool {
    match phi {
        CFormula::Rel(r, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                match eval_term(m, a, tuple) {
                    Some(v) => vals.push(v),
                    None => return false,
                }
            }
            m.relation_holds(*r, &vals)
        }
        CFormula::Eq(l, r) => match (eval_term(m, l, tuple), eval_term(m, r, tuple)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
        CFormula::Conj(parts) => parts.iter().all(|p| eval_formula(m, p, tuple)),
    }
}

fn context_sorts(m: &PartialStructure, ctx: &Context) -> Result<Vec<usize>, EvalError> {
    ctx.sorts()
        .map(|s| {
            m.signature()
                .sort_index(s)
                .ok_or_else(|| EvalError::IllFormed(format!("unknown sort `{s}`")))
        })
        .collect()
}

fn check_tuple(m: &PartialStructure, ctx: &Context, tuple: &[usize]) -> Result<(), EvalError> {
    let sorts = context_sorts(m, ctx)?;
    if sorts.len() != tuple.len() {
        return Err(EvalError::TupleLength {
            expected: sorts.len(),
            found: tuple.len(),
        });
    }
    for (i, (&s, &e)) in sorts.iter().zip(tuple).enumerate() {
        if e >= m.carrier_size(s) {
            return Err(EvalError::TupleEntry {
                position: i,
                sort: m.signature().sort_name(s).to_owned(),
            });
        }
    }
    Ok(())
}

fn first_problem<T: ToString>(d: Vec<T>) -> Result<(), EvalError> {
    match d.into_iter().next() {
        Some(d) => Err(EvalError::IllFormed(d.to_string())),
        None => Ok(()),
    }
}

/// The value of `term` at `tuple`, or `None` where it is undefined.
pub fn interp_term(m: &PartialStructure, ctx: &Context, term: &Term, tuple: &[usize]) -> Result<Option<usize>, EvalError> {
    first_problem(term_diagnostics(m.signature(), ctx, term))?;
    check_tuple(m, ctx, tuple)?;
    Ok(eval_term(m, &compile_term(m.signature(), ctx, term), tuple))
}

/// Whether the tuple satisfies `phi`.
pub fn satisfies(m: &PartialStructure, ctx: &Context, phi: &Formula, tuple: &[usize]) -> Result<bool, EvalError> {
    first_problem(formula_diagnostics(m.signature(), ctx, phi))?;
    check_tuple(m, ctx, tuple)?;
    Ok(eval_formula(m, &compile_formula(m.signature(), ctx, phi), tuple))
}

/// All tuples of the context satisfying `phi`, in lexicographic order.
pub fn interp_formula(m: &PartialStructure, ctx: &Context, phi: &Formula) -> Result<BTreeSet<Vec<usize>>, EvalError> {
    first_problem(formula_diagnostics(m.signature(), ctx, phi))?;
    let sorts = context_sorts(m, ctx)?;
    let sizes: Vec<usize> = sorts.iter().map(|&s| m.carrier_size(s)).collect();
    let c = compile_formula(m.signature(), ctx, phi);
    let mut out = BTreeSet::new();
    for_each_tuple(&sizes, |t| {
        if eval_formula(m, &c, t) {
            out.insert(t.to_vec());
        }
        true
    });
    Ok(out)
}

/// The first tuple in the premise but not in the conclusion, if any.
pub fn counterexample(m: &PartialStructure, s: &Sequent) -> Result<Option<Vec<usize>>, EvalError> {
    first_problem(sequent_diagnostics(m.signature(), s))?;
    Ok(counterexample_unchecked(m, s))
}

pub(crate) fn counterexample_unchecked(m: &PartialStructure, s: &Sequent) -> Option<Vec<usize>> {
    let sorts: Vec<usize> = s
        .context
        .sorts()
        .map(|x| m.signature().sort_index(x).expect("checked sequent"))
        .collect();
    let sizes: Vec<usize> = sorts.iter().map(|&x| m.carrier_size(x)).collect();
    let p = compile_formula(m.signature(), &s.context, &s.premise);
    let c = compile_formula(m.signature(), &s.context, &s.conclusion);
    let mut witness = None;
    for_each_tuple(&sizes, |t| {
        if eval_formula(m, &p, t) && !eval_formula(m, &c, t) {
            witness = Some(t.to_vec());
            false
        } else {
            true
        }
    });
    witness
}

/// Validity of a sequent: the premise's interpretation is contained in the conclusion's.
pub fn holds(m: &PartialStructure, s: &Sequent) -> Result<bool, EvalError> {
    Ok(counterexample(m, s)?.is_none())
}

/// An axiom failing in a structure, with the offending tuple by element name.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub axiom: String,
    pub tuple: Vec<String>,
}

/// Outcome of checking a structure against a theory.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ModelReport {
    pub violations: Vec<Violation>,
}

impl ModelReport {
    pub fn is_model(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every axiom; reports each failing axiom with one witness.
pub fn check_model(m: &PartialStructure, t: &Theory) -> Result<ModelReport, EvalError> {
    if **m.signature() != *t.signature {
        return Err(EvalError::IllFormed("structure and theory have different signatures".into()));
    }
    let mut violations = Vec::new();
    for ax in &t.axioms {
        if let Some(tuple) = counterexample(m, &ax.sequent)? {
            violations.push(Violation {
                axiom: ax.name.clone(),
                tuple: name_tuple(m, &ax.sequent.context, &tuple),
            });
        }
    }
    Ok(ModelReport { violations })
}

/// Whether every axiom of the theory is valid in the structure.
pub fn is_model(m: &PartialStructure, t: &Theory) -> bool {
    check_model(m, t).map(|r| r.is_model()).unwrap_or(false)
}

/// Element names of a tuple over a context.
pub fn name_tuple(m: &PartialStructure, ctx: &Context, tuple: &[usize]) -> Vec<String> {
    ctx.sorts()
        .zip(tuple)
        .map(|(s, &e)| m.element_name(m.signature().sort_index(s).expect("declared sort"), e).to_owned())
        .collect()
}
