//! Representing models of formulas in context, built by bounded saturation,
//! together with the maps between them, their coequalizers, and free
//! algebras of relative theories.
//!
//! ```
//! use phl_core::{freemodel::representing_model, library, syntax::parse_formula_in_context};
//!
//! let pos = library::pos();
//! let (ctx, phi) = parse_formula_in_context(&pos.signature, "[x:*, y:*] . leq(x, y)").unwrap();
//! let p = representing_model(&pos, &ctx, &phi, 4).unwrap();
//! assert!(p.is_saturated());
//! assert_eq!(p.structure.carrier(0), ["x", "y"]);
//! ```

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::prover::{prove, Budget, BudgetError, Verdict};
use crate::saturation::{saturate, SaturationBudget, SaturationStatus};
use crate::semantics::{
    check_hom, compile_term, enumerate_homs, eval_term, interp_formula, interp_term, is_model, Homomorphism,
    PartialStructure,
};
use crate::syntax::{
    context_diagnostics, formula_diagnostics, is_plain_ident, rename_formula, rename_term, sort_of_term, Context,
    Formula, Sequent, Signature, Term, Theory,
};
use crate::translation::{pht_of, RelativeError, RelativeTheory, TheoryMorphism};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeModelError {
    #[error("ill-formed input: {0}")]
    IllFormed(String),
    #[error("presentation is {0}, so the result is not certified")]
    Truncated(SaturationStatus),
    #[error("structure is not a model of the theory: {0}")]
    NotAModel(String),
    #[error("obligation `{sequent}` came back {verdict}")]
    Obligation { sequent: String, verdict: &'static str },
    #[error("`{0}` is not defined in the target presentation")]
    Undefined(String),
    #[error("the induced map is not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error(transparent)]
    Relative(#[from] RelativeError),
}

/// A finite presentation of the term model of `constraint` over the
/// generators in `context`.
///
/// Elements are classes of terms, displayed by their canonical
/// representative: the least one by depth, then by printed form. When the
/// status is `Truncated` the structure is only a partial view of the model,
/// valid for terms reached within the recorded rounds.
#[derive(Clone, Debug)]
pub struct ModelPresentation {
    pub theory: Theory,
    pub context: Context,
    pub constraint: Formula,
    pub structure: PartialStructure,
    pub representatives: Vec<Vec<Term>>,
    /// The element of each generator.
    pub generic: Vec<usize>,
    pub status: SaturationStatus,
}

impl ModelPresentation {
    pub fn is_saturated(&self) -> bool {
        self.status.is_saturated()
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.theory.signature
    }

    /// Sort index and element of a term over the generators, if it is
    /// defined in the presentation.
    pub fn element(&self, t: &Term) -> Result<Option<(usize, usize)>, FreeModelError> {
        let sort = sort_of_term(self.signature(), &self.context, t).map_err(|d| FreeModelError::IllFormed(d.message))?;
        let s = self.signature().sort_index(&sort).expect("checked");
        let v = eval_term(&self.structure, &compile_term(self.signature(), &self.context, t), &self.generic);
        Ok(v.map(|e| (s, e)))
    }

    /// Whether two terms denote the same defined element.
    pub fn equal(&self, a: &Term, b: &Term) -> Result<bool, FreeModelError> {
        Ok(match (self.element(a)?, self.element(b)?) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        })
    }

    pub fn representative(&self, sort: usize, e: usize) -> &Term {
        &self.representatives[sort][e]
    }

    /// The presentation is exact and its structure is a model.
    pub fn is_exact_model(&self) -> bool {
        self.is_saturated() && is_model(&self.structure, &self.theory)
    }

    fn require_saturated(&self) -> Result<(), FreeModelError> {
        if self.is_saturated() {
            Ok(())
        } else {
            Err(FreeModelError::Truncated(self.status))
        }
    }
}

/// Saturates `phi` over the generators of `ctx` for `depth` rounds.
pub fn representing_model(
    theory: &Theory,
    ctx: &Context,
    phi: &Formula,
    depth: usize,
) -> Result<ModelPresentation, FreeModelError> {
    let sig = &theory.signature;
    let mut diags = context_diagnostics(sig, ctx);
    diags.extend(formula_diagnostics(sig, ctx, phi));
    if let Some(d) = diags.into_iter().next() {
        return Err(FreeModelError::IllFormed(d.to_string()));
    }
    let r = saturate(theory, ctx, phi, SaturationBudget::new(depth));
    Ok(ModelPresentation {
        theory: theory.clone(),
        context: ctx.clone(),
        constraint: phi.clone(),
        structure: r.structure,
        representatives: r.representatives,
        generic: r.generic,
        status: r.status,
    })
}

/// Both sides of the representability bijection for one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YonedaReport {
    /// Tuples of the model satisfying the constraint.
    pub tuples: usize,
    /// Homomorphisms from the presentation into the model.
    pub homs: usize,
    /// The map from tuples to homomorphisms is a bijection.
    pub bijective: bool,
}

/// Compares the interpretation of the constraint in `m` with the
/// homomorphisms out of the presentation. Each satisfying tuple induces the
/// map sending a class to the value of its representative at that tuple.
pub fn yoneda_check(p: &ModelPresentation, m: &PartialStructure) -> Result<YonedaReport, FreeModelError> {
    p.require_saturated()?;
    if **m.signature() != **p.signature() || !is_model(m, &p.theory) {
        return Err(FreeModelError::NotAModel(m.name.clone()));
    }
    let tuples = interp_formula(m, &p.context, &p.constraint).map_err(|e| FreeModelError::IllFormed(e.to_string()))?;
    let homs: BTreeSet<Homomorphism> = enumerate_homs(&p.structure, m).into_iter().collect();
    let mut induced = BTreeSet::new();
    let mut bijective = true;
    for tuple in &tuples {
        let h = induced_hom(p, m, &p.context, tuple)?;
        bijective &= homs.contains(&h) && induced.insert(h);
    }
    bijective &= induced.len() == homs.len();
    // Each hom is recovered from its value on the generators.
    for h in &homs {
        let back: Vec<usize> = p
            .context
            .sorts()
            .zip(&p.generic)
            .map(|(s, &e)| h.apply(p.signature().sort_index(s).expect("checked"), e))
            .collect();
        bijective &= tuples.contains(&back);
    }
    Ok(YonedaReport {
        tuples: tuples.len(),
        homs: homs.len(),
        bijective,
    })
}

fn induced_hom(
    p: &ModelPresentation,
    m: &PartialStructure,
    ctx: &Context,
    tuple: &[usize],
) -> Result<Homomorphism, FreeModelError> {
    let mut maps = Vec::with_capacity(p.representatives.len());
    for reps in &p.representatives {
        let mut row = Vec::with_capacity(reps.len());
        for t in reps {
            match interp_term(m, ctx, t, tuple).map_err(|e| FreeModelError::IllFormed(e.to_string()))? {
                Some(v) => row.push(v),
                None => return Err(FreeModelError::Undefined(t.to_string())),
            }
        }
        maps.push(row);
    }
    Ok(Homomorphism { maps })
}

fn discharge(theory: &Theory, s: Sequent, budget: Budget) -> Result<(), FreeModelError> {
    match prove(theory, &s, budget)? {
        Verdict::Proved(_) => Ok(()),
        v => Err(FreeModelError::Obligation {
            sequent: s.to_string(),
            verdict: v.label(),
        }),
    }
}

fn substitution(source: &ModelPresentation, terms: &[Term]) -> Result<HashMap<String, Term>, FreeModelError> {
    if terms.len() != source.context.len() {
        return Err(FreeModelError::IllFormed(format!(
            "expected {} terms, got {}",
            source.context.len(),
            terms.len()
        )));
    }
    Ok(source.context.names().map(str::to_owned).zip(terms.iter().cloned()).collect())
}

/// The homomorphism from `source` (generators `x`, constraint `phi`) to
/// `target` (generators `y`, constraint `psi`) induced by terms `tau` over
/// `y`, after proving `psi |- phi(tau/x)` together with the definedness of
/// every `tau_i`. The class of `s` goes to the class of `s(tau/x)`.
pub fn repn_morphism(
    source: &ModelPresentation,
    target: &ModelPresentation,
    terms: &[Term],
    budget: Budget,
) -> Result<Homomorphism, FreeModelError> {
    source.require_saturated()?;
    target.require_saturated()?;
    let sig = target.signature();
    let map = substitution(source, terms)?;
    for ((v, s), t) in source.context.vars.iter().zip(terms) {
        match sort_of_term(sig, &target.context, t) {
            Ok(found) if &found == s => {}
            Ok(found) => {
                return Err(FreeModelError::IllFormed(format!(
                    "`{t}` has sort `{found}` but replaces `{v}` of sort `{s}`"
                )))
            }
            Err(d) => return Err(FreeModelError::IllFormed(d.message)),
        }
    }
    let mut goal = vec![rename_formula(&source.constraint, &map)];
    goal.extend(terms.iter().map(|t| t.clone().defined()));
    discharge(
        &target.theory,
        Sequent::new(target.context.clone(), target.constraint.clone(), Formula::Conj(goal)),
        budget,
    )?;
    let mut maps = Vec::with_capacity(source.representatives.len());
    for reps in &source.representatives {
        let mut row = Vec::with_capacity(reps.len());
        for s in reps {
            let image = rename_term(s, &map);
            match target.element(&image)? {
                Some((_, e)) => row.push(e),
                None => return Err(FreeModelError::Undefined(image.to_string())),
            }
        }
        maps.push(row);
    }
    let h = Homomorphism { maps };
    if let Some(why) = crate::semantics::hom_violation(&source.structure, &target.structure, &h) {
        return Err(FreeModelError::NotAHomomorphism(why));
    }
    Ok(h)
}

/// A coequalizer of two maps between presentations, with the quotient map.
#[derive(Clone, Debug)]
pub struct Coequalizer {
    pub presentation: ModelPresentation,
    pub quotient: Homomorphism,
}

/// Coequalizes the maps induced by `tau` and `sigma` from `source` to
/// `target` by presenting `psi /\ tau_1 = sigma_1 /\ ...` over the
/// generators of `target`.
pub fn repn_coequalizer(
    source: &ModelPresentation,
    target: &ModelPresentation,
    tau: &[Term],
    sigma: &[Term],
    depth: usize,
    budget: Budget,
) -> Result<Coequalizer, FreeModelError> {
    repn_morphism(source, target, tau, budget)?;
    repn_morphism(source, target, sigma, budget)?;
    let mut parts = vec![target.constraint.clone()];
    parts.extend(tau.iter().zip(sigma).map(|(a, b)| Formula::Eq(a.clone(), b.clone())));
    let presentation = representing_model(&target.theory, &target.context, &Formula::Conj(parts), depth)?;
    presentation.require_saturated()?;
    let mut maps = Vec::new();
    for reps in &target.representatives {
        let mut row = Vec::new();
        for t in reps {
            match presentation.element(t)? {
                Some((_, e)) => row.push(e),
                None => return Err(FreeModelError::Undefined(t.to_string())),
            }
        }
        maps.push(row);
    }
    let quotient = Homomorphism { maps };
    if !check_hom(&target.structure, &presentation.structure, &quotient) {
        return Err(FreeModelError::NotAHomomorphism("quotient map".into()));
    }
    Ok(Coequalizer { presentation, quotient })
}

/// The free algebra on a base model, with its unit.
#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    pub presentation: ModelPresentation,
    /// From the base model into the underlying base structure of the algebra.
    pub unit: Homomorphism,
    /// The underlying base structure of the algebra.
    pub underlying: PartialStructure,
}

/// The diagram of a finite structure: one generator per element, one atom
/// per table entry.
pub fn diagram(m: &PartialStructure, avoid: &Signature) -> (Context, Formula) {
    let sig = m.signature();
    let mut names: Vec<Vec<String>> = Vec::new();
    let mut used = BTreeSet::new();
    let all_plain = (0..sig.sort_count()).all(|s| {
        m.carrier(s)
            .iter()
            .all(|e| is_plain_ident(e) && !avoid.has_symbol(e) && used.insert(e.clone()) && !matches!(e.as_str(), "true" | "def" | "and"))
    });
    for s in 0..sig.sort_count() {
        names.push(
            (0..m.carrier_size(s))
                .map(|i| {
                    if all_plain {
                        m.element_name(s, i).to_owned()
                    } else {
                        format!("g{s}_{i}")
                    }
                })
                .collect(),
        );
    }
    let mut ctx = Context::new();
    for (s, row) in names.iter().enumerate() {
        for n in row {
            ctx.push(n.clone(), sig.sort_name(s));
        }
    }
    let var = |s: usize, e: usize| Term::var(names[s][e].clone());
    let mut atoms = Vec::new();
    for (f, sym) in sig.functions().enumerate() {
        let args_s = m.function_arg_sorts(f);
        let res_s = m.function_result_sort(f);
        for (args, &v) in m.function_table(f) {
            let lhs = Term::app(sym.name.clone(), args.iter().zip(&args_s).map(|(&a, &s)| var(s, a)).collect());
            atoms.push(Formula::Eq(lhs, var(res_s, v)));
        }
    }
    for (r, sym) in sig.relations().enumerate() {
        let arg_s = m.relation_arg_sorts(r);
        for t in m.relation_table(r) {
            atoms.push(Formula::Rel(
                sym.name.clone(),
                t.iter().zip(&arg_s).map(|(&a, &s)| var(s, a)).collect(),
            ));
        }
    }
    (ctx, Formula::conj(atoms))
}

/// The free algebra of a relative theory on a finite base model: the
/// representing model, over the associated theory, of the diagram of `m`.
/// The elements of `m` are the generators.
pub fn free_algebra(r: &RelativeTheory, m: &PartialStructure, depth: usize) -> Result<FreeAlgebra, FreeModelError> {
    if **m.signature() != *r.base.signature {
        return Err(FreeModelError::NotAModel(format!("`{}` is not over the base signature", m.name)));
    }
    if !is_model(m, &r.base) {
        return Err(FreeModelError::NotAModel(m.name.clone()));
    }
    let t = pht_of(r)?;
    let (ctx, phi) = diagram(m, &t.signature);
    let presentation = representing_model(&t, &ctx, &phi, depth)?;
    let incl = TheoryMorphism::inclusion(&r.base, &t).expect("the base is included");
    let underlying = incl
        .reduct(&presentation.structure)
        .map_err(|e| FreeModelError::IllFormed(e.to_string()))?;
    let sig = m.signature();
    let mut maps = vec![Vec::new(); sig.sort_count()];
    let mut k = 0;
    for (s, row) in maps.iter_mut().enumerate() {
        for _ in 0..m.carrier_size(s) {
            row.push(presentation.generic[k]);
            k += 1;
        }
    }
    let unit = Homomorphism { maps };
    if let Some(why) = crate::semantics::hom_violation(m, &underlying, &unit) {
        return Err(FreeModelError::NotAHomomorphism(why));
    }
    Ok(FreeAlgebra {
        presentation,
        unit,
        underlying,
    })
}
