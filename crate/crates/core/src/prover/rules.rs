use std::borrow::Borrow;
use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::syntax::{
    context_diagnostics, formula_diagnostics, sort_of_term, Context, Formula, Sequent, Substitution, Term, Theory,
};

/// Why a rule instance does not apply.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("{rule} expects {expected} premises, got {found}")]
    Arity { rule: &'static str, expected: usize, found: usize },
    #[error("no axiom named `{0}`")]
    UnknownAxiom(String),
    #[error("premises of Cut have different contexts")]
    CutContext,
    #[error("the conclusion of the first Cut premise is not the premise of the second")]
    CutMiddle,
    #[error("premise {index} of IConj {reason}")]
    IConjPremise { index: usize, reason: &'static str },
    #[error("variable index {index} out of range for a context of length {len}")]
    VarIndex { index: usize, len: usize },
    #[error("argument index {index} out of range for `{symbol}` with {arity} arguments")]
    ArgIndex { symbol: String, index: usize, arity: usize },
    #[error("conjunct index {index} out of range for a conjunction of {len}")]
    ConjIndex { index: usize, len: usize },
    #[error("Eq needs variable lists of equal length and matching sorts: {0}")]
    EqLists(String),
    #[error("substitution does not apply: {0}")]
    Subst(String),
    #[error("ill-formed: {0}")]
    IllFormed(String),
}

/// Rule names, used in derivation files and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum RuleName {
    Axiom,
    Id,
    Cut,
    Subst,
    Refl,
    Eq,
    SRel,
    SEq,
    SFun,
    EConj,
    IConj,
}

impl RuleName {
    pub const ALL: [RuleName; 11] = [
        RuleName::Axiom,
        RuleName::Id,
        RuleName::Cut,
        RuleName::Subst,
        RuleName::Refl,
        RuleName::Eq,
        RuleName::SRel,
        RuleName::SEq,
        RuleName::SFun,
        RuleName::EConj,
        RuleName::IConj,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::Axiom => "Axiom",
            RuleName::Id => "Id",
            RuleName::Cut => "Cut",
            RuleName::Subst => "Subst",
            RuleName::Refl => "Refl",
            RuleName::Eq => "Eq",
            RuleName::SRel => "SRel",
            RuleName::SEq => "SEq",
            RuleName::SFun => "SFun",
            RuleName::EConj => "EConj",
            RuleName::IConj => "IConj",
        }
    }

    pub fn parse(s: &str) -> Option<RuleName> {
        RuleName::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

impl std::fmt::Display for RuleName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which side of an equation `SEq` extracts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A rule together with the data that fixes its conclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleInstance {
    /// An axiom of the theory, by name.
    Axiom { name: String },
    /// `phi |- phi`.
    Id { context: Context, formula: Formula },
    /// From `phi |- psi` and `psi |- chi` infer `phi |- chi`.
    Cut,
    /// From `phi |-_x psi` infer `phi[t/x] /\ t_0 def /\ ... |-_y psi[t/x]`.
    Subst { target: Context, terms: Vec<Term> },
    /// `true |- x_i = x_i`.
    Refl { context: Context, index: usize },
    /// `phi /\ x_0 = y_0 /\ ... |-_z phi[y/x]`.
    Eq {
        context: Context,
        formula: Formula,
        xs: Vec<String>,
        ys: Vec<String>,
    },
    /// `R(t) |- t_j def`.
    SRel {
        context: Context,
        relation: String,
        args: Vec<Term>,
        index: usize,
    },
    /// `t = u |- t def` or `t = u |- u def`.
    SEq {
        context: Context,
        lhs: Term,
        rhs: Term,
        side: Side,
    },
    /// `f(t) def |- t_j def`.
    SFun {
        context: Context,
        function: String,
        args: Vec<Term>,
        index: usize,
    },
    /// `phi_0 /\ ... /\ phi_n |- phi_j`.
    EConj {
        context: Context,
        conjuncts: Vec<Formula>,
        index: usize,
    },
    /// From `phi |- psi_i` for each i infer `phi |- psi_0 /\ ... /\ psi_n`.
    IConj { context: Context, premise: Formula },
}

impl RuleInstance {
    pub fn name(&self) -> RuleName {
        match self {
            RuleInstance::Axiom { .. } => RuleName::Axiom,
            RuleInstance::Id { .. } => RuleName::Id,
            RuleInstance::Cut => RuleName::Cut,
            RuleInstance::Subst { .. } => RuleName::Subst,
            RuleInstance::Refl { .. } => RuleName::Refl,
            RuleInstance::Eq { .. } => RuleName::Eq,
            RuleInstance::SRel { .. } => RuleName::SRel,
            RuleInstance::SEq { .. } => RuleName::SEq,
            RuleInstance::SFun { .. } => RuleName::SFun,
            RuleInstance::EConj { .. } => RuleName::EConj,
            RuleInstance::IConj { .. } => RuleName::IConj,
        }
    }
}

fn arity(rule: &'static str, expected: usize, premises: &[&Sequent]) -> Result<(), RuleError> {
    if premises.len() != expected {
        return Err(RuleError::Arity {
            rule,
            expected,
            found: premises.len(),
        });
    }
    Ok(())
}

fn check_formula(theory: &Theory, ctx: &Context, phi: &Formula) -> Result<(), RuleError> {
    if let Some(d) = context_diagnostics(&theory.signature, ctx).into_iter().next() {
        return Err(RuleError::IllFormed(d.to_string()));
    }
    match formula_diagnostics(&theory.signature, ctx, phi).into_iter().next() {
        Some(d) => Err(RuleError::IllFormed(d.to_string())),
        None => Ok(()),
    }
}

/// The conclusion of `instance` applied to `premises`.
///
/// Premise contexts are compared after positional renaming, so a derivation
/// may use any variable names as long as each sequent is consistent.
pub fn check_rule<P: Borrow<Sequent>>(theory: &Theory, instance: &RuleInstance, premises: &[P]) -> Result<Sequent, RuleError> {
    let premises: Vec<&Sequent> = premises.iter().map(Borrow::borrow).collect();
    apply(theory, instance, &premises)
}

fn apply(theory: &Theory, instance: &RuleInstance, premises: &[&Sequent]) -> Result<Sequent, RuleError> {
    match instance {
        RuleInstance::Axiom { name } => {
            arity("Axiom", 0, premises)?;
            theory
                .axiom(name)
                .map(|a| a.sequent.clone())
                .ok_or_else(|| RuleError::UnknownAxiom(name.clone()))
        }
        RuleInstance::Id { context, formula } => {
            arity("Id", 0, premises)?;
            check_formula(theory, context, formula)?;
            Ok(Sequent::new(context.clone(), formula.clone(), formula.clone()))
        }
        RuleInstance::Cut => {
            arity("Cut", 2, premises)?;
            let (a, b) = (premises[0].alpha_normal(), premises[1].alpha_normal());
            if a.context != b.context {
                return Err(RuleError::CutContext);
            }
            if a.conclusion != b.premise {
                return Err(RuleError::CutMiddle);
            }
            let first = &premises[0];
            let back: HashMap<String, Term> = a
                .context
                .names()
                .map(str::to_owned)
                .zip(first.context.terms())
                .collect();
            Ok(Sequent::new(
                first.context.clone(),
                first.premise.clone(),
                crate::syntax::rename_formula(&b.conclusion, &back),
            ))
        }
        RuleInstance::Subst { target, terms } => {
            arity("Subst", 1, premises)?;
            let p = &premises[0];
            if let Some(d) = context_diagnostics(&theory.signature, target).into_iter().next() {
                return Err(RuleError::IllFormed(d.to_string()));
            }
            let s = Substitution::positional(&theory.signature, &p.context, target, terms.clone())
                .map_err(|e| RuleError::Subst(e.to_string()))?;
            let mut parts = vec![s.apply_formula(&p.premise)];
            parts.extend(terms.iter().map(|t| t.clone().defined()));
            Ok(Sequent::new(
                target.clone(),
                Formula::Conj(parts),
                s.apply_formula(&p.conclusion),
            ))
        }
        RuleInstance::Refl { context, index } => {
            arity("Refl", 0, premises)?;
            check_formula(theory, context, &Formula::Truth)?;
            let (x, _) = context.vars.get(*index).ok_or(RuleError::VarIndex {
                index: *index,
                len: context.len(),
            })?;
            Ok(Sequent::new(context.clone(), Formula::Truth, Term::var(x.clone()).defined()))
        }
        RuleInstance::Eq {
            context,
            formula,
            xs,
            ys,
        } => {
            arity("Eq", 0, premises)?;
            check_formula(theory, context, formula)?;
            if xs.len() != ys.len() {
                return Err(RuleError::EqLists(format!("{} versus {} variables", xs.len(), ys.len())));
            }
            for list in [xs, ys] {
                let mut seen = HashSet::new();
                for v in list {
                    if !seen.insert(v) {
                        return Err(RuleError::EqLists(format!("`{v}` repeated")));
                    }
                }
            }
            let mut map = HashMap::new();
            let mut eqs = Vec::with_capacity(xs.len());
            for (x, y) in xs.iter().zip(ys) {
                let (sx, sy) = (context.sort_of(x), context.sort_of(y));
                match (sx, sy) {
                    (Some(a), Some(b)) if a == b => {}
                    (None, _) => return Err(RuleError::EqLists(format!("`{x}` is not in the context"))),
                    (_, None) => return Err(RuleError::EqLists(format!("`{y}` is not in the context"))),
                    _ => return Err(RuleError::EqLists(format!("`{x}` and `{y}` have different sorts"))),
                }
                map.insert(x.clone(), Term::var(y.clone()));
                eqs.push(Formula::eq(Term::var(x.clone()), Term::var(y.clone())));
            }
            let mut parts = vec![formula.clone()];
            parts.extend(eqs);
            Ok(Sequent::new(
                context.clone(),
                Formula::Conj(parts),
                crate::syntax::rename_formula(formula, &map),
            ))
        }
        RuleInstance::SRel {
            context,
            relation,
            args,
            index,
        } => {
            arity("SRel", 0, premises)?;
            let atom = Formula::rel(relation.clone(), args.clone());
            check_formula(theory, context, &atom)?;
            let t = args.get(*index).ok_or_else(|| RuleError::ArgIndex {
                symbol: relation.clone(),
                index: *index,
                arity: args.len(),
            })?;
            Ok(Sequent::new(context.clone(), atom, t.clone().defined()))
        }
        RuleInstance::SEq { context, lhs, rhs, side } => {
            arity("SEq", 0, premises)?;
            let atom = Formula::eq(lhs.clone(), rhs.clone());
            check_formula(theory, context, &atom)?;
            let t = match side {
                Side::Left => lhs,
                Side::Right => rhs,
            };
            Ok(Sequent::new(context.clone(), atom, t.clone().defined()))
        }
        RuleInstance::SFun {
            context,
            function,
            args,
            index,
        } => {
            arity("SFun", 0, premises)?;
            let t = Term::app(function.clone(), args.clone());
            if let Err(d) = sort_of_term(&theory.signature, context, &t) {
                return Err(RuleError::IllFormed(d.to_string()));
            }
            check_formula(theory, context, &Formula::Truth)?;
            let a = args.get(*index).ok_or_else(|| RuleError::ArgIndex {
                symbol: function.clone(),
                index: *index,
                arity: args.len(),
            })?;
            Ok(Sequent::new(context.clone(), t.defined(), a.clone().defined()))
        }
        RuleInstance::EConj {
            context,
            conjuncts,
            index,
        } => {
            arity("EConj", 0, premises)?;
            let phi = Formula::Conj(conjuncts.clone());
            check_formula(theory, context, &phi)?;
            let c = conjuncts.get(*index).ok_or(RuleError::ConjIndex {
                index: *index,
                len: conjuncts.len(),
            })?;
            Ok(Sequent::new(context.clone(), phi, c.clone()))
        }
        RuleInstance::IConj { context, premise } => {
            check_formula(theory, context, premise)?;
            let base = Sequent::new(context.clone(), premise.clone(), Formula::Truth).alpha_normal();
            let mut parts = Vec::with_capacity(premises.len());
            for (i, p) in premises.iter().enumerate() {
                if p.context.sorts().ne(context.sorts()) {
                    return Err(RuleError::IConjPremise {
                        index: i,
                        reason: "has a different context",
                    });
                }
                let pn = p.alpha_normal();
                if pn.premise != base.premise {
                    return Err(RuleError::IConjPremise {
                        index: i,
                        reason: "has a different premise",
                    });
                }
                // Bring the conclusion back to the instance's variable names.
                let back: HashMap<String, Term> = pn
                    .context
                    .names()
                    .map(str::to_owned)
                    .zip(context.terms())
                    .collect();
                parts.push(crate::syntax::rename_formula(&pn.conclusion, &back));
            }
            Ok(Sequent::new(context.clone(), premise.clone(), Formula::conj(parts)))
        }
    }
}
