use thiserror::Error;

use super::derivation::Derivation;
use super::elaborate::entail;
use super::rules::RuleInstance;
use crate::finder::find_model;
use crate::saturation::{saturate, SaturationBudget, SaturationStatus};
use crate::semantics::{compile_formula, counterexample_unchecked, eval_formula, PartialStructure};
use crate::syntax::{sequent_diagnostics, theory_diagnostics, Sequent, Term, Theory};

/// Resource bounds for [`prove`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Saturation rounds for the term model of the premise.
    pub depth: usize,
    /// Largest carrier, per sort, tried by the countermodel search.
    pub model_size: usize,
}

impl Budget {
    pub fn new(depth: usize, model_size: usize) -> Self {
        Budget { depth, model_size }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(4, 4)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BudgetError {
    #[error("the countermodel size bound must be at least 1")]
    ModelSize,
    #[error("ill-formed input: {0}")]
    IllFormed(String),
}

/// Evidence for a proved sequent.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// An explicit derivation, found for structurally trivial sequents.
    Derivation(Derivation),
    /// The term model of the premise after the recorded rounds: the generic
    /// tuple, named by representative terms, satisfies the conclusion.
    Saturation {
        status: SaturationStatus,
        generic: Vec<Term>,
        elements: usize,
    },
}

/// The outcome of [`prove`].
#[derive(Clone, Debug)]
pub enum Verdict {
    Proved(Certificate),
    /// A model of the theory with a tuple satisfying the premise but not the
    /// conclusion.
    Refuted { model: PartialStructure, witness: Vec<usize> },
    /// Neither a proof nor a countermodel within the budget.
    Unknown { status: SaturationStatus },
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Proved(_) => "Proved",
            Verdict::Refuted { .. } => "Refuted",
            Verdict::Unknown { .. } => "Unknown",
        }
    }
}

fn trivial_derivation(theory: &Theory, s: &Sequent) -> Option<Derivation> {
    for a in &theory.axioms {
        if a.sequent.alpha_eq(s) {
            let d = Derivation::new(s.clone(), RuleInstance::Axiom { name: a.name.clone() }, vec![]);
            return Some(d);
        }
    }
    entail(theory, &s.context, &s.premise, &[], &s.conclusion)
}

/// Decides `theory |- s` up to a budget.
///
/// The premise is saturated into a term model for `budget.depth` rounds.
/// Every fact in that model is a consequence of the premise, so the sequent
/// is proved as soon as the generic tuple satisfies the conclusion. When the
/// term model reaches a fixed point without that, it is itself a model that
/// refutes the sequent; a countermodel no larger than `budget.model_size`
/// per sort is preferred when one exists. Otherwise the finite models up to
/// that size are searched for a counterexample.
pub fn prove(theory: &Theory, s: &Sequent, budget: Budget) -> Result<Verdict, BudgetError> {
    if budget.model_size == 0 {
        return Err(BudgetError::ModelSize);
    }
    if let Some(d) = theory_diagnostics(theory).into_iter().next() {
        return Err(BudgetError::IllFormed(d.to_string()));
    }
    if let Some(d) = sequent_diagnostics(&theory.signature, s).into_iter().next() {
        return Err(BudgetError::IllFormed(d.to_string()));
    }
    let sat = saturate(theory, &s.context, &s.premise, SaturationBudget::new(budget.depth));
    let sig = &theory.signature;
    let conclusion = compile_formula(sig, &s.context, &s.conclusion);
    if eval_formula(&sat.structure, &conclusion, &sat.generic) {
        if let Some(d) = trivial_derivation(theory, s) {
            return Ok(Verdict::Proved(Certificate::Derivation(d)));
        }
        let generic = s
            .context
            .sorts()
            .zip(&sat.generic)
            .map(|(sort, &e)| sat.representatives[sig.sort_index(sort).expect("checked")][e].clone())
            .collect();
        return Ok(Verdict::Proved(Certificate::Saturation {
            status: sat.status,
            generic,
            elements: sat.structure.size(),
        }));
    }
    let small = |m: &PartialStructure| m.carrier_sizes().iter().all(|&n| n <= budget.model_size);
    if sat.status.is_saturated() && small(&sat.structure) {
        let witness = sat.generic.clone();
        return Ok(Verdict::Refuted {
            model: sat.structure,
            witness,
        });
    }
    let mut witness = None;
    let found = find_model(theory, budget.model_size, &mut |m| match counterexample_unchecked(m, s) {
        Some(w) => {
            witness = Some(w);
            true
        }
        None => false,
    });
    if let (Some(model), Some(witness)) = (found, witness) {
        return Ok(Verdict::Refuted { model, witness });
    }
    if sat.status.is_saturated() {
        let witness = sat.generic.clone();
        return Ok(Verdict::Refuted {
            model: sat.structure,
            witness,
        });
    }
    Ok(Verdict::Unknown { status: sat.status })
}
