//! Simultaneous substitution of terms for variables.

use std::collections::HashMap;

use thiserror::Error;

use super::ast::{Context, Formula, Sequent, Signature, Term};
use super::wf::{formula_diagnostics, sort_of_term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstError {
    #[error("no replacement given for variable `{0}`")]
    Missing(String),
    #[error("`{0}` is not a variable of the source context")]
    Extraneous(String),
    #[error("replacement for `{var}` has sort `{found}`, expected `{expected}`")]
    SortMismatch {
        var: String,
        expected: String,
        found: String,
    },
    #[error("replacement for `{var}` is ill-formed in the target context: {reason}")]
    IllFormedReplacement { var: String, reason: String },
    #[error("formula is ill-formed in the source context: {0}")]
    IllFormedSource(String),
}

/// Unchecked simultaneous substitution on a term. Variables absent from `map` stay put.
pub fn rename_term(t: &Term, map: &HashMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rename_term(a, map)).collect()),
    }
}

/// Unchecked simultaneous substitution on a formula.
pub fn rename_formula(phi: &Formula, map: &HashMap<String, Term>) -> Formula {
    match phi {
        Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(|a| rename_term(a, map)).collect()),
        Formula::Eq(l, r) => Formula::Eq(rename_term(l, map), rename_term(r, map)),
        Formula::Truth => Formula::Truth,
        Formula::Conj(parts) => Formula::Conj(parts.iter().map(|p| rename_formula(p, map)).collect()),
    }
}

pub fn rename_sequent(s: &Sequent, map: &HashMap<String, Term>, context: Context) -> Sequent {
    Sequent::new(context, rename_formula(&s.premise, map), rename_formula(&s.conclusion, map))
}

/// A substitution from a source context into terms of a target context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub source: Context,
    pub target: Context,
    pub terms: Vec<Term>,
}

impl Substitution {
    /// Builds and checks a substitution from an assignment list keyed by source variable.
    pub fn new(
        sig: &Signature,
        source: &Context,
        target: &Context,
        assignment: &[(String, Term)],
    ) -> Result<Self, SubstError> {
        for (v, _) in assignment {
            if !source.contains(v) {
                return Err(SubstError::Extraneous(v.clone()));
            }
        }
        let mut terms = Vec::with_capacity(source.len());
        for (v, sort) in &source.vars {
            let t = assignment
                .iter()
                .find(|(w, _)| w == v)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| SubstError::Missing(v.clone()))?;
            check_replacement(sig, target, v, sort, &t)?;
            terms.push(t);
        }
        Ok(Substitution {
            source: source.clone(),
            target: target.clone(),
            terms,
        })
    }

    /// Builds and checks a substitution from positional terms.
    pub fn positional(
        sig: &Signature,
        source: &Context,
        target: &Context,
        terms: Vec<Term>,
    ) -> Result<Self, SubstError> {
        if terms.len() < source.len() {
            return Err(SubstError::Missing(source.vars[terms.len()].0.clone()));
        }
        if terms.len() > source.len() {
            return Err(SubstError::Extraneous(format!("position {}", source.len())));
        }
        for ((v, sort), t) in source.vars.iter().zip(&terms) {
            check_replacement(sig, target, v, sort, t)?;
        }
        Ok(Substitution {
            source: source.clone(),
            target: target.clone(),
            terms,
        })
    }

    pub fn map(&self) -> HashMap<String, Term> {
        self.source
            .names()
            .map(str::to_owned)
            .zip(self.terms.iter().cloned())
            .collect()
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        rename_term(t, &self.map())
    }

    pub fn apply_formula(&self, phi: &Formula) -> Formula {
        rename_formula(phi, &self.map())
    }

    /// `self` followed by `next`: replacement terms of `self` are pushed through `next`.
    pub fn then(&self, next: &Substitution) -> Substitution {
        let m = next.map();
        Substitution {
            source: self.source.clone(),
            target: next.target.clone(),
            terms: self.terms.iter().map(|t| rename_term(t, &m)).collect(),
        }
    }
}

fn check_replacement(sig: &Signature, target: &Context, v: &str, sort: &str, t: &Term) -> Result<(), SubstError> {
    match sort_of_term(sig, target, t) {
        Ok(found) if found == sort => Ok(()),
        Ok(found) => Err(SubstError::SortMismatch {
            var: v.to_owned(),
            expected: sort.to_owned(),
            found,
        }),
        Err(d) => Err(SubstError::IllFormedReplacement {
            var: v.to_owned(),
            reason: d.message,
        }),
    }
}

/// Checked substitution `phi(terms/context)` into the target context.
pub fn substitute_formula(
    sig: &Signature,
    phi: &Formula,
    source: &Context,
    target: &Context,
    assignment: &[(String, Term)],
) -> Result<Formula, SubstError> {
    if let Some(d) = formula_diagnostics(sig, source, phi).into_iter().next() {
        return Err(SubstError::IllFormedSource(d.message));
    }
    let s = Substitution::new(sig, source, target, assignment)?;
    Ok(s.apply_formula(phi))
}

/// Checked substitution on a term.
pub fn substitute_term(
    sig: &Signature,
    t: &Term,
    source: &Context,
    target: &Context,
    assignment: &[(String, Term)],
) -> Result<Term, SubstError> {
    if let Err(d) = sort_of_term(sig, source, t) {
        return Err(SubstError::IllFormedSource(d.message));
    }
    let s = Substitution::new(sig, source, target, assignment)?;
    Ok(s.apply_term(t))
}
