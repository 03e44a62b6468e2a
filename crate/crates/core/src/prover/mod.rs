//! Proof checking and bounded proof search.
//!
//! [`check_rule`] computes the conclusion of a single inference step and
//! [`check_derivation`] walks a whole tree. [`prove`] decides a sequent up to
//! a budget: it saturates the premise into a term model, looks at the generic
//! tuple, and falls back to a bounded search for finite countermodels.

mod derivation;
mod elaborate;
pub mod golden;
mod rules;
mod search;
mod text;

pub use derivation::{check_derivation, Derivation, DerivationCheck};
pub use elaborate::entail;
pub use rules::{check_rule, RuleError, RuleInstance, RuleName, Side};
pub use search::{prove, Budget, BudgetError, Certificate, Verdict};
pub use text::{parse_derivation, print_derivation, DerivationParseError};
