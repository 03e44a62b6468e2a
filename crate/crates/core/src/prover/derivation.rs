use super::rules::{check_rule, RuleInstance};
use crate::syntax::{sequent_diagnostics, Sequent, Theory};

/// A finite proof tree. Each node carries its conclusion and the rule that
/// produced it from the conclusions of its children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: RuleInstance,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(conclusion: Sequent, rule: RuleInstance, premises: Vec<Derivation>) -> Self {
        Derivation {
            conclusion,
            rule,
            premises,
        }
    }

    /// Builds a node whose conclusion is computed by the rule. Panics if the
    /// rule does not apply, so it is meant for trusted construction code.
    pub fn infer(theory: &Theory, rule: RuleInstance, premises: Vec<Derivation>) -> Self {
        let roots: Vec<Sequent> = premises.iter().map(|p| p.conclusion.clone()).collect();
        let conclusion = check_rule(theory, &rule, &roots).unwrap_or_else(|e| panic!("{} does not apply: {e}", rule.name()));
        Derivation::new(conclusion, rule, premises)
    }

    /// Like [`infer`](Self::infer) but reports failure.
    pub fn try_infer(theory: &Theory, rule: RuleInstance, premises: Vec<Derivation>) -> Result<Self, super::RuleError> {
        let roots: Vec<Sequent> = premises.iter().map(|p| p.conclusion.clone()).collect();
        let conclusion = check_rule(theory, &rule, &roots)?;
        Ok(Derivation::new(conclusion, rule, premises))
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// The node at a path of child indices.
    pub fn node(&self, path: &[usize]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get(i)?.node(rest),
        }
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get_mut(i)?.node_mut(rest),
        }
    }

    /// Paths of all nodes in pre-order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        fn go(d: &Derivation, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(path.clone());
            for (i, p) in d.premises.iter().enumerate() {
                path.push(i);
                go(p, path, out);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Outcome of checking a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationCheck {
    /// The first failing node in post-order, with the reason.
    pub failure: Option<(Vec<usize>, String)>,
}

impl DerivationCheck {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks every node bottom-up; reports the first failing node.
pub fn check_derivation(theory: &Theory, d: &Derivation) -> DerivationCheck {
    fn go(theory: &Theory, d: &Derivation, path: &mut Vec<usize>) -> Option<(Vec<usize>, String)> {
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            let r = go(theory, p, path);
            path.pop();
            if r.is_some() {
                return r;
            }
        }
        if let Some(diag) = sequent_diagnostics(&theory.signature, &d.conclusion).into_iter().next() {
            return Some((path.clone(), format!("ill-formed sequent: {diag}")));
        }
        let roots: Vec<&Sequent> = d.premises.iter().map(|p| &p.conclusion).collect();
        match check_rule(theory, &d.rule, &roots) {
            Err(e) => Some((path.clone(), e.to_string())),
            Ok(c) if !c.alpha_eq(&d.conclusion) => Some((
                path.clone(),
                format!("{} yields `{c}`, not `{}`", d.rule.name(), d.conclusion),
            )),
            Ok(_) => None,
        }
    }
    DerivationCheck {
        failure: go(theory, d, &mut Vec::new()),
    }
}
