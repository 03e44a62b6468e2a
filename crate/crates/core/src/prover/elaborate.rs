use super::derivation::Derivation;
use super::rules::{RuleInstance, Side};
use crate::syntax::{Context, Formula, Term, Theory};

struct Entailer<'a> {
    theory: &'a Theory,
    ctx: &'a Context,
    phi: &'a Formula,
    facts: &'a [Derivation],
}

/// Position of `goal` inside the conjunction tree of `f`, as conjunct indices.
fn conj_path(f: &Formula, goal: &Formula) -> Option<Vec<usize>> {
    if f == goal {
        return Some(Vec::new());
    }
    if let Formula::Conj(parts) = f {
        for (i, p) in parts.iter().enumerate() {
            if let Some(mut rest) = conj_path(p, goal) {
                rest.insert(0, i);
                return Some(rest);
            }
        }
    }
    None
}

/// Path of child positions from `u` down to an occurrence of `t`.
fn term_path(u: &Term, t: &Term) -> Option<Vec<usize>> {
    if u == t {
        return Some(Vec::new());
    }
    if let Term::App(_, args) = u {
        for (i, a) in args.iter().enumerate() {
            if let Some(mut rest) = term_path(a, t) {
                rest.insert(0, i);
                return Some(rest);
            }
        }
    }
    None
}

impl Entailer<'_> {
    fn step(&self, rule: RuleInstance, premises: Vec<Derivation>) -> Option<Derivation> {
        Derivation::try_infer(self.theory, rule, premises).ok()
    }

    fn cut(&self, a: Derivation, b: Derivation) -> Option<Derivation> {
        self.step(RuleInstance::Cut, vec![a, b])
    }

    fn identity(&self) -> Option<Derivation> {
        self.step(
            RuleInstance::Id {
                context: self.ctx.clone(),
                formula: self.phi.clone(),
            },
            vec![],
        )
    }

    fn truth(&self) -> Option<Derivation> {
        self.step(
            RuleInstance::IConj {
                context: self.ctx.clone(),
                premise: self.phi.clone(),
            },
            vec![],
        )
    }

    fn project(&self, mut d: Derivation, from: &Formula, path: &[usize]) -> Option<Derivation> {
        let mut cur = from.clone();
        for &j in path {
            let Formula::Conj(parts) = cur else { return None };
            let e = self.step(
                RuleInstance::EConj {
                    context: self.ctx.clone(),
                    conjuncts: parts.clone(),
                    index: j,
                },
                vec![],
            )?;
            d = self.cut(d, e)?;
            cur = parts[j].clone();
        }
        Some(d)
    }

    /// `phi |- goal` using only the premise, the facts, and conjunct projections.
    fn lookup(&self, goal: &Formula) -> Option<Derivation> {
        if let Some(path) = conj_path(self.phi, goal) {
            return self.project(self.identity()?, self.phi, &path);
        }
        for f in self.facts {
            let c = &f.conclusion.conclusion;
            if let Some(path) = conj_path(c, goal) {
                return self.project(f.clone(), c, &path);
            }
        }
        None
    }

    fn available_atoms(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = self.phi.atoms().into_iter().cloned().collect();
        for f in self.facts {
            out.extend(f.conclusion.conclusion.atoms().into_iter().cloned());
        }
        out
    }

    fn defined(&self, t: &Term) -> Option<Derivation> {
        if let Some(d) = self.lookup(&t.clone().defined()) {
            return Some(d);
        }
        if let Term::Var(x) = t {
            if let Some(index) = self.ctx.position(x) {
                let refl = self.step(
                    RuleInstance::Refl {
                        context: self.ctx.clone(),
                        index,
                    },
                    vec![],
                )?;
                return self.cut(self.truth()?, refl);
            }
        }
        for atom in self.available_atoms() {
            let tops: Vec<(Term, RuleInstance)> = match &atom {
                Formula::Eq(l, r) => vec![
                    (
                        l.clone(),
                        RuleInstance::SEq {
                            context: self.ctx.clone(),
                            lhs: l.clone(),
                            rhs: r.clone(),
                            side: Side::Left,
                        },
                    ),
                    (
                        r.clone(),
                        RuleInstance::SEq {
                            context: self.ctx.clone(),
                            lhs: l.clone(),
                            rhs: r.clone(),
                            side: Side::Right,
                        },
                    ),
                ],
                Formula::Rel(name, args) => args
                    .iter()
                    .enumerate()
                    .map(|(index, a)| {
                        (
                            a.clone(),
                            RuleInstance::SRel {
                                context: self.ctx.clone(),
                                relation: name.clone(),
                                args: args.clone(),
                                index,
                            },
                        )
                    })
                    .collect(),
                _ => vec![],
            };
            for (u, rule) in tops {
                let Some(path) = term_path(&u, t) else { continue };
                let source = self.lookup(&atom)?;
                let mut d = if atom == u.clone().defined() {
                    source
                } else {
                    self.cut(source, self.step(rule, vec![])?)?
                };
                let mut cur = u;
                for &i in &path {
                    let Term::App(f, args) = cur else { return None };
                    let s = self.step(
                        RuleInstance::SFun {
                            context: self.ctx.clone(),
                            function: f.clone(),
                            args: args.clone(),
                            index: i,
                        },
                        vec![],
                    )?;
                    d = self.cut(d, s)?;
                    cur = args[i].clone();
                }
                return Some(d);
            }
        }
        None
    }

    fn derive(&self, goal: &Formula) -> Option<Derivation> {
        if let Some(d) = self.lookup(goal) {
            return Some(d);
        }
        match goal {
            Formula::Truth => self.truth(),
            Formula::Conj(parts) => {
                let ds = parts.iter().map(|p| self.derive(p)).collect::<Option<Vec<_>>>()?;
                self.step(
                    RuleInstance::IConj {
                        context: self.ctx.clone(),
                        premise: self.phi.clone(),
                    },
                    ds,
                )
            }
            Formula::Eq(l, r) if l == r => self.defined(l),
            _ => None,
        }
    }
}

/// Builds a derivation of `phi |-_ctx goal` from structural reasoning alone.
///
/// Each entry of `facts` must be a derivation with premise `phi` in the same
/// context. The search covers identity, conjunct projection and
/// introduction, and definedness of subterms of available atoms (including
/// context variables). It returns `None` if `goal` needs more than that.
pub fn entail(theory: &Theory, ctx: &Context, phi: &Formula, facts: &[Derivation], goal: &Formula) -> Option<Derivation> {
    Entailer {
        theory,
        ctx,
        phi,
        facts,
    }
    .derive(goal)
}
