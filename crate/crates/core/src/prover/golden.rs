//! Reference derivations of the basic derived rules of partial Horn logic,
//! and systematic perturbations of them.
//!
//! Every tree here is built from primitive rule instances only. Where the
//! classical presentation of a lemma skips a structural step (regrouping a
//! conjunction, weakening a context), the step is spelled out with Cut, EConj,
//! IConj and the strictness rules, and the intermediate sequents of the
//! classical presentation appear as nodes of the tree.

use super::derivation::Derivation;
use super::elaborate::entail;
use super::rules::{check_rule, RuleInstance, Side};
use crate::syntax::{parse_theory, Context, Formula, Sequent, Term, Theory};

const SOURCE: &str = "\
theory golden
sorts: *
fun e : -> *;
fun mul : * * -> *;
fun inv : * -> *;
rel leq : * *;
rel P0 : *;
rel P1 : *;
rel Q0 : *;
rel Q1 : *;
rel C : *;
rel D : *;
axiom hyp0 [x:*] P0(x) |- Q0(x);
axiom hyp1 [x:*] P1(x) |- Q1(x);
axiom hyp [x:*] C(x) /\\ (Q0(x) /\\ Q1(x)) |- D(x);
";

/// The signature shared by all reference derivations. Its only axioms are
/// the hypotheses of the cut lemma.
pub fn theory() -> Theory {
    parse_theory(SOURCE).expect("reference theory parses")
}

/// A named reference derivation.
#[derive(Clone, Debug)]
pub struct Golden {
    pub name: &'static str,
    pub derivation: Derivation,
}

fn ctx(names: &[&str]) -> Context {
    Context::from_pairs(names.iter().map(|n| (*n, "*")))
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn app(f: &str, args: Vec<Term>) -> Term {
    Term::app(f, args)
}

fn eq(a: Term, b: Term) -> Formula {
    Formula::eq(a, b)
}

fn unary(r: &str, x: &str) -> Formula {
    Formula::rel(r, vec![v(x)])
}

fn leaf(t: &Theory, rule: RuleInstance) -> Derivation {
    Derivation::infer(t, rule, vec![])
}

fn cut(t: &Theory, a: Derivation, b: Derivation) -> Derivation {
    Derivation::infer(t, RuleInstance::Cut, vec![a, b])
}

fn subst(t: &Theory, d: Derivation, target: &Context, terms: Vec<Term>) -> Derivation {
    Derivation::infer(
        t,
        RuleInstance::Subst {
            target: target.clone(),
            terms,
        },
        vec![d],
    )
}

fn seq(t: &Theory, c: &Context, lhs: Term, rhs: Term, side: Side) -> Derivation {
    leaf(
        t,
        RuleInstance::SEq {
            context: c.clone(),
            lhs,
            rhs,
            side,
        },
    )
}

fn iconj(t: &Theory, c: &Context, premise: &Formula, parts: Vec<Derivation>) -> Derivation {
    Derivation::infer(
        t,
        RuleInstance::IConj {
            context: c.clone(),
            premise: premise.clone(),
        },
        parts,
    )
}

fn econj(t: &Theory, c: &Context, conjuncts: Vec<Formula>, index: usize) -> Derivation {
    leaf(
        t,
        RuleInstance::EConj {
            context: c.clone(),
            conjuncts,
            index,
        },
    )
}

fn entail_or_panic(t: &Theory, c: &Context, phi: &Formula, facts: &[Derivation], goal: &Formula) -> Derivation {
    entail(t, c, phi, facts, goal).unwrap_or_else(|| panic!("cannot regroup `{phi}` into `{goal}`"))
}

/// `phi |- chi` from `d : psi |- chi`, where `psi` follows structurally from `phi`.
fn regroup(t: &Theory, c: &Context, phi: &Formula, d: Derivation) -> Derivation {
    let bridge = entail_or_panic(t, c, phi, &[], &d.conclusion.premise);
    cut(t, bridge, d)
}

/// `phi |- chi` from `lemma : phi |- delta` and `main : psi |- chi`, where
/// `psi` follows structurally from `phi` together with the parts of `delta`.
fn combine(t: &Theory, c: &Context, phi: &Formula, lemma: Derivation, main: Derivation) -> Derivation {
    let bridge = entail_or_panic(t, c, phi, &[lemma], &main.conclusion.premise);
    cut(t, bridge, main)
}

/// Moves `d` into a larger context that contains its variables by name.
pub fn weaken(t: &Theory, d: Derivation, target: &Context) -> Derivation {
    let terms = d.conclusion.context.terms();
    let phi = d.conclusion.premise.clone();
    regroup(t, target, &phi, subst(t, d, target, terms))
}

/// `y0 = y1 |- y1 = y0`.
pub fn symmetry_vars(t: &Theory) -> Derivation {
    let c2 = ctx(&["y0", "y1"]);
    let c3 = ctx(&["y0", "y1", "z"]);
    let eq_node = leaf(
        t,
        RuleInstance::Eq {
            context: c3,
            formula: eq(v("z"), v("y0")),
            xs: vec!["z".into(), "y0".into()],
            ys: vec!["y1".into(), "y0".into()],
        },
    );
    let s = subst(t, eq_node, &c2, vec![v("y0"), v("y1"), v("y0")]);
    let flat = Formula::Conj(vec![
        eq(v("y0"), v("y1")),
        v("y0").defined(),
        v("y1").defined(),
    ]);
    let main = regroup(t, &c2, &flat, s);
    let phi = eq(v("y0"), v("y1"));
    let strict = iconj(
        t,
        &c2,
        &phi,
        vec![
            seq(t, &c2, v("y0"), v("y1"), Side::Left),
            seq(t, &c2, v("y0"), v("y1"), Side::Right),
        ],
    );
    combine(t, &c2, &phi, strict, main)
}

fn sample_terms() -> (Context, Term, Term, Term) {
    (
        ctx(&["x0", "x1"]),
        app("mul", vec![v("x0"), app("inv", vec![v("x1")])]),
        Term::constant("e"),
        app("mul", vec![v("x1"), v("x0")]),
    )
}

/// `tau = sigma |- sigma = tau` for concrete terms with a partial operation.
pub fn symmetry_terms(t: &Theory) -> Derivation {
    let (c, tau, sigma, _) = sample_terms();
    let s = subst(t, symmetry_vars(t), &c, vec![tau.clone(), sigma.clone()]);
    let phi = eq(tau.clone(), sigma.clone());
    let strict = iconj(
        t,
        &c,
        &phi,
        vec![
            seq(t, &c, tau.clone(), sigma.clone(), Side::Left),
            seq(t, &c, tau, sigma, Side::Right),
        ],
    );
    combine(t, &c, &phi, strict, s)
}

/// `y0 = y1 /\ y1 = y2 |- y0 = y2`.
pub fn transitivity_vars(t: &Theory) -> Derivation {
    let c2 = ctx(&["y0", "y1"]);
    let c3 = ctx(&["y0", "y1", "y2"]);
    let strict = seq(t, &c2, v("y0"), v("y1"), Side::Left);
    let eq_node = leaf(
        t,
        RuleInstance::Eq {
            context: c3.clone(),
            formula: eq(v("y0"), v("y1")),
            xs: vec!["y0".into(), "y1".into()],
            ys: vec!["y0".into(), "y2".into()],
        },
    );
    let parts = vec![eq(v("y0"), v("y1")), eq(v("y1"), v("y2"))];
    let phi = Formula::Conj(parts.clone());
    let fact = cut(t, econj(t, &c3, parts, 0), weaken(t, strict, &c3));
    combine(t, &c3, &phi, fact, eq_node)
}

/// `tau = sigma /\ sigma = rho |- tau = rho` for concrete terms.
pub fn transitivity_terms(t: &Theory) -> Derivation {
    let (c, tau, sigma, rho) = sample_terms();
    let phi = Formula::Conj(vec![eq(tau.clone(), sigma.clone()), eq(sigma.clone(), rho.clone())]);
    let defined = Formula::Conj(vec![
        tau.clone().defined(),
        sigma.clone().defined(),
        rho.clone().defined(),
    ]);
    let strict = entail_or_panic(t, &c, &phi, &[], &defined);
    let flat = Formula::Conj(vec![
        eq(tau.clone(), sigma.clone()),
        eq(sigma.clone(), rho.clone()),
        tau.clone().defined(),
        sigma.clone().defined(),
        rho.clone().defined(),
    ]);
    let s = subst(t, transitivity_vars(t), &c, vec![tau, sigma, rho]);
    let main = regroup(t, &c, &flat, s);
    combine(t, &c, &phi, strict, main)
}

/// The cut lemma with two side hypotheses:
/// from `P0 |- Q0`, `P1 |- Q1` and `C /\ (Q0 /\ Q1) |- D` infer `C /\ P0 /\ P1 |- D`.
pub fn cut_lemma(t: &Theory) -> Derivation {
    let c = ctx(&["x"]);
    let parts = vec![unary("C", "x"), unary("P0", "x"), unary("P1", "x")];
    let phi = Formula::Conj(parts.clone());
    let each: Vec<Derivation> = (0..2)
        .map(|j| {
            cut(
                t,
                econj(t, &c, parts.clone(), j + 1),
                leaf(t, RuleInstance::Axiom { name: format!("hyp{j}") }),
            )
        })
        .collect();
    let psis = iconj(t, &c, &phi, each);
    let chi = econj(t, &c, parts, 0);
    let both = iconj(t, &c, &phi, vec![chi, psis]);
    cut(t, both, leaf(t, RuleInstance::Axiom { name: "hyp".into() }))
}

fn big_context(prefixes: &[&str], n: usize) -> (Context, Vec<Vec<String>>) {
    let mut c = Context::new();
    let mut names = Vec::new();
    for p in prefixes {
        let group: Vec<String> = (0..n).map(|i| format!("{p}{i}")).collect();
        for g in &group {
            c.push(g.clone(), "*");
        }
        names.push(group);
    }
    (c, names)
}

fn replacements() -> (Context, Vec<Term>, Vec<Term>) {
    (
        ctx(&["x0", "x1"]),
        vec![app("inv", vec![v("x0")]), Term::constant("e")],
        vec![app("mul", vec![v("x0"), v("x1")]), v("x1")],
    )
}

/// Equal arguments give equal values:
/// `tau(sigma)def /\ sigma0 = rho0 /\ sigma1 = rho1 |- tau(sigma) = tau(rho)`.
pub fn equality_term(t: &Theory) -> Derivation {
    let (big, names) = big_context(&["y", "z", "w"], 2);
    let tau_of = |g: &[String]| app("mul", vec![v(&g[0]), app("inv", vec![v(&g[1])])]);
    let eq_node = leaf(
        t,
        RuleInstance::Eq {
            context: big,
            formula: eq(tau_of(&names[0]), tau_of(&names[1])),
            xs: names[1].clone(),
            ys: names[2].clone(),
        },
    );
    let (c, sigma, rho) = replacements();
    let mut terms = sigma.clone();
    terms.extend(sigma.clone());
    terms.extend(rho.clone());
    let s = subst(t, eq_node, &c, terms);
    let tau_sigma = app("mul", vec![sigma[0].clone(), app("inv", vec![sigma[1].clone()])]);
    let mut parts = vec![tau_sigma.defined()];
    parts.extend(sigma.iter().zip(&rho).map(|(a, b)| eq(a.clone(), b.clone())));
    regroup(t, &c, &Formula::Conj(parts), s)
}

/// Equal arguments preserve formulas:
/// `phi(sigma) /\ sigma0 = rho0 /\ sigma1 = rho1 |- phi(rho)`.
pub fn equality_formula(t: &Theory) -> Derivation {
    let (big, names) = big_context(&["y", "z"], 2);
    let phi_of = |g: &[Term]| Formula::rel("leq", vec![g[0].clone(), app("mul", vec![g[1].clone(), g[0].clone()])]);
    let ys: Vec<Term> = names[0].iter().map(|n| v(n)).collect();
    let eq_node = leaf(
        t,
        RuleInstance::Eq {
            context: big,
            formula: phi_of(&ys),
            xs: names[0].clone(),
            ys: names[1].clone(),
        },
    );
    let (c, sigma, rho) = replacements();
    let mut terms = sigma.clone();
    terms.extend(rho.clone());
    let s = subst(t, eq_node, &c, terms);
    let mut parts = vec![phi_of(&sigma)];
    parts.extend(sigma.iter().zip(&rho).map(|(a, b)| eq(a.clone(), b.clone())));
    regroup(t, &c, &Formula::Conj(parts), s)
}

/// `P0(x) |-_{u, x} Q0(x)` from the axiom in context `[x]`.
pub fn context_weakening(t: &Theory) -> Derivation {
    weaken(t, leaf(t, RuleInstance::Axiom { name: "hyp0".into() }), &ctx(&["u", "x"]))
}

/// `P0 /\ P1 /\ C |- C /\ P0 /\ P1`.
pub fn conjunction_permutation(t: &Theory) -> Derivation {
    let c = ctx(&["x"]);
    let phi = Formula::Conj(vec![unary("P0", "x"), unary("P1", "x"), unary("C", "x")]);
    let goal = Formula::Conj(vec![unary("C", "x"), unary("P0", "x"), unary("P1", "x")]);
    entail_or_panic(t, &c, &phi, &[], &goal)
}

/// `P0 /\ P0 |- P0` and back, packaged as one derivation of `P0 /\ P0 |- P0 /\ P0`
/// through `P0`.
pub fn conjunction_idempotence(t: &Theory) -> Derivation {
    let c = ctx(&["x"]);
    let p = unary("P0", "x");
    let pp = Formula::Conj(vec![p.clone(), p.clone()]);
    let down = entail_or_panic(t, &c, &pp, &[], &p);
    let up = entail_or_panic(t, &c, &p, &[], &pp);
    cut(t, down, up)
}

/// All reference derivations, over [`theory`].
pub fn all(t: &Theory) -> Vec<Golden> {
    vec![
        Golden {
            name: "symmetry_vars",
            derivation: symmetry_vars(t),
        },
        Golden {
            name: "symmetry_terms",
            derivation: symmetry_terms(t),
        },
        Golden {
            name: "transitivity_vars",
            derivation: transitivity_vars(t),
        },
        Golden {
            name: "transitivity_terms",
            derivation: transitivity_terms(t),
        },
        Golden {
            name: "cut_lemma",
            derivation: cut_lemma(t),
        },
        Golden {
            name: "equality_term",
            derivation: equality_term(t),
        },
        Golden {
            name: "equality_formula",
            derivation: equality_formula(t),
        },
        Golden {
            name: "context_weakening",
            derivation: context_weakening(t),
        },
        Golden {
            name: "conjunction_permutation",
            derivation: conjunction_permutation(t),
        },
        Golden {
            name: "conjunction_idempotence",
            derivation: conjunction_idempotence(t),
        },
    ]
}

/// A single-point change to a derivation.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub path: Vec<usize>,
    pub description: String,
    pub derivation: Derivation,
}

/// Other rule instances that could label a node with the same conclusion and
/// number of premises.
fn relabelings(t: &Theory, d: &Derivation) -> Vec<RuleInstance> {
    let s = &d.conclusion;
    let c = s.context.clone();
    let mut out = Vec::new();
    match d.premises.len() {
        0 => {
            out.push(RuleInstance::Id {
                context: c.clone(),
                formula: s.premise.clone(),
            });
            out.push(RuleInstance::IConj {
                context: c.clone(),
                premise: s.premise.clone(),
            });
            for index in 0..c.len() {
                out.push(RuleInstance::Refl {
                    context: c.clone(),
                    index,
                });
            }
            for a in &t.axioms {
                out.push(RuleInstance::Axiom { name: a.name.clone() });
            }
            match &s.premise {
                Formula::Eq(l, r) => {
                    for side in [Side::Left, Side::Right] {
                        out.push(RuleInstance::SEq {
                            context: c.clone(),
                            lhs: l.clone(),
                            rhs: r.clone(),
                            side,
                        });
                    }
                    if let (Term::App(f, args), true) = (l, l == r) {
                        for index in 0..args.len() {
                            out.push(RuleInstance::SFun {
                                context: c.clone(),
                                function: f.clone(),
                                args: args.clone(),
                                index,
                            });
                        }
                    }
                }
                Formula::Rel(r, args) => {
                    for index in 0..args.len() {
                        out.push(RuleInstance::SRel {
                            context: c.clone(),
                            relation: r.clone(),
                            args: args.clone(),
                            index,
                        });
                    }
                }
                Formula::Conj(parts) => {
                    for index in 0..parts.len() {
                        out.push(RuleInstance::EConj {
                            context: c.clone(),
                            conjuncts: parts.clone(),
                            index,
                        });
                    }
                    if let RuleInstance::Eq { formula, xs, ys, .. } = &d.rule {
                        out.push(RuleInstance::Eq {
                            context: c.clone(),
                            formula: formula.clone(),
                            xs: ys.clone(),
                            ys: xs.clone(),
                        });
                    }
                }
                Formula::Truth => {}
            }
        }
        1 => {
            out.push(RuleInstance::IConj {
                context: c.clone(),
                premise: s.premise.clone(),
            });
            let child = &d.premises[0].conclusion.context;
            if child.names().all(|n| c.contains(n)) {
                out.push(RuleInstance::Subst {
                    target: c.clone(),
                    terms: child.terms(),
                });
            }
        }
        2 => {
            out.push(RuleInstance::Cut);
            out.push(RuleInstance::IConj {
                context: c,
                premise: s.premise.clone(),
            });
        }
        _ => {}
    }
    out.retain(|r| r != &d.rule);
    out
}

fn roots(d: &Derivation) -> Vec<Sequent> {
    d.premises.iter().map(|p| p.conclusion.clone()).collect()
}

/// Every single-node perturbation of `d`: relabeling a node with another rule
/// instance that changes what the node proves, swapping the two sides of a
/// node's sequent, exchanging two premises of a node, and dropping a premise.
pub fn perturbations(t: &Theory, d: &Derivation) -> Vec<Perturbation> {
    let mut out = Vec::new();
    for path in d.paths() {
        let node = d.node(&path).expect("path from paths()");
        for alt in relabelings(t, node) {
            // A relabeling that still yields this node's sequent is another
            // proof of the same step, not an error.
            if let Ok(c) = check_rule(t, &alt, &roots(node)) {
                if c.alpha_eq(&node.conclusion) {
                    continue;
                }
            }
            let mut variant = d.clone();
            let description = format!("relabel {} as {}", node.rule.name(), alt.name());
            variant.node_mut(&path).unwrap().rule = alt;
            out.push(Perturbation {
                path: path.clone(),
                description,
                derivation: variant,
            });
        }
        let s = &node.conclusion;
        if s.premise != s.conclusion {
            let mut variant = d.clone();
            let n = variant.node_mut(&path).unwrap();
            n.conclusion = Sequent::new(s.context.clone(), s.conclusion.clone(), s.premise.clone());
            out.push(Perturbation {
                path: path.clone(),
                description: "swap premise and conclusion".into(),
                derivation: variant,
            });
        }
        let k = node.premises.len();
        for i in 0..k {
            for j in i + 1..k {
                if node.premises[i].conclusion == node.premises[j].conclusion {
                    continue;
                }
                let mut variant = d.clone();
                variant.node_mut(&path).unwrap().premises.swap(i, j);
                out.push(Perturbation {
                    path: path.clone(),
                    description: format!("exchange premises {i} and {j} of {}", node.rule.name()),
                    derivation: variant,
                });
            }
            let mut variant = d.clone();
            variant.node_mut(&path).unwrap().premises.remove(i);
            out.push(Perturbation {
                path: path.clone(),
                description: format!("drop premise {i} of {}", node.rule.name()),
                derivation: variant,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::{check_derivation, parse_derivation, print_derivation};
    use crate::syntax::parse_sequent;

    fn sequent(t: &Theory, s: &str) -> Sequent {
        parse_sequent(&t.signature, s).unwrap()
    }

    #[test]
    fn every_reference_derivation_checks() {
        let t = theory();
        for g in all(&t) {
            let r = check_derivation(&t, &g.derivation);
            assert!(r.is_valid(), "{}: {:?}", g.name, r.failure);
        }
    }

    #[test]
    fn roots_are_the_expected_sequents() {
        let t = theory();
        let expect = [
            ("symmetry_vars", "[y0:*, y1:*] y0 = y1 |- y1 = y0"),
            ("symmetry_terms", "[x0:*, x1:*] mul(x0, inv(x1)) = e |- e = mul(x0, inv(x1))"),
            ("transitivity_vars", "[y0:*, y1:*, y2:*] y0 = y1 /\\ y1 = y2 |- y0 = y2"),
            (
                "transitivity_terms",
                "[x0:*, x1:*] mul(x0, inv(x1)) = e /\\ e = mul(x1, x0) |- mul(x0, inv(x1)) = mul(x1, x0)",
            ),
            ("cut_lemma", "[x:*] C(x) /\\ P0(x) /\\ P1(x) |- D(x)"),
            (
                "equality_term",
                "[x0:*, x1:*] def(mul(inv(x0), inv(e))) /\\ inv(x0) = mul(x0, x1) /\\ e = x1 \
                 |- mul(inv(x0), inv(e)) = mul(mul(x0, x1), inv(x1))",
            ),
            (
                "equality_formula",
                "[x0:*, x1:*] leq(inv(x0), mul(e, inv(x0))) /\\ inv(x0) = mul(x0, x1) /\\ e = x1 \
                 |- leq(mul(x0, x1), mul(x1, mul(x0, x1)))",
            ),
            ("context_weakening", "[u:*, x:*] P0(x) |- Q0(x)"),
            ("conjunction_permutation", "[x:*] P0(x) /\\ P1(x) /\\ C(x) |- C(x) /\\ P0(x) /\\ P1(x)"),
            ("conjunction_idempotence", "[x:*] P0(x) /\\ P0(x) |- P0(x) /\\ P0(x)"),
        ];
        let gs = all(&t);
        assert_eq!(gs.len(), expect.len());
        for (g, (name, s)) in gs.iter().zip(expect) {
            assert_eq!(g.name, name);
            assert_eq!(g.derivation.conclusion, sequent(&t, s), "{name}");
        }
    }

    #[test]
    fn intermediate_steps_appear_as_nodes() {
        let t = theory();
        let has = |d: &Derivation, s: &str| {
            let want = sequent(&t, s);
            d.paths().iter().any(|p| d.node(p).unwrap().conclusion == want)
        };
        let sym = symmetry_vars(&t);
        assert!(has(&sym, "[y0:*, y1:*, z:*] z = y0 /\\ z = y1 /\\ def(y0) |- y1 = y0"));
        assert!(has(&sym, "[y0:*, y1:*] y0 = y1 |- def(y0) /\\ def(y1)"));
        assert!(has(&sym, "[y0:*, y1:*] y0 = y1 /\\ def(y0) /\\ def(y1) |- y1 = y0"));
        let symt = symmetry_terms(&t);
        assert!(has(
            &symt,
            "[x0:*, x1:*] mul(x0, inv(x1)) = e /\\ def(mul(x0, inv(x1))) /\\ def(e) |- e = mul(x0, inv(x1))"
        ));
        let tr = transitivity_vars(&t);
        assert!(has(&tr, "[y0:*, y1:*] y0 = y1 |- def(y0)"));
        assert!(has(&tr, "[y0:*, y1:*, y2:*] y0 = y1 /\\ def(y0) /\\ y1 = y2 |- y0 = y2"));
        let cl = cut_lemma(&t);
        assert!(has(&cl, "[x:*] C(x) /\\ P0(x) /\\ P1(x) |- Q1(x)"));
        assert!(has(&cl, "[x:*] C(x) /\\ P0(x) /\\ P1(x) |- Q0(x) /\\ Q1(x)"));
        assert!(has(&cl, "[x:*] C(x) /\\ P0(x) /\\ P1(x) |- C(x) /\\ (Q0(x) /\\ Q1(x))"));
    }

    #[test]
    fn every_perturbation_fails() {
        let t = theory();
        let mut total = 0;
        for g in all(&t) {
            let ps = perturbations(&t, &g.derivation);
            assert!(!ps.is_empty());
            for p in ps {
                total += 1;
                assert!(
                    !check_derivation(&t, &p.derivation).is_valid(),
                    "{}: {} at {:?} still checks",
                    g.name,
                    p.description,
                    p.path
                );
            }
        }
        assert!(total > 500, "only {total} perturbations");
    }

    #[test]
    fn transitivity_with_swapped_cut_premises_fails() {
        let t = theory();
        let mut d = transitivity_vars(&t);
        assert!(matches!(d.rule, RuleInstance::Cut));
        d.premises.swap(0, 1);
        let r = check_derivation(&t, &d);
        assert_eq!(r.failure.as_ref().map(|f| f.0.clone()), Some(vec![]));
    }

    #[test]
    fn text_round_trip() {
        let t = theory();
        for g in all(&t) {
            let text = print_derivation(&g.derivation);
            let back = parse_derivation(&t, &text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", g.name));
            assert_eq!(back, g.derivation, "{}", g.name);
        }
    }
}
