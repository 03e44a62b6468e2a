//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Runs with `cargo test -p phl-core --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::Gen;
use phl_core::birkhoff::{close_p, close_r, close_scl, definability_check, hsp_closure, ModelUniverse};
use phl_core::finder::enumerate_models;
use phl_core::freemodel::representing_model;
use phl_core::library;
use phl_core::morphology::{diagonal_fillers, factorize, is_closed_mono, is_dense, sequent_arrow, FactorizationResult};
use phl_core::prover::{check_derivation, golden, prove, Budget};
use phl_core::semantics::{
    chain_colimit, count_homs, enumerate_homs, holds, interp_formula, is_isomorphic, is_model, product, satisfies,
    Diagram, Homomorphism, PartialStructure, DEFAULT_PRODUCT_CAP,
};
use phl_core::syntax::{parse_formula_in_context, parse_sequent, Sequent, Theory};
use phl_core::translation::{adjunction_counts, parse_sketch, pht_of, sketch_models, sketch_to_pht, TheoryMorphism};
use rand::Rng;

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const SOUNDNESS_LIMIT: Duration = Duration::from_secs(120);
const DEFINABILITY_LIMIT: Duration = Duration::from_secs(300);
const SOUNDNESS_SAMPLES: usize = 50;
const REPRESENTABILITY_PAIRS: usize = 20;
const FACTORIZATION_HOMS: usize = 100;
const CLOSURE_UNIVERSES: usize = 10;
const SEED: u64 = 0x5e_ed0f_b1c4;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn golden_derivations() -> Outcome {
    let t = golden::theory();
    let all = golden::all(&t);
    let variants: Vec<_> = all.iter().map(|g| golden::perturbations(&t, &g.derivation)).collect();
    let perturbed: usize = variants.iter().map(Vec::len).sum();
    // Only the checker is timed; building the variants is fixture work.
    let start = Instant::now();
    let mut bad = Vec::new();
    for (g, ps) in all.iter().zip(&variants) {
        if !check_derivation(&t, &g.derivation).is_valid() {
            bad.push(format!("{} rejected", g.name));
        }
        for p in ps {
            if check_derivation(&t, &p.derivation).is_valid() {
                bad.push(format!("{} accepted after {}", g.name, p.description));
            }
        }
    }
    let took = start.elapsed();
    let pass = bad.is_empty() && perturbed > 0 && took < GOLDEN_LIMIT;
    outcome(
        pass,
        format!("{} trees, {perturbed} perturbations, {:.3}s {}", all.len(), took.as_secs_f64(), bad.join("; ")),
    )
}

/// Random sequents plus every axiom, so that some are provable.
fn sampled_sequents(g: &mut Gen, t: &Theory, n: usize) -> Vec<Sequent> {
    let mut out: Vec<Sequent> = t.axioms.iter().map(|a| a.sequent.clone()).collect();
    while out.len() < n + t.axioms.len() {
        let s = g.sequent(&t.signature, 1, 1);
        // Half of the samples take their conclusion from the saturated premise.
        if g.rng.gen_bool(0.5) {
            if let Ok(p) = representing_model(t, &s.context, &s.premise, 2) {
                let ctx = s.context.clone();
                let facts: Vec<_> = (0..6)
                    .map(|_| g.atom(&t.signature, &ctx, 1))
                    .filter(|a| satisfies(&p.structure, &ctx, a, &p.generic).unwrap_or(false))
                    .collect();
                if let Some(a) = facts.into_iter().next() {
                    out.push(Sequent::new(ctx, s.premise.clone(), a));
                    continue;
                }
            }
        }
        out.push(s);
    }
    out
}

fn soundness(g: &mut Gen) -> Outcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut summary = Vec::new();
    for t in [library::pos(), library::mon(), library::cat()] {
        let models = enumerate_models(&t, 3);
        let samples = sampled_sequents(g, &t, SOUNDNESS_SAMPLES);
        let mut proved = 0;
        for s in &samples {
            if prove(&t, s, Budget::default()).map(|v| v.is_proved()).unwrap_or(false) {
                proved += 1;
                if let Some(m) = models.iter().find(|m| !holds(m, s).unwrap()) {
                    violations.push(format!("{s} fails in {}", m.name));
                }
            }
        }
        summary.push(format!("{}: {proved}/{} proved over {} models", t.name, samples.len(), models.len()));
    }
    let took = start.elapsed();
    outcome(
        violations.is_empty() && took < SOUNDNESS_LIMIT,
        format!("{}, {:.1}s {}", summary.join(", "), took.as_secs_f64(), violations.join("; ")),
    )
}

fn completeness(g: &mut Gen) -> Outcome {
    let mut checked = 0;
    let mut disagreements = Vec::new();
    for t in [library::pos(), library::mon(), library::cat(), library::preorder()] {
        for s in sampled_sequents(g, &t, 40) {
            let Ok(p) = representing_model(&t, &s.context, &s.premise, 4) else { continue };
            if !p.is_saturated() {
                continue;
            }
            checked += 1;
            let member = satisfies(&p.structure, &s.context, &s.conclusion, &p.generic).unwrap();
            let v = prove(&t, &s, Budget::default()).unwrap();
            let agree = if member { v.is_proved() } else { v.is_refuted() };
            if !agree {
                disagreements.push(format!("{s}: generic {member}, verdict {}", v.label()));
            }
        }
    }
    outcome(
        disagreements.is_empty() && checked > 0,
        format!("{checked} saturated sequents {}", disagreements.join("; ")),
    )
}

fn representability() -> Outcome {
    let cases = [
        (library::pos(), vec!["[x:*, y:*] . leq(x, y)", "[x:*, y:*] . true", "[x:*, y:*, z:*] . leq(x, y) /\\ leq(y, z)", "[x:*, y:*] . leq(x, y) /\\ leq(y, x)", "[] . true", "[x:*] . leq(x, x)"]),
        (library::mon(), vec!["[] . true", "[x:*] . x = e", "[x:*] . mul(x, x) = e", "[x:*] . mul(x, x) = x", "[x:*, y:*] . mul(x, y) = e /\\ mul(y, x) = e /\\ mul(x, x) = e"]),
    ];
    let mut pairs = 0;
    let mut bad = Vec::new();
    let mut unsaturated = Vec::new();
    for (t, formulas) in &cases {
        let models = enumerate_models(t, 4);
        for text in formulas {
            let (ctx, phi) = parse_formula_in_context(&t.signature, text).unwrap();
            let p = representing_model(t, &ctx, &phi, 4).unwrap();
            if !p.is_saturated() {
                unsaturated.push(text.to_string());
                continue;
            }
            for m in &models {
                pairs += 1;
                let homs = count_homs(&p.structure, m);
                let tuples = interp_formula(m, &ctx, &phi).unwrap().len();
                if homs != tuples {
                    bad.push(format!("{text} in {}: {homs} homs, {tuples} tuples", m.name));
                }
            }
        }
    }
    outcome(
        bad.is_empty() && unsaturated.is_empty() && pairs >= REPRESENTABILITY_PAIRS,
        format!("{pairs} pairs {} {}", bad.join("; "), unsaturated.join("; ")),
    )
}

fn factorization(g: &mut Gen) -> Outcome {
    let pools = [enumerate_models(&library::pos(), 4), enumerate_models(&library::mon(), 3), enumerate_models(&library::cat(), 2)];
    let mut bad = Vec::new();
    let mut sampled: Vec<(usize, usize, usize, FactorizationResult)> = Vec::new();
    let mut attempts = 0;
    while sampled.len() < FACTORIZATION_HOMS && attempts < 100 * FACTORIZATION_HOMS {
        attempts += 1;
        let w = g.rng.gen_range(0..pools.len());
        let pool = &pools[w];
        let (i, j) = (g.rng.gen_range(0..pool.len()), g.rng.gen_range(0..pool.len()));
        let homs = enumerate_homs(&pool[i], &pool[j]);
        if homs.is_empty() {
            continue;
        }
        let h = &homs[g.rng.gen_range(0..homs.len())];
        let f = factorize(&pool[i], &pool[j], h).unwrap();
        if &f.dense.then(&f.closed_mono) != h {
            bad.push(format!("composition differs for {} -> {}", pool[i].name, pool[j].name));
        }
        if !is_dense(&pool[i], &f.mid, &f.dense).unwrap() || !is_closed_mono(&f.mid, &pool[j], &f.closed_mono).unwrap() {
            bad.push(format!("wrong classes for {} -> {}", pool[i].name, pool[j].name));
        }
        sampled.push((w, i, j, f));
    }
    // Squares from each sampled dense half to each sampled closed half of the same theory.
    let mut squares = 0usize;
    let subset: Vec<&(usize, usize, usize, FactorizationResult)> = sampled.iter().take(40).collect();
    for &(w, a, _, e) in &subset {
        for &(w2, _, d, m) in &subset {
            if w != w2 {
                continue;
            }
            let (pa, pd) = (&pools[*w][*a], &pools[*w][*d]);
            for u in enumerate_homs(pa, &m.mid).iter().take(6) {
                for v in enumerate_homs(&e.mid, pd).iter().take(6) {
                    if u.then(&m.closed_mono) != e.dense.then(v) {
                        continue;
                    }
                    squares += 1;
                    let n = diagonal_fillers(&e.mid, &m.mid, &e.dense, &m.closed_mono, u, v).len();
                    if n != 1 {
                        bad.push(format!("square with {n} fillers"));
                    }
                }
            }
        }
    }
    outcome(
        bad.is_empty() && sampled.len() >= FACTORIZATION_HOMS && squares > 0,
        format!("{} homs, {squares} commuting squares {}", sampled.len(), bad.join("; ")),
    )
}

fn orthogonality(g: &mut Gen) -> Outcome {
    let mut pairs = 0;
    let mut bad = Vec::new();
    let mon_sequents = [
        "[x:*] mul(x, x) = e |- x = e",
        "[x:*] mul(x, x) = x |- x = e",
        "[x:*, y:*] mul(x, y) = e /\\ mul(y, x) = e /\\ mul(x, x) = e |- x = y",
        "[] true |- e = e",
        "[x:*] x = e |- mul(x, x) = x",
    ];
    let mut cases: Vec<(Theory, Vec<Sequent>)> = Vec::new();
    let pos = library::pos();
    let mut pos_seqs: Vec<Sequent> = (0..30).map(|_| g.sequent(&pos.signature, 1, 0)).collect();
    pos_seqs.extend(pos.axioms.iter().map(|a| a.sequent.clone()));
    cases.push((pos, pos_seqs));
    let mon = library::mon();
    let seqs = mon_sequents.iter().map(|s| parse_sequent(&mon.signature, s).unwrap()).collect();
    cases.push((mon, seqs));
    for (t, seqs) in &cases {
        let models = enumerate_models(t, 4);
        for s in seqs {
            let Ok(arrow) = sequent_arrow(t, s, 4) else { continue };
            for m in &models {
                pairs += 1;
                if arrow.orthogonal(m).unwrap() != holds(m, s).unwrap() {
                    bad.push(format!("{s} on {}", m.name));
                }
            }
        }
    }
    outcome(bad.is_empty() && pairs > 0, format!("{pairs} pairs {}", bad.join("; ")))
}

fn closure_laws(g: &mut Gen) -> Outcome {
    let mut bad = Vec::new();
    let mut built = 0;
    for t in [library::pos(), library::mon(), library::cat()] {
        let models = enumerate_models(&t, if t.signature.sort_count() > 1 { 2 } else { 3 });
        for a in &models {
            for b in &models {
                built += 1;
                if !is_model(&product(&[a.clone(), b.clone()], DEFAULT_PRODUCT_CAP).unwrap(), &t) {
                    bad.push(format!("{} x {}", a.name, b.name));
                }
            }
        }
        for _ in 0..30 {
            let mut stages = vec![models[g.rng.gen_range(0..models.len())].clone()];
            let mut maps: Vec<Homomorphism> = Vec::new();
            for _ in 0..3 {
                let next = &models[g.rng.gen_range(0..models.len())];
                let homs = enumerate_homs(stages.last().unwrap(), next);
                if homs.is_empty() {
                    break;
                }
                maps.push(homs[g.rng.gen_range(0..homs.len())].clone());
                stages.push(next.clone());
            }
            built += 1;
            let c = chain_colimit(&Diagram::chain(stages, maps)).unwrap();
            if !is_model(&c.structure, &t) {
                bad.push(format!("colimit in {}", t.name));
            }
        }
    }
    let mut universes = 0;
    for t in [library::pos(), library::mon()] {
        let small = ModelUniverse::all(&t, 2);
        let pool = ModelUniverse::all(&t, 4);
        for _ in 0..CLOSURE_UNIVERSES {
            let mut e = ModelUniverse::empty(&t, pool.size_cap);
            for m in small.models() {
                if g.rng.gen_bool(0.5) {
                    e.insert(m.clone());
                }
            }
            universes += 1;
            let p = close_p(&e, 2);
            let s = close_scl(&e);
            let r = close_r(&e, &pool, None);
            let laws = [
                ("P idempotent", close_p(&p, 2).same_class(&p)),
                ("S idempotent", close_scl(&s).same_class(&s)),
                ("R idempotent", close_r(&r, &pool, None).same_class(&r)),
                ("PR in RP", close_p(&r, 2).is_subclass_of(&close_r(&p, &pool, None))),
                ("PS in SP", close_p(&s, 2).is_subclass_of(&close_scl(&p))),
                ("SR in RS", close_scl(&r).is_subclass_of(&close_r(&s, &pool, None))),
            ];
            for (name, ok) in laws {
                if !ok {
                    bad.push(format!("{name} fails in {}", t.name));
                }
            }
        }
    }
    outcome(
        bad.is_empty() && universes >= CLOSURE_UNIVERSES,
        format!("{built} constructions, {universes} universes {}", bad.join("; ")),
    )
}

fn is_group_table(m: &PartialStructure) -> bool {
    let sig = m.signature();
    let e = sig.function_index("e").unwrap();
    let mul = sig.function_index("mul").unwrap();
    let unit = m.function_value(e, &[]).unwrap();
    let n = m.carrier_size(0);
    (0..n).all(|x| (0..n).any(|y| m.function_value(mul, &[x, y]) == Some(unit) && m.function_value(mul, &[y, x]) == Some(unit)))
}

fn definability() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();

    let pre = library::preorder();
    let pool = ModelUniverse::all(&pre, 3);
    let anti = parse_sequent(&pre.signature, "[x:*, y:*] leq(x, y) /\\ leq(y, x) |- x = y").unwrap();
    let report = definability_check(&[anti], &pool, None, 4).unwrap();
    let posets = ModelUniverse::all(&library::pos(), 3);
    if !report.passed() {
        bad.push("posets are not a fixed point".to_string());
    }
    let closure = hsp_closure(&report.class, &pool, None).closure;
    if !closure.same_class(&report.class) || report.class.len() != posets.len() {
        bad.push(format!("{} posets in the pool, closure has {}", posets.len(), closure.len()));
    }

    let minv = library::mon_inv();
    let pool = ModelUniverse::all(&minv, 4);
    let total = parse_sequent(&minv.signature, "[x:*] true |- def(inv(x))").unwrap();
    let report = definability_check(std::slice::from_ref(&total), &pool, None, 4).unwrap();
    if !report.fixed_point.fixed {
        bad.push(format!("groups not closed: {:?}", report.fixed_point.witnesses.iter().map(|m| &m.name).collect::<Vec<_>>()));
    }
    let groups = pool.filter(is_group_table);
    if !groups.same_class(&report.class) {
        bad.push("the judgment does not cut out exactly the groups".to_string());
    }
    let took = start.elapsed();
    outcome(
        bad.is_empty() && took < DEFINABILITY_LIMIT,
        format!(
            "{} posets, {} groups among {} monoids with inverse, {:.1}s {}",
            posets.len(),
            groups.len(),
            pool.len(),
            took.as_secs_f64(),
            bad.join("; ")
        ),
    )
}

const PRODUCT_SKETCH: &str = "sketch product
objects: A B P
arrows:
  p0 : P -> A
  p1 : P -> B
product-cone: pair : p0 p1
";

const PULLBACK_SKETCH: &str = "sketch square
objects: A B C P
arrows:
  r0 : A -> C
  r1 : B -> C
  q0 : P -> A
  q1 : P -> B
  d : P -> C
compose:
  r0 . q0 = d
  r1 . q1 = d
pullback-cone:
  glue : q0 q1 over r0 r1
";

fn sketches() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for text in [PRODUCT_SKETCH, PULLBACK_SKETCH] {
        let s = parse_sketch(text).unwrap();
        let t = sketch_to_pht(&s).unwrap();
        let from_theory = enumerate_models(&t, 3);
        let from_sketch = sketch_models(&s, 3).unwrap();
        let matched = from_theory.iter().all(|m| from_sketch.iter().filter(|n| is_isomorphic(m, n)).count() == 1)
            && from_sketch.iter().all(|n| from_theory.iter().any(|m| is_isomorphic(m, n)));
        pass &= matched && from_theory.len() == from_sketch.len();
        details.push(format!("{}: {} vs {}", s.name, from_theory.len(), from_sketch.len()));
    }
    outcome(pass, details.join(", "))
}

fn adjunction() -> Outcome {
    let set = library::set();
    let t = pht_of(&library::semilattice()).unwrap();
    let rho = TheoryMorphism::inclusion(&set, &t).unwrap();
    let targets = enumerate_models(&t, 4);
    let mut checked = 0;
    let mut bad = Vec::new();
    for text in ["[] . true", "[x:*] . true", "[x:*, y:*] . true", "[x:*, y:*] . x = y", "[x:*, y:*, z:*] . true", "[x:*, y:*, z:*] . x = z"] {
        let (ctx, phi) = parse_formula_in_context(&set.signature, text).unwrap();
        let p = representing_model(&set, &ctx, &phi, 4).unwrap();
        for m in &targets {
            match adjunction_counts(&rho, &p, m, 4) {
                Ok((l, r)) => {
                    checked += 1;
                    if l != r {
                        bad.push(format!("{text} into {}: {l} vs {r}", m.name));
                    }
                }
                Err(e) => bad.push(format!("{text}: {e}")),
            }
        }
    }
    outcome(bad.is_empty() && checked > 0, format!("{checked} pairs over {} models {}", targets.len(), bad.join("; ")))
}

type Criterion<'a> = (&'a str, Box<dyn FnOnce(&mut Gen) -> Outcome>);

fn main() {
    let mut g = Gen::new(SEED);
    let criteria: Vec<Criterion> = vec![
        ("golden derivations", Box::new(|_| golden_derivations())),
        ("soundness sweep", Box::new(soundness)),
        ("completeness bridge", Box::new(completeness)),
        ("representability", Box::new(|_| representability())),
        ("factorization", Box::new(factorization)),
        ("orthogonality and validity", Box::new(orthogonality)),
        ("closure laws", Box::new(closure_laws)),
        ("worked definability", Box::new(|_| definability())),
        ("sketch correspondence", Box::new(|_| sketches())),
        ("adjunction", Box::new(|_| adjunction())),
    ];
    let mut failed = BTreeSet::new();
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let o = run(&mut g);
        let mark = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark} {name}: {}", i + 1, o.detail.trim_end());
        if !o.pass {
            failed.insert(i + 1);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
