use std::sync::OnceLock;

use phl_core::finder::enumerate_models;
use phl_core::library;
use phl_core::morphology::{
    closed_submodel_generated, diagonal_fillers, factorize, is_closed_mono, is_dense, is_retraction, is_surjective,
    is_u_retraction, sequent_arrow, MorphologyError,
};
use phl_core::semantics::{
    check_hom, enumerate_homs, holds, parse_model, product_with_projections, Homomorphism, PartialStructure,
};
use phl_core::syntax::{parse_sequent, Theory};
use phl_core::translation::TheoryMorphism;
use proptest::prelude::*;

fn cyclic(n: usize) -> PartialStructure {
    let t = library::mon();
    let mut m = PartialStructure::empty(format!("Z{n}"), t.signature.clone());
    m.add_elements(0, n, |i| i.to_string()).unwrap();
    m.define("e", &[], "0").unwrap();
    for i in 0..n {
        for j in 0..n {
            m.define("mul", &[&i.to_string(), &j.to_string()], &((i + j) % n).to_string()).unwrap();
        }
    }
    m
}

fn chain(n: usize) -> PartialStructure {
    let t = library::pos();
    let mut m = PartialStructure::empty(format!("chain{n}"), t.signature.clone());
    m.add_elements(0, n, |i| ((b'a' + i as u8) as char).to_string()).unwrap();
    for i in 0..n {
        for j in i..n {
            m.add_relation(0, vec![i, j]).unwrap();
        }
    }
    m
}

fn discrete(n: usize) -> PartialStructure {
    let t = library::pos();
    let mut m = PartialStructure::empty(format!("disc{n}"), t.signature.clone());
    m.add_elements(0, n, |i| ((b'a' + i as u8) as char).to_string()).unwrap();
    for i in 0..n {
        m.add_relation(0, vec![i, i]).unwrap();
    }
    m
}

fn subset(m: &PartialStructure, names: &[&str]) -> Vec<Vec<bool>> {
    vec![m.carrier(0).iter().map(|e| names.contains(&e.as_str())).collect()]
}

fn hom(maps: &[usize]) -> Homomorphism {
    Homomorphism { maps: vec![maps.to_vec()] }
}

#[test]
fn closed_monos() {
    let z4 = cyclic(4);
    let (sub, incl) = closed_submodel_generated(&z4, &subset(&z4, &["2"])).unwrap();
    assert_eq!(sub.carrier(0), ["0", "2"]);
    assert!(is_closed_mono(&sub, &z4, &incl).unwrap());

    let disc = discrete(2);
    let c2 = chain(2);
    assert!(!is_closed_mono(&disc, &c2, &hom(&[0, 1])).unwrap());
    assert!(is_closed_mono(&c2, &c2, &Homomorphism::identity(&c2)).unwrap());
    assert!(matches!(
        is_closed_mono(&c2, &chain(1), &hom(&[0, 0])),
        Err(MorphologyError::NotMono(_))
    ));
    assert!(matches!(
        is_closed_mono(&c2, &c2, &hom(&[1, 0])),
        Err(MorphologyError::NotAHomomorphism(_))
    ));
}

#[test]
fn generated_closed_submodels() {
    let z4 = cyclic(4);
    let (none, _) = closed_submodel_generated(&z4, &subset(&z4, &[])).unwrap();
    assert_eq!(none.carrier(0), ["0"]);
    let all = subset(&z4, &["0", "1", "2", "3"]);
    let (whole, incl) = closed_submodel_generated(&z4, &all).unwrap();
    assert_eq!(whole.carrier(0), z4.carrier(0));
    assert_eq!(whole.function_table(1), z4.function_table(1));
    assert_eq!(incl, Homomorphism::identity(&z4));
    assert!(closed_submodel_generated(&z4, &[vec![true]]).is_err());
}

#[test]
fn generated_submodels_are_least() {
    let z4 = cyclic(4);
    let seed = subset(&z4, &["2"]);
    let (sub, _) = closed_submodel_generated(&z4, &seed).unwrap();
    // Every closed submodel containing the seed contains the generated one.
    for mask in 0u32..16 {
        let s: Vec<bool> = (0..4).map(|i| mask & (1 << i) != 0).collect();
        if !s[2] {
            continue;
        }
        let (other, _) = closed_submodel_generated(&z4, std::slice::from_ref(&s)).unwrap();
        if other.carrier_size(0) == s.iter().filter(|b| **b).count() {
            assert!(sub.carrier(0).iter().all(|e| other.carrier(0).contains(e)));
        }
    }
}

#[test]
fn dense_maps() {
    let z2 = cyclic(2);
    let (one, incl) = {
        let mut m = PartialStructure::empty("one", z2.signature().clone());
        m.add_element(0, "1").unwrap();
        (m, hom(&[1]))
    };
    // The generator alone, without tables, maps densely into Z/2.
    assert!(is_dense(&one, &z2, &incl).unwrap());
    let f = factorize(&one, &z2, &incl).unwrap();
    assert_eq!(f.mid.carrier(0), ["0", "1"]);
    assert_eq!(f.closed_mono, Homomorphism::identity(&z2));
    assert_eq!(f.dense, incl);

    let c2 = chain(2);
    let disc = discrete(2);
    assert!(is_dense(&disc, &c2, &hom(&[0, 1])).unwrap());
    assert!(is_surjective(&disc, &c2, &hom(&[0, 1])).unwrap());

    let z4 = cyclic(4);
    let (sub, incl) = closed_submodel_generated(&z4, &subset(&z4, &["2"])).unwrap();
    assert!(!is_dense(&sub, &z4, &incl).unwrap());
}

#[test]
fn factorization_examples() {
    let c2 = chain(2);
    let id = Homomorphism::identity(&c2);
    let f = factorize(&c2, &c2, &id).unwrap();
    assert_eq!((f.dense.clone(), f.closed_mono.clone()), (id.clone(), id));

    let at_b = hom(&[1, 1]);
    let f = factorize(&c2, &c2, &at_b).unwrap();
    assert_eq!(f.mid.carrier(0), ["b"]);
    assert_eq!(f.mid.relation_table(0).len(), 1);
    assert_eq!(f.dense, hom(&[0, 0]));
    assert_eq!(f.closed_mono, hom(&[1]));
    assert!(is_closed_mono(&f.mid, &c2, &f.closed_mono).unwrap());
    assert!(is_dense(&c2, &f.mid, &f.dense).unwrap());
}

#[test]
fn orthogonality_encodes_antisymmetry() {
    let pre = library::preorder();
    let s = parse_sequent(&pre.signature, "[x:*, y:*] leq(x, y) /\\ leq(y, x) |- x = y").unwrap();
    let arrow = sequent_arrow(&pre, &s, 4).unwrap();
    assert!(arrow.is_saturated());
    let chain2 = parse_model("model c of preorder\ncarrier *: a b;\nrel leq: (a,a) (a,b) (b,b);\n", &pre).unwrap();
    let cycle = parse_model("model k of preorder\ncarrier *: a b;\nrel leq: (a,a) (a,b) (b,a) (b,b);\n", &pre).unwrap();
    assert!(arrow.orthogonal(&chain2).unwrap());
    assert!(!arrow.orthogonal(&cycle).unwrap());
}

#[test]
fn retractions() {
    let z4 = cyclic(4);
    let z2 = cyclic(2);
    let mod2 = hom(&[0, 1, 0, 1]);
    assert!(check_hom(&z4, &z2, &mod2));
    // No section into Z/4 exists: 1 would need an element of order two mapping to 1.
    assert_eq!(is_retraction(&z4, &z2, &mod2).unwrap(), None);
    let set = library::set();
    let forget = TheoryMorphism::inclusion(&set, &library::mon()).unwrap();
    let s = is_u_retraction(&forget, &z4, &z2, &mod2).unwrap().unwrap();
    assert_eq!(s.then(&mod2), Homomorphism::identity(&z2));

    let c2 = chain(2);
    assert_eq!(
        is_retraction(&c2, &c2, &Homomorphism::identity(&c2)).unwrap(),
        Some(Homomorphism::identity(&c2))
    );
    let point = chain(1);
    let s = is_retraction(&c2, &point, &hom(&[0, 0])).unwrap().unwrap();
    assert_eq!(s.maps[0], [0]);
    assert!(is_dense(&c2, &point, &hom(&[0, 0])).unwrap());
}

#[test]
fn split_quotient_of_a_product_is_a_retraction() {
    // Z/2 x Z/2 -> Z/2 by the first coordinate has the section x -> (x, 0).
    let z2 = cyclic(2);
    let (p, proj) = product_with_projections(&[z2.clone(), z2.clone()], 16).unwrap();
    let h = proj[0].clone();
    assert!(check_hom(&p, &z2, &h));
    assert!(is_retraction(&p, &z2, &h).unwrap().is_some());
}

fn sample(theory: &Theory, max: usize) -> Vec<PartialStructure> {
    enumerate_models(theory, max)
}

fn pools() -> &'static [Vec<PartialStructure>; 3] {
    static POOLS: OnceLock<[Vec<PartialStructure>; 3]> = OnceLock::new();
    POOLS.get_or_init(|| [sample(&library::pos(), 3), sample(&library::mon(), 3), sample(&library::cat(), 2)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_composes_back(which in 0usize..3, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let pool = &pools()[which];
        let a = &pool[i.index(pool.len())];
        let b = &pool[j.index(pool.len())];
        let homs = enumerate_homs(a, b);
        prop_assume!(!homs.is_empty());
        let h = &homs[k.index(homs.len())];
        let f = factorize(a, b, h).unwrap();
        prop_assert_eq!(&f.dense.then(&f.closed_mono), h);
        prop_assert!(is_dense(a, &f.mid, &f.dense).unwrap());
        prop_assert!(is_closed_mono(&f.mid, b, &f.closed_mono).unwrap());
    }

    #[test]
    fn retractions_are_dense(which in 0usize..3, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let pool = &pools()[which];
        let a = &pool[i.index(pool.len())];
        let b = &pool[j.index(pool.len())];
        for h in enumerate_homs(a, b) {
            if is_retraction(a, b, &h).unwrap().is_some() {
                prop_assert!(is_dense(a, b, &h).unwrap());
            }
            if h.is_injective() && h.is_surjective_onto(b) && is_closed_mono(a, b, &h).unwrap() {
                prop_assert!(phl_core::semantics::is_isomorphic(a, b));
            }
        }
    }

    #[test]
    fn classes_compose(which in 0usize..3, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let pool = &pools()[which];
        let a = &pool[i.index(pool.len())];
        let b = &pool[j.index(pool.len())];
        let c = &pool[k.index(pool.len())];
        for f in enumerate_homs(a, b).iter().take(12) {
            for g in enumerate_homs(b, c).iter().take(12) {
                let gf = f.then(g);
                if is_dense(a, b, f).unwrap() && is_dense(b, c, g).unwrap() {
                    prop_assert!(is_dense(a, c, &gf).unwrap());
                }
                if f.is_injective() && g.is_injective()
                    && is_closed_mono(a, b, f).unwrap() && is_closed_mono(b, c, g).unwrap() {
                    prop_assert!(is_closed_mono(a, c, &gf).unwrap());
                }
            }
        }
    }
}

#[test]
fn unique_diagonal_fillers() {
    // Squares from the dense half of one factorization to the closed half of another.
    for pool in pools() {
        let small: Vec<&PartialStructure> = pool.iter().filter(|m| m.size() <= 3).take(8).collect();
        let mut squares = 0;
        for a in &small {
            for b in &small {
                for h in enumerate_homs(a, b).iter().take(4) {
                    let e = factorize(a, b, h).unwrap();
                    for c in &small {
                        for k in enumerate_homs(b, c).iter().take(4) {
                            let m = factorize(b, c, k).unwrap();
                            // u : a -> mid_m and v : mid_e -> c with m ∘ u = v ∘ e.
                            for u in enumerate_homs(a, &m.mid) {
                                for v in enumerate_homs(&e.mid, c) {
                                    if u.then(&m.closed_mono) != e.dense.then(&v) {
                                        continue;
                                    }
                                    squares += 1;
                                    let d = diagonal_fillers(&e.mid, &m.mid, &e.dense, &m.closed_mono, &u, &v);
                                    assert_eq!(d.len(), 1, "square {}->{}", a.name, c.name);
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(squares > 0);
    }
}

#[test]
fn orthogonality_matches_validity() {
    let t = library::pos();
    let models = enumerate_models(&t, 3);
    for text in [
        "[x:*, y:*] leq(x, y) |- leq(y, x)",
        "[x:*, y:*] leq(x, y) |- x = y",
        "[x:*, y:*, z:*] leq(x, y) /\\ leq(x, z) |- leq(y, z)",
        "[x:*] true |- leq(x, x)",
    ] {
        let s = parse_sequent(&t.signature, text).unwrap();
        let arrow = sequent_arrow(&t, &s, 4).unwrap();
        for m in &models {
            assert_eq!(arrow.orthogonal(m).unwrap(), holds(m, &s).unwrap(), "{text} on {}", m.name);
        }
    }
}
