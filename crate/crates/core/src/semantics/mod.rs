//! Finite partial structures: interpretation, validity, homomorphisms,
//! products and colimits of directed diagrams.
//!
//! Interpretation is Kleene-strict: an application is defined only when all
//! of its arguments are, a relation holds only on defined arguments, and an
//! equation holds only when both sides are defined and equal.

mod colimit;
mod eval;
mod hom;
mod product;
mod structure;
mod text;

pub use colimit::{chain_colimit, Colimit, ColimitError, Diagram};
pub use eval::{
    check_model, counterexample, holds, interp_formula, interp_term, is_model, name_tuple, satisfies, EvalError,
    ModelReport, Violation,
};
pub(crate) use eval::{compile_formula, compile_term, counterexample_unchecked, eval_formula, eval_term, CFormula, CTerm};
pub use hom::{
    check_hom, count_homs, dedup_isomorphic, enumerate_homs, find_isomorphism, hom_violation, is_isomorphic,
    search_homs, visit_homs, HomSearch, Homomorphism,
};
pub use product::{product, product_over, product_with_projections, DEFAULT_PRODUCT_CAP};
pub use structure::{for_each_tuple, Fingerprint, PartialStructure, StructureError};
pub use text::{parse_hom, parse_model, print_hom, print_model};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::syntax::{parse_formula, parse_sequent, parse_term, Context};

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

    fn cyclic(n: usize) -> PartialStructure {
        let t = library::mon();
        let mut m = PartialStructure::empty(format!("Z{n}"), t.signature.clone());
        m.add_elements(0, n, |i| i.to_string()).unwrap();
        let e = t.signature.function_index("e").unwrap();
        let mul = t.signature.function_index("mul").unwrap();
        m.set_function(e, vec![], 0).unwrap();
        for i in 0..n {
            for j in 0..n {
                m.set_function(mul, vec![i, j], (i + j) % n).unwrap();
            }
        }
        m
    }

    #[test]
    fn term_evaluation() {
        let t = library::mon();
        let z2 = cyclic(2);
        let ctx = Context::from_pairs([("x", "*"), ("y", "*")]);
        let term = parse_term(&t.signature, &ctx, "mul(x, mul(y, e))").unwrap();
        assert_eq!(interp_term(&z2, &ctx, &term, &[1, 1]).unwrap(), Some(0));
        assert_eq!(interp_term(&z2, &ctx, &Term::var("x"), &[1, 0]).unwrap(), Some(1));
        assert!(interp_term(&z2, &ctx, &term, &[1]).is_err());

        let ti = library::mon_inv();
        let mut m = PartialStructure::empty("idem", ti.signature.clone());
        m.add_elements(0, 2, |i| ["e", "a"][i].to_owned()).unwrap();
        m.define("e", &[], "e").unwrap();
        for (x, y, v) in [("e", "e", "e"), ("e", "a", "a"), ("a", "e", "a"), ("a", "a", "a")] {
            m.define("mul", &[x, y], v).unwrap();
        }
        let cx = Context::from_pairs([("x", "*")]);
        let inv = parse_term(&ti.signature, &cx, "inv(x)").unwrap();
        assert_eq!(interp_term(&m, &cx, &inv, &[1]).unwrap(), None);
        let d = parse_formula(&ti.signature, &cx, "def(inv(x))").unwrap();
        assert!(interp_formula(&m, &cx, &d).unwrap().is_empty());
    }

    use crate::syntax::Term;

    #[test]
    fn formula_interpretation() {
        let t = library::pos();
        let c2 = chain(2);
        let ctx = Context::from_pairs([("x", "*"), ("y", "*")]);
        let f = parse_formula(&t.signature, &ctx, "leq(x, y)").unwrap();
        let got: Vec<Vec<usize>> = interp_formula(&c2, &ctx, &f).unwrap().into_iter().collect();
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        let cx = Context::from_pairs([("x", "*")]);
        assert_eq!(interp_formula(&c2, &cx, &crate::syntax::Formula::Truth).unwrap().len(), 2);
    }

    #[test]
    fn validity_and_models() {
        let t = library::pos();
        let c2 = chain(2);
        let anti = &t.axiom("antisym").unwrap().sequent;
        assert!(holds(&c2, anti).unwrap());
        let mut pre = PartialStructure::empty("cycle", t.signature.clone());
        pre.add_elements(0, 2, |i| ["a", "b"][i].to_owned()).unwrap();
        for (x, y) in [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")] {
            pre.relate("leq", &[x, y]).unwrap();
        }
        assert_eq!(counterexample(&pre, anti).unwrap(), Some(vec![0, 1]));
        let id = parse_sequent(&t.signature, "[x:*, y:*] leq(x, y) |- leq(x, y)").unwrap();
        assert!(holds(&pre, &id).unwrap());
        assert!(is_model(&c2, &t));
        assert!(is_model(&PartialStructure::empty("empty", t.signature.clone()), &t));
        let report = check_model(&pre, &t).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].axiom, "antisym");
        assert_eq!(report.violations[0].tuple, vec!["a", "b"]);
    }

    #[test]
    fn homomorphism_examples() {
        let c2 = chain(2);
        let point = chain(1);
        assert!(check_hom(&c2, &c2, &Homomorphism::identity(&c2)));
        assert!(check_hom(&c2, &point, &Homomorphism { maps: vec![vec![0, 0]] }));
        assert!(check_hom(&c2, &c2, &Homomorphism { maps: vec![vec![1, 1]] }));
        assert!(!check_hom(&c2, &c2, &Homomorphism { maps: vec![vec![1, 0]] }));
        // Monotone maps 2 -> 2: (a,a), (a,b), (b,b).
        assert_eq!(enumerate_homs(&c2, &c2).len(), 3);
        assert_eq!(count_homs(&chain(3), &chain(3)), 10);
    }

    #[test]
    fn products() {
        let c2 = chain(2);
        let sq = product(&[c2.clone(), c2.clone()], DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(sq.carrier_size(0), 4);
        assert_eq!(sq.relation_table(0).len(), 9);
        assert!(is_model(&sq, &library::pos()));
        let (one, proj) = product_over(c2.signature().clone(), &[], DEFAULT_PRODUCT_CAP).unwrap();
        assert!(proj.is_empty());
        assert_eq!(one.carrier_size(0), 1);
        assert_eq!(one.relation_table(0).len(), 1);
        let empty = PartialStructure::empty("empty", c2.signature().clone());
        assert_eq!(product(&[c2.clone(), empty], DEFAULT_PRODUCT_CAP).unwrap().carrier_size(0), 0);
        assert!(matches!(
            product(&[chain(3), chain(3)], 5),
            Err(StructureError::ProductTooLarge { size: 9, cap: 5 })
        ));
        let mon = library::mon();
        let z2z2 = product(&[cyclic(2), cyclic(2)], DEFAULT_PRODUCT_CAP).unwrap();
        assert!(is_model(&z2z2, &mon));
        assert_eq!(z2z2.function_table(1).len(), 16);
    }

    #[test]
    fn colimits() {
        let stages = vec![chain(1), chain(2), chain(3)];
        let maps = vec![Homomorphism { maps: vec![vec![0]] }, Homomorphism { maps: vec![vec![0, 1]] }];
        let colim = chain_colimit(&Diagram::chain(stages, maps)).unwrap();
        assert!(is_isomorphic(&colim.structure, &chain(3)));
        for (i, h) in colim.coprojections.iter().enumerate() {
            assert!(check_hom(&[chain(1), chain(2), chain(3)][i], &colim.structure, h));
        }
        let z4 = cyclic(4);
        let z2 = cyclic(2);
        let mod2 = Homomorphism { maps: vec![vec![0, 1, 0, 1]] };
        let colim = chain_colimit(&Diagram::chain(vec![z4, z2.clone()], vec![mod2])).unwrap();
        assert!(is_isomorphic(&colim.structure, &z2));
        let c = chain(2);
        let constant = Diagram::chain(
            vec![c.clone(), c.clone(), c.clone()],
            vec![Homomorphism::identity(&c), Homomorphism::identity(&c)],
        );
        assert!(is_isomorphic(&chain_colimit(&constant).unwrap().structure, &c));
    }

    #[test]
    fn colimit_rejects_bad_diagrams() {
        let c = chain(2);
        let swap = Homomorphism { maps: vec![vec![1, 1]] };
        let d = Diagram {
            stages: vec![c.clone(), c.clone()],
            arrows: vec![(0, 1, Homomorphism::identity(&c)), (0, 1, swap)],
        };
        assert!(matches!(chain_colimit(&d), Err(ColimitError::NonFunctorial { .. })));
        let d = Diagram {
            stages: vec![c.clone(), c.clone()],
            arrows: vec![],
        };
        assert!(matches!(chain_colimit(&d), Err(ColimitError::NotDirected(0, 1))));
    }

    #[test]
    fn model_text_round_trip() {
        let t = library::pos();
        let src = "model chain2 of pos\ncarrier *: a b;\nrel leq: (a,a) (a,b) (b,b);\n";
        let m = parse_model(src, &t).unwrap();
        assert_eq!(m, chain(2));
        assert_eq!(print_model(&m, "pos"), src);
        let hom_src = "hom h : chain2 chain2 -> chain2\n";
        assert!(parse_hom(hom_src, &m, &m).is_err());
        let h = parse_hom("hom h : chain2 -> chain2\nmap *: a->b b->b;\n", &m, &m).unwrap();
        assert_eq!(h.maps, vec![vec![1, 1]]);
        assert_eq!(print_hom("h", &m, &m, &h), "hom h : chain2 -> chain2\nmap *: a->b b->b;\n");
        assert!(parse_hom("hom h : chain2 -> chain2\nmap *: a->b b->a;\n", &m, &m).is_err());
        let z2 = "model z2 of mon\ncarrier *: 0 1;\nfun e: () -> 0;\nfun mul: (0,0) -> 0;\nfun mul: (0,1) -> 1;\nfun mul: (1,0) -> 1;\nfun mul: (1,1) -> 0;\n";
        let zm = parse_model(z2, &library::mon()).unwrap();
        assert!(is_isomorphic(&zm, &cyclic(2)));
        assert_eq!(print_model(&zm, "mon"), z2);
    }

    #[test]
    fn isomorphism_search() {
        let t = library::pos();
        let c2 = chain(2);
        let mut rev = PartialStructure::empty("rev", t.signature.clone());
        rev.add_elements(0, 2, |i| ["p", "q"][i].to_owned()).unwrap();
        for (x, y) in [("p", "p"), ("q", "q"), ("q", "p")] {
            rev.relate("leq", &[x, y]).unwrap();
        }
        let (h, inv) = find_isomorphism(&c2, &rev).unwrap();
        assert_eq!(h.maps, vec![vec![1, 0]]);
        assert!(check_hom(&rev, &c2, &inv));
        let deduped = dedup_isomorphic(vec![c2.clone(), rev, chain(1), c2]);
        assert_eq!(deduped.len(), 2);
    }
}
