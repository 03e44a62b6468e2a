use phl_core::freemodel::{free_algebra, repn_coequalizer, repn_morphism, representing_model, yoneda_check, FreeModelError};
use phl_core::library;
use phl_core::prover::Budget;
use phl_core::saturation::SaturationStatus;
use phl_core::semantics::{check_hom, is_isomorphic, is_model, parse_model, Homomorphism, PartialStructure};
use phl_core::syntax::{parse_formula_in_context, parse_theory, Term, Theory};
use phl_core::translation::{parse_relative, RelativeTheory};

fn present(t: &Theory, text: &str, depth: usize) -> phl_core::freemodel::ModelPresentation {
    let (ctx, phi) = parse_formula_in_context(&t.signature, text).unwrap();
    representing_model(t, &ctx, &phi, depth).unwrap()
}

fn model(t: &Theory, text: &str) -> PartialStructure {
    parse_model(text, t).unwrap()
}

const CHAIN2: &str = "model chain2 of pos\ncarrier *: a b;\nrel leq: (a,a) (a,b) (b,b);\n";
const EMPTY: &str = "model empty of pos\ncarrier *: ;\n";

#[test]
fn poset_on_an_inequality() {
    let t = library::pos();
    let p = present(&t, "[x:*, y:*] . leq(x, y)", 4);
    assert_eq!(p.status, SaturationStatus::Saturated(1));
    assert_eq!(p.structure.carrier(0), ["x", "y"]);
    assert_eq!(p.structure.relation_table(0).len(), 3);
    assert!(p.is_exact_model());
    assert_eq!(p.generic, vec![0, 1]);
}

#[test]
fn empty_context_gives_empty_poset() {
    let p = present(&library::pos(), "[] . true", 4);
    assert_eq!(p.status, SaturationStatus::Saturated(0));
    assert_eq!(p.structure.size(), 0);
}

#[test]
fn free_monoid_on_one_generator_is_truncated() {
    let t = library::mon();
    let p = present(&t, "[x:*] . true", 3);
    assert!(!p.is_saturated());
    assert_eq!(&p.structure.carrier(0)[..3], ["e", "x", "mul(x, x)"]);
    let ex = Term::app("mul", vec![Term::constant("e"), Term::var("x")]);
    assert!(p.equal(&ex, &Term::var("x")).unwrap());
    assert!(p.element(&Term::app("mul", vec![Term::var("x"), Term::var("x")])).unwrap().is_some());
    let far = (0..63).fold(Term::var("x"), |acc, _| Term::app("mul", vec![acc, Term::var("x")]));
    assert_eq!(p.element(&far).unwrap(), None);
}

#[test]
fn yoneda_examples() {
    let t = library::pos();
    let le = present(&t, "[x:*, y:*] . leq(x, y)", 4);
    let top = present(&t, "[x:*, y:*] . true", 4);
    let chain = model(&t, CHAIN2);
    let empty = model(&t, EMPTY);
    let r = yoneda_check(&le, &chain).unwrap();
    assert_eq!((r.tuples, r.homs, r.bijective), (3, 3, true));
    let r = yoneda_check(&le, &empty).unwrap();
    assert_eq!((r.tuples, r.homs, r.bijective), (0, 0, true));
    let r = yoneda_check(&top, &chain).unwrap();
    assert_eq!((r.tuples, r.homs, r.bijective), (4, 4, true));
}

#[test]
fn yoneda_refuses_truncated_presentations() {
    let t = library::mon();
    let p = present(&t, "[x:*] . true", 2);
    let z2 = model(
        &t,
        "model z2 of mon\ncarrier *: 0 1;\nfun e: () -> 0;\nfun mul: (0,0) -> 0;\nfun mul: (0,1) -> 1;\nfun mul: (1,0) -> 1;\nfun mul: (1,1) -> 0;\n",
    );
    assert!(matches!(yoneda_check(&p, &z2), Err(FreeModelError::Truncated(_))));
}

#[test]
fn morphism_examples() {
    let t = library::pos();
    let budget = Budget::new(4, 2);
    let le = present(&t, "[x:*, y:*] . leq(x, y)", 4);
    let id = repn_morphism(&le, &le, &[Term::var("x"), Term::var("y")], budget).unwrap();
    assert_eq!(id, Homomorphism::identity(&le.structure));

    let point = present(&t, "[z:*] . true", 4);
    let collapse = repn_morphism(&le, &point, &[Term::var("z"), Term::var("z")], budget).unwrap();
    assert_eq!(collapse.maps, vec![vec![0, 0]]);
    assert!(check_hom(&le.structure, &point.structure, &collapse));

    let free2 = present(&t, "[z:*, w:*] . true", 4);
    let err = repn_morphism(&le, &free2, &[Term::var("z"), Term::var("w")], budget).unwrap_err();
    assert!(matches!(err, FreeModelError::Obligation { verdict: "Refuted", .. }), "{err}");
}

#[test]
fn coequalizer_examples() {
    let t = library::pos();
    let budget = Budget::new(4, 2);
    let le = present(&t, "[x:*, y:*] . leq(x, y)", 4);
    let ids = [Term::var("x"), Term::var("y")];
    let c = repn_coequalizer(&le, &le, &ids, &ids, 4, budget).unwrap();
    assert!(is_isomorphic(&c.presentation.structure, &le.structure));
    assert_eq!(c.presentation.constraint.to_string(), "leq(x, y) /\\ def(x) /\\ def(y)");

    let one = present(&t, "[x:*] . true", 4);
    let two = present(&t, "[x:*, y:*] . true", 4);
    let c = repn_coequalizer(&one, &two, &[Term::var("x")], &[Term::var("y")], 4, budget).unwrap();
    assert_eq!(c.presentation.structure.carrier_size(0), 1);
    assert!(is_model(&c.presentation.structure, &t));
    assert_eq!(c.quotient.maps, vec![vec![0, 0]]);

    let sl = parse_theory(
        "theory slat_a\nsorts: *\nfun e : -> *;\nfun a : -> *;\nfun mul : * * -> *;\n\
         axiom e_def [] true |- def(e);\naxiom a_def [] true |- def(a);\n\
         axiom mul_def [x:*, y:*] true |- def(mul(x, y));\n\
         axiom assoc [x:*, y:*, z:*] true |- mul(mul(x, y), z) = mul(x, mul(y, z));\n\
         axiom unit [x:*] true |- mul(x, e) = x /\\ mul(e, x) = x;\n\
         axiom comm [x:*, y:*] true |- mul(x, y) = mul(y, x);\n\
         axiom idem [x:*] true |- mul(x, x) = x;\n",
    )
    .unwrap();
    let gen = present(&sl, "[x:*] . true", 4);
    assert!(gen.is_saturated());
    assert_eq!(gen.structure.carrier_size(0), 4);
    let consts = present(&sl, "[] . true", 4);
    assert_eq!(consts.structure.carrier(0), ["a", "e"]);
    let c = repn_coequalizer(&gen, &consts, &[Term::constant("e")], &[Term::constant("a")], 4, budget).unwrap();
    assert_eq!(c.presentation.structure.carrier(0), ["a"]);
    assert_eq!(c.quotient.maps, vec![vec![0, 0]]);
    assert!(is_model(&c.presentation.structure, &sl));
}

fn constant_over_sets() -> RelativeTheory {
    parse_relative("relative pointed over set\nop c : [] true -> *;\n", &library::set()).unwrap()
}

#[test]
fn free_algebra_examples() {
    let r = constant_over_sets();
    let set = library::set();
    let a = model(&set, "model one of set\ncarrier *: a;\n");
    let f = free_algebra(&r, &a, 4).unwrap();
    assert!(f.presentation.is_saturated());
    assert_eq!(f.presentation.structure.carrier(0), ["a", "c"]);
    assert_eq!(f.unit.maps, vec![vec![0]]);

    let empty = model(&set, "model none of set\ncarrier *: ;\n");
    let f = free_algebra(&r, &empty, 4).unwrap();
    assert_eq!(f.presentation.structure.carrier(0), ["c"]);

    let sl = library::semilattice();
    let ab = model(&set, "model ab of set\ncarrier *: a b;\n");
    let f = free_algebra(&sl, &ab, 4).unwrap();
    assert!(f.presentation.is_saturated());
    assert_eq!(f.presentation.structure.carrier(0), ["a", "b", "join(a, b)"]);
}

#[test]
fn free_algebra_without_operators_is_the_model() {
    let pos = library::pos();
    let r = parse_relative("relative bare over pos\n", &pos).unwrap();
    let m = model(&pos, CHAIN2);
    let f = free_algebra(&r, &m, 4).unwrap();
    assert!(f.presentation.is_saturated());
    assert!(is_isomorphic(&f.underlying, &m));
    assert_eq!(f.unit, Homomorphism::identity(&m));
}

#[test]
fn truncated_presentations_are_reproducible() {
    let t = library::mon();
    let a = present(&t, "[x:*, y:*] . mul(x, y) = e", 3);
    let b = present(&t, "[x:*, y:*] . mul(x, y) = e", 3);
    assert!(!a.is_saturated());
    assert_eq!(a.structure.carrier(0), b.structure.carrier(0));
    assert_eq!(a.structure.function_table(1), b.structure.function_table(1));
    assert_eq!(a.representatives, b.representatives);
}
