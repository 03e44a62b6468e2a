//! Syntax of finitary partial Horn logic: abstract syntax, sort checking,
//! substitution, and the text DSL for theories, formulas and sequents.
//!
//! ```
//! use phl_core::syntax::{parse_theory, print_theory};
//!
//! let src = "theory pos\nsorts: *\nrel leq : * *;\naxiom refl [x:*] true |- leq(x, x);\n";
//! let t = parse_theory(src).unwrap();
//! assert_eq!(t.signature.relation_count(), 1);
//! assert_eq!(parse_theory(&print_theory(&t)).unwrap(), t);
//! ```

mod ast;
pub(crate) mod lexer;
mod parser;
mod printer;
mod subst;
mod wf;

use thiserror::Error;

pub use ast::{Axiom, Context, Formula, FunctionSymbol, RelationSymbol, Sequent, Signature, Term, Theory};
pub use lexer::is_plain_ident;
pub use parser::{
    parse_formula, parse_formula_in_context, parse_sequent, parse_term, parse_theory, Parser, BLOCK_KEYWORDS,
};
pub use printer::print_theory;
pub use subst::{
    rename_formula, rename_sequent, rename_term, substitute_formula, substitute_term, SubstError, Substitution,
};
pub use wf::{
    context_diagnostics, formula_diagnostics, sequent_diagnostics, signature_diagnostics, sort_of_term,
    term_diagnostics, theory_diagnostics, well_formed, Diagnostic, DiagnosticKind, Span, WellFormed,
};

/// Failure to read one of the text formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("{}", render_diagnostics(.0))]
    IllFormed(Vec<Diagnostic>),
}

impl ParseError {
    pub fn syntax(span: Span, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            span,
            message: message.into(),
        }
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            ParseError::IllFormed(d) => d,
            ParseError::Syntax { .. } => &[],
        }
    }
}

fn render_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Quotes an element name unless it is a plain identifier.
pub fn quote_name(s: &str) -> String {
    if is_plain_ident(s) {
        s.to_owned()
    } else {
        format!("\"{s}\"")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const POS: &str = "theory pos
sorts: *
rel leq : * *;
axiom refl [x:*] true |- leq(x, x);
axiom antisym [x:*, y:*] leq(x, y) /\\ leq(y, x) |- x = y;
axiom trans [x:*, y:*, z:*] leq(x, y) /\\ leq(y, z) |- leq(x, z);
";

    #[test]
    fn parses_pos() {
        let t = parse_theory(POS).unwrap();
        assert_eq!(t.signature.sort_count(), 1);
        assert_eq!(t.signature.relation_count(), 1);
        assert_eq!(t.axioms.len(), 3);
        assert!(theory_diagnostics(&t).is_empty());
        assert_eq!(print_theory(&t), POS);
    }

    #[test]
    fn empty_text_is_empty_theory() {
        let t = parse_theory("  # nothing\n").unwrap();
        assert_eq!(t.signature.sort_count(), 0);
        assert!(t.axioms.is_empty());
    }

    #[test]
    fn undeclared_constant_gives_one_diagnostic() {
        let t = parse_theory(POS).unwrap();
        let ctx = Context::from_pairs([("x", "*")]);
        let f = Formula::rel("leq", vec![Term::var("x"), Term::var("c")]);
        let d = well_formed(&f, &t.signature, &ctx);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::UnknownSymbol);
        assert!(well_formed(&Term::var("x"), &t.signature, &ctx).is_empty());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let bad = "theory t\nsorts: s\nfun f : s -> s\naxiom a [x:s] true |- def(f(x));";
        match parse_theory(bad) {
            Err(ParseError::Syntax { span, .. }) => assert_eq!(span.line, 4),
            other => panic!("unexpected {other:?}"),
        }
        let ill = "theory t\nsorts: s\naxiom a [x:s] true |- def(g(x));";
        match parse_theory(ill) {
            Err(ParseError::IllFormed(d)) => {
                assert_eq!(d.len(), 1);
                assert_eq!(d[0].span.unwrap().line, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constants_and_sugar() {
        let src = "theory mon
sorts: *
fun e : -> *;
fun mul : * * -> *;
axiom unit [x:*] true |- mul(x, e) = x /\\ mul(e, x) = x;
axiom e_def [] true |- def(e);
";
        let t = parse_theory(src).unwrap();
        let unit = &t.axioms[0].sequent.conclusion;
        assert_eq!(
            unit,
            &Formula::Conj(vec![
                Formula::eq(Term::app("mul", vec![Term::var("x"), Term::constant("e")]), Term::var("x")),
                Formula::eq(Term::app("mul", vec![Term::constant("e"), Term::var("x")]), Term::var("x")),
            ])
        );
        assert_eq!(t.axioms[1].sequent.conclusion, Term::constant("e").defined());
        assert_eq!(print_theory(&t), src);
    }

    #[test]
    fn nested_and_singleton_conjunctions_round_trip() {
        let t = parse_theory(POS).unwrap();
        let sig = &t.signature;
        let ctx = Context::from_pairs([("x", "*"), ("y", "*")]);
        for text in ["(leq(x, y) /\\ true) /\\ x = y", "and(leq(x, y))", "true", "and(x = y) /\\ def(x)"] {
            let f = parse_formula(sig, &ctx, text).unwrap();
            assert_eq!(f.to_string(), text);
        }
        assert_eq!(parse_formula(sig, &ctx, "and()").unwrap(), Formula::Truth);
    }

    #[test]
    fn substitution_examples() {
        let t = parse_theory(POS).unwrap();
        let sig = &t.signature;
        let src = Context::from_pairs([("x", "*"), ("y", "*")]);
        let tgt = Context::from_pairs([("z", "*")]);
        let phi = parse_formula(sig, &src, "leq(x, y)").unwrap();
        let out = substitute_formula(
            sig,
            &phi,
            &src,
            &tgt,
            &[("x".into(), Term::var("z")), ("y".into(), Term::var("z"))],
        )
        .unwrap();
        assert_eq!(out.to_string(), "leq(z, z)");
        let missing = substitute_formula(sig, &phi, &src, &tgt, &[("x".into(), Term::var("z"))]);
        assert_eq!(missing, Err(SubstError::Missing("y".into())));
    }

    #[test]
    fn substitution_sort_mismatch() {
        let src = "theory two\nsorts: a b\nfun f : a -> b;\n";
        let t = parse_theory(src).unwrap();
        let sig = &t.signature;
        let a_ctx = Context::from_pairs([("x", "a")]);
        let b_ctx = Context::from_pairs([("y", "b")]);
        let r = substitute_term(sig, &Term::app("f", vec![Term::var("x")]), &a_ctx, &b_ctx, &[("x".into(), Term::var("y"))]);
        assert!(matches!(r, Err(SubstError::SortMismatch { .. })));
        let ok = substitute_term(
            sig,
            &Term::app("f", vec![Term::var("x")]),
            &a_ctx,
            &a_ctx,
            &[("x".into(), Term::var("x"))],
        )
        .unwrap();
        assert_eq!(ok.to_string(), "f(x)");
    }

    #[test]
    fn alpha_equivalence() {
        let t = parse_theory(POS).unwrap();
        let a = parse_sequent(&t.signature, "[x:*, y:*] leq(x, y) |- leq(x, y)").unwrap();
        let b = parse_sequent(&t.signature, "[u:*, v:*] leq(u, v) |- leq(u, v)").unwrap();
        let c = parse_sequent(&t.signature, "[u:*, v:*] leq(v, u) |- leq(v, u)").unwrap();
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
    }
}
