//! Recursive-descent parser for the theory DSL.
//!
//! The [`Parser`] type is also the building block of the model, morphism,
//! sketch and derivation readers elsewhere in the crate.

use super::ast::{Axiom, Context, Formula, FunctionSymbol, RelationSymbol, Sequent, Signature, Term, Theory};
use super::lexer::{lex, Tok, Token};
use super::wf::{context_diagnostics, formula_diagnostics, sequent_diagnostics, theory_diagnostics, Span};
use super::ParseError;

/// Keywords that open a top-level block in a document.
pub const BLOCK_KEYWORDS: &[&str] = &["theory", "model", "hom", "morphism", "relative", "sketch"];

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::syntax(self.span(), message)
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", t.describe(), self.peek().describe())))
        }
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{kw}`, found {}", self.peek().describe())))
        }
    }

    pub fn at_block_start(&self) -> bool {
        self.at_eof() || BLOCK_KEYWORDS.iter().any(|k| self.at_keyword(k))
    }

    /// An identifier or a quoted string.
    pub fn expect_name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected a name, found {}", other.describe()))),
        }
    }

    pub fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected an identifier, found {}", other.describe()))),
        }
    }

    pub fn expect_usize(&mut self) -> Result<usize, ParseError> {
        let span = self.span();
        let s = self.expect_ident()?;
        s.parse().map_err(|_| ParseError::syntax(span, format!("expected a number, found `{s}`")))
    }

    /// `[x:s, y:t]`, possibly empty.
    pub fn parse_context(&mut self) -> Result<Context, ParseError> {
        self.expect(&Tok::LBracket)?;
        let mut ctx = Context::new();
        if self.eat(&Tok::RBracket) {
            return Ok(ctx);
        }
        loop {
            let v = self.expect_ident()?;
            self.expect(&Tok::Colon)?;
            let s = self.expect_ident()?;
            ctx.push(v, s);
            if self.eat(&Tok::RBracket) {
                return Ok(ctx);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    pub fn parse_term(&mut self, sig: &Signature, ctx: &Context) -> Result<Term, ParseError> {
        let name = self.expect_ident()?;
        if self.eat(&Tok::LParen) {
            let args = self.parse_term_list(sig, ctx)?;
            return Ok(Term::App(name, args));
        }
        if !ctx.contains(&name) && sig.is_constant(&name) {
            Ok(Term::App(name, Vec::new()))
        } else {
            Ok(Term::Var(name))
        }
    }

    /// Terms separated by commas, after the opening parenthesis, through the closing one.
    fn parse_term_list(&mut self, sig: &Signature, ctx: &Context) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.parse_term(sig, ctx)?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    pub fn parse_formula(&mut self, sig: &Signature, ctx: &Context) -> Result<Formula, ParseError> {
        let first = self.parse_atom(sig, ctx)?;
        if !matches!(self.peek(), Tok::Wedge) {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.eat(&Tok::Wedge) {
            parts.push(self.parse_atom(sig, ctx)?);
        }
        Ok(Formula::Conj(parts))
    }

    fn parse_atom(&mut self, sig: &Signature, ctx: &Context) -> Result<Formula, ParseError> {
        if self.eat(&Tok::LParen) {
            let f = self.parse_formula(sig, ctx)?;
            self.expect(&Tok::RParen)?;
            return Ok(f);
        }
        let Tok::Ident(name) = self.peek().clone() else {
            return Err(self.error(format!("expected a formula, found {}", self.peek().describe())));
        };
        let reserved = !ctx.contains(&name) && !sig.has_symbol(&name);
        match name.as_str() {
            "true" if reserved => {
                self.bump();
                return Ok(Formula::Truth);
            }
            "def" if reserved && matches!(self.peek_at(1), Tok::LParen) => {
                self.bump();
                self.bump();
                let t = self.parse_term(sig, ctx)?;
                self.expect(&Tok::RParen)?;
                return Ok(t.defined());
            }
            "and" if reserved && matches!(self.peek_at(1), Tok::LParen) => {
                self.bump();
                self.bump();
                let mut parts = Vec::new();
                if !self.eat(&Tok::RParen) {
                    loop {
                        parts.push(self.parse_formula(sig, ctx)?);
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        self.expect(&Tok::Comma)?;
                    }
                }
                return Ok(Formula::conj(parts));
            }
            _ => {}
        }
        if sig.relation(&name).is_some() && !ctx.contains(&name) {
            self.bump();
            let args = if self.eat(&Tok::LParen) {
                self.parse_term_list(sig, ctx)?
            } else {
                Vec::new()
            };
            return Ok(Formula::Rel(name, args));
        }
        let lhs = self.parse_term(sig, ctx)?;
        if self.eat(&Tok::Equals) {
            let rhs = self.parse_term(sig, ctx)?;
            return Ok(Formula::Eq(lhs, rhs));
        }
        match lhs {
            Term::App(r, args) => Ok(Formula::Rel(r, args)),
            Term::Var(_) => Err(self.error(format!("expected `=` after a term, found {}", self.peek().describe()))),
        }
    }

    /// `[ctx] PHI |- PSI`.
    pub fn parse_sequent(&mut self, sig: &Signature) -> Result<Sequent, ParseError> {
        let ctx = self.parse_context()?;
        let premise = self.parse_formula(sig, &ctx)?;
        self.expect(&Tok::Turnstile)?;
        let conclusion = self.parse_formula(sig, &ctx)?;
        Ok(Sequent::new(ctx, premise, conclusion))
    }

    /// Sort names up to a `;`, a `->` or a keyword that starts another declaration.
    fn parse_sort_list(&mut self, stop_keywords: &[&str]) -> Vec<String> {
        let mut out = Vec::new();
        while let Tok::Ident(s) = self.peek().clone() {
            if stop_keywords.contains(&s.as_str()) || BLOCK_KEYWORDS.contains(&s.as_str()) {
                break;
            }
            self.bump();
            out.push(s);
        }
        out
    }

    /// A `theory` block. Stops at the next block keyword or end of input.
    pub fn parse_theory_block(&mut self) -> Result<(Theory, Vec<Span>), ParseError> {
        self.expect_keyword("theory")?;
        let name = self.expect_ident()?;
        let mut sig = Signature::new();
        let mut decl_spans = Vec::new();
        let mut axioms: Vec<(Axiom, Span)> = Vec::new();
        let mut diags = Vec::new();
        while !self.at_block_start() {
            let span = self.span();
            if self.eat_keyword("sorts") {
                self.eat(&Tok::Colon);
                for s in self.parse_sort_list(&["fun", "rel", "axiom", "sorts"]) {
                    if !sig.add_sort(s.clone()) {
                        diags.push(dup(span, format!("sort `{s}` declared twice")));
                    }
                }
                self.eat(&Tok::Semi);
            } else if self.eat_keyword("fun") {
                let f = self.expect_ident()?;
                self.expect(&Tok::Colon)?;
                let args = self.parse_sort_list(&[]);
                self.expect(&Tok::Arrow)?;
                let result = self.expect_ident()?;
                self.expect(&Tok::Semi)?;
                if !sig.add_function(FunctionSymbol { name: f.clone(), args, result }) {
                    diags.push(dup(span, format!("symbol `{f}` declared twice")));
                }
                decl_spans.push(span);
            } else if self.eat_keyword("rel") {
                let r = self.expect_ident()?;
                self.expect(&Tok::Colon)?;
                let args = self.parse_sort_list(&[]);
                self.expect(&Tok::Semi)?;
                if !sig.add_relation(RelationSymbol { name: r.clone(), args }) {
                    diags.push(dup(span, format!("symbol `{r}` declared twice")));
                }
                decl_spans.push(span);
            } else if self.eat_keyword("axiom") {
                let an = self.expect_ident()?;
                let sequent = self.parse_sequent(&sig)?;
                self.expect(&Tok::Semi)?;
                axioms.push((Axiom { name: an, sequent }, span));
            } else {
                return Err(self.error(format!(
                    "expected `sorts`, `fun`, `rel` or `axiom`, found {}",
                    self.peek().describe()
                )));
            }
        }
        let spans: Vec<Span> = axioms.iter().map(|(_, s)| *s).collect();
        let mut theory = Theory::new(name, sig);
        theory.axioms = axioms.into_iter().map(|(a, _)| a).collect();
        for mut d in theory_diagnostics(&theory) {
            if d.span.is_none() {
                d.span = d
                    .location
                    .as_ref()
                    .and_then(|loc| theory.axioms.iter().position(|a| &a.name == loc))
                    .map(|i| spans[i]);
            }
            diags.push(d);
        }
        if !diags.is_empty() {
            return Err(ParseError::IllFormed(diags));
        }
        Ok((theory, spans))
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", self.peek().describe())))
        }
    }
}

fn dup(span: Span, message: String) -> super::wf::Diagnostic {
    let mut d = super::wf::Diagnostic::new(super::wf::DiagnosticKind::DuplicateName, message);
    d.span = Some(span);
    d
}

/// Parses a single theory.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let mut p = Parser::new(text)?;
    if p.at_eof() {
        return Ok(Theory::new("", Signature::new()));
    }
    let (t, _) = p.parse_theory_block()?;
    p.expect_eof()?;
    Ok(t)
}

fn ill_formed(span: Span, diags: Vec<super::wf::Diagnostic>) -> Result<(), ParseError> {
    if diags.is_empty() {
        Ok(())
    } else {
        Err(ParseError::IllFormed(
            diags
                .into_iter()
                .map(|mut d| {
                    d.span.get_or_insert(span);
                    d
                })
                .collect(),
        ))
    }
}

/// Parses and checks a sequent `[ctx] PHI |- PSI` over a signature.
pub fn parse_sequent(sig: &Signature, text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let span = p.span();
    let s = p.parse_sequent(sig)?;
    p.eat(&Tok::Semi);
    p.expect_eof()?;
    ill_formed(span, sequent_diagnostics(sig, &s))?;
    Ok(s)
}

/// Parses and checks a formula in a given context.
pub fn parse_formula(sig: &Signature, ctx: &Context, text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let span = p.span();
    let f = p.parse_formula(sig, ctx)?;
    p.expect_eof()?;
    ill_formed(span, formula_diagnostics(sig, ctx, &f))?;
    Ok(f)
}

/// Parses and checks a term in a given context.
pub fn parse_term(sig: &Signature, ctx: &Context, text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let span = p.span();
    let t = p.parse_term(sig, ctx)?;
    p.expect_eof()?;
    ill_formed(span, super::wf::term_diagnostics(sig, ctx, &t))?;
    Ok(t)
}

/// Parses a formula in context, written `[x:s, ...] . PHI` (the dot is optional).
pub fn parse_formula_in_context(sig: &Signature, text: &str) -> Result<(Context, Formula), ParseError> {
    let mut p = Parser::new(text)?;
    let span = p.span();
    let ctx = p.parse_context()?;
    p.eat(&Tok::Dot);
    let f = if p.at_eof() { Formula::Truth } else { p.parse_formula(sig, &ctx)? };
    p.expect_eof()?;
    let mut diags = context_diagnostics(sig, &ctx);
    diags.extend(formula_diagnostics(sig, &ctx, &f));
    ill_formed(span, diags)?;
    Ok((ctx, f))
}
