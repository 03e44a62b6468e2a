//! Sort checking and well-formedness diagnostics.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::ast::{Context, Formula, Sequent, Signature, Term, Theory};

/// A position in source text (1-based line and column).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiagnosticKind {
    UnknownSymbol,
    UnknownSort,
    UnknownVariable,
    ArityMismatch,
    SortMismatch,
    DuplicateName,
    Shadowing,
    WrongSymbolKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
    /// The axiom or declaration the problem belongs to, when known.
    pub location: Option<String>,
    pub span: Option<Span>,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            message: message.into(),
            location: None,
            span: None,
        }
    }

    fn at(mut self, location: &str) -> Self {
        self.location.get_or_insert_with(|| location.to_owned());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = self.span {
            write!(f, "{span}: ")?;
        }
        if let Some(loc) = &self.location {
            write!(f, "in `{loc}`: ")?;
        }
        write!(f, "{}", self.message)
    }
}

/// The sort of a term, or the first reason it fails to sort-check.
pub fn sort_of_term(sig: &Signature, ctx: &Context, t: &Term) -> Result<String, Diagnostic> {
    match t {
        Term::Var(v) => ctx.sort_of(v).map(str::to_owned).ok_or_else(|| {
            if sig.has_symbol(v) {
                Diagnostic::new(
                    DiagnosticKind::WrongSymbolKind,
                    format!("`{v}` is not a variable of the context nor a constant"),
                )
            } else {
                Diagnostic::new(DiagnosticKind::UnknownSymbol, format!("unknown symbol `{v}`"))
            }
        }),
        Term::App(f, args) => {
            let sym = sig.function(f).ok_or_else(|| {
                if sig.relation(f).is_some() {
                    Diagnostic::new(
                        DiagnosticKind::WrongSymbolKind,
                        format!("relation `{f}` used as a function"),
                    )
                } else {
                    Diagnostic::new(DiagnosticKind::UnknownSymbol, format!("unknown function symbol `{f}`"))
                }
            })?;
            if sym.args.len() != args.len() {
                return Err(Diagnostic::new(
                    DiagnosticKind::ArityMismatch,
                    format!("`{f}` expects {} arguments, got {}", sym.args.len(), args.len()),
                ));
            }
            for (i, (a, expected)) in args.iter().zip(&sym.args).enumerate() {
                let found = sort_of_term(sig, ctx, a)?;
                if &found != expected {
                    return Err(Diagnostic::new(
                        DiagnosticKind::SortMismatch,
                        format!("argument {i} of `{f}` has sort `{found}`, expected `{expected}`"),
                    ));
                }
            }
            Ok(sym.result.clone())
        }
    }
}

/// All diagnostics for a term in a context.
pub fn term_diagnostics(sig: &Signature, ctx: &Context, t: &Term) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    collect_term(sig, ctx, t, &mut out);
    out
}

fn collect_term(sig: &Signature, ctx: &Context, t: &Term, out: &mut Vec<Diagnostic>) -> Option<String> {
    match t {
        Term::Var(_) => match sort_of_term(sig, ctx, t) {
            Ok(s) => Some(s),
            Err(d) => {
                out.push(d);
                None
            }
        },
        Term::App(f, args) => {
            let arg_sorts: Vec<_> = args.iter().map(|a| collect_term(sig, ctx, a, out)).collect();
            let Some(sym) = sig.function(f) else {
                let d = sort_of_term(sig, ctx, &Term::App(f.clone(), Vec::new())).unwrap_err();
                out.push(d);
                return None;
            };
            if sym.args.len() != args.len() {
                out.push(Diagnostic::new(
                    DiagnosticKind::ArityMismatch,
                    format!("`{f}` expects {} arguments, got {}", sym.args.len(), args.len()),
                ));
                return Some(sym.result.clone());
            }
            for (i, (found, expected)) in arg_sorts.iter().zip(&sym.args).enumerate() {
                if let Some(found) = found {
                    if found != expected {
                        out.push(Diagnostic::new(
                            DiagnosticKind::SortMismatch,
                            format!("argument {i} of `{f}` has sort `{found}`, expected `{expected}`"),
                        ));
                    }
                }
            }
            Some(sym.result.clone())
        }
    }
}

/// All diagnostics for a formula in a context.
pub fn formula_diagnostics(sig: &Signature, ctx: &Context, phi: &Formula) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    collect_formula(sig, ctx, phi, &mut out);
    out
}

fn collect_formula(sig: &Signature, ctx: &Context, phi: &Formula, out: &mut Vec<Diagnostic>) {
    match phi {
        Formula::Truth => {}
        Formula::Conj(parts) => parts.iter().for_each(|p| collect_formula(sig, ctx, p, out)),
        Formula::Eq(l, r) if l == r => {
            collect_term(sig, ctx, l, out);
        }
        Formula::Eq(l, r) => {
            let a = collect_term(sig, ctx, l, out);
            let b = collect_term(sig, ctx, r, out);
            if let (Some(a), Some(b)) = (a, b) {
                if a != b {
                    out.push(Diagnostic::new(
                        DiagnosticKind::SortMismatch,
                        format!("equation between sorts `{a}` and `{b}`"),
                    ));
                }
            }
        }
        Formula::Rel(r, args) => {
            let sorts: Vec<_> = args.iter().map(|a| collect_term(sig, ctx, a, out)).collect();
            let Some(sym) = sig.relation(r) else {
                let kind = if sig.function(r).is_some() {
                    DiagnosticKind::WrongSymbolKind
                } else {
                    DiagnosticKind::UnknownSymbol
                };
                out.push(Diagnostic::new(kind, format!("unknown relation symbol `{r}`")));
                return;
            };
            if sym.args.len() != args.len() {
                out.push(Diagnostic::new(
                    DiagnosticKind::ArityMismatch,
                    format!("`{r}` expects {} arguments, got {}", sym.args.len(), args.len()),
                ));
                return;
            }
            for (i, (found, expected)) in sorts.iter().zip(&sym.args).enumerate() {
                if let Some(found) = found {
                    if found != expected {
                        out.push(Diagnostic::new(
                            DiagnosticKind::SortMismatch,
                            format!("argument {i} of `{r}` has sort `{found}`, expected `{expected}`"),
                        ));
                    }
                }
            }
        }
    }
}

/// Diagnostics for a context: duplicate variables, undeclared sorts, constants shadowed.
pub fn context_diagnostics(sig: &Signature, ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (v, s) in &ctx.vars {
        if !seen.insert(v.as_str()) {
            out.push(Diagnostic::new(DiagnosticKind::DuplicateName, format!("variable `{v}` declared twice")));
        }
        if !sig.has_sort(s) {
            out.push(Diagnostic::new(DiagnosticKind::UnknownSort, format!("unknown sort `{s}`")));
        }
        if sig.has_symbol(v) {
            out.push(Diagnostic::new(
                DiagnosticKind::Shadowing,
                format!("variable `{v}` shadows a symbol of the signature"),
            ));
        }
    }
    out
}

pub fn sequent_diagnostics(sig: &Signature, s: &Sequent) -> Vec<Diagnostic> {
    let mut out = context_diagnostics(sig, &s.context);
    collect_formula(sig, &s.context, &s.premise, &mut out);
    collect_formula(sig, &s.context, &s.conclusion, &mut out);
    out
}

pub fn signature_diagnostics(sig: &Signature) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for f in sig.functions() {
        for s in f.args.iter().chain(std::iter::once(&f.result)) {
            if !sig.has_sort(s) {
                out.push(
                    Diagnostic::new(DiagnosticKind::UnknownSort, format!("unknown sort `{s}` in arity of `{}`", f.name))
                        .at(&f.name),
                );
            }
        }
    }
    for r in sig.relations() {
        for s in &r.args {
            if !sig.has_sort(s) {
                out.push(
                    Diagnostic::new(DiagnosticKind::UnknownSort, format!("unknown sort `{s}` in arity of `{}`", r.name))
                        .at(&r.name),
                );
            }
        }
    }
    out
}

pub fn theory_diagnostics(t: &Theory) -> Vec<Diagnostic> {
    let mut out = signature_diagnostics(&t.signature);
    let mut names = HashSet::new();
    for ax in &t.axioms {
        if !names.insert(ax.name.as_str()) {
            out.push(
                Diagnostic::new(DiagnosticKind::DuplicateName, format!("axiom `{}` declared twice", ax.name))
                    .at(&ax.name),
            );
        }
        out.extend(sequent_diagnostics(&t.signature, &ax.sequent).into_iter().map(|d| d.at(&ax.name)));
    }
    out
}

/// Anything that can be checked against a signature in a context.
pub trait WellFormed {
    fn diagnostics(&self, sig: &Signature, ctx: &Context) -> Vec<Diagnostic>;
}

impl WellFormed for Term {
    fn diagnostics(&self, sig: &Signature, ctx: &Context) -> Vec<Diagnostic> {
        term_diagnostics(sig, ctx, self)
    }
}

impl WellFormed for Formula {
    fn diagnostics(&self, sig: &Signature, ctx: &Context) -> Vec<Diagnostic> {
        formula_diagnostics(sig, ctx, self)
    }
}

impl WellFormed for Sequent {
    fn diagnostics(&self, sig: &Signature, _ctx: &Context) -> Vec<Diagnostic> {
        sequent_diagnostics(sig, self)
    }
}

impl WellFormed for Theory {
    fn diagnostics(&self, _sig: &Signature, _ctx: &Context) -> Vec<Diagnostic> {
        theory_diagnostics(self)
    }
}

/// Diagnostics for a term, formula, sequent or theory. Empty means well-formed.
pub fn well_formed<W: WellFormed + ?Sized>(item: &W, sig: &Signature, ctx: &Context) -> Vec<Diagnostic> {
    item.diagnostics(sig, ctx)
}
