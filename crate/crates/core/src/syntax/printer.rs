//! Pretty-printing in the concrete syntax accepted by the parser.

use std::fmt::{self, Write as _};

use super::ast::{Context, Formula, Sequent, Term, Theory};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(g, args) if args.is_empty() => f.write_str(g),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn write_conjunct(f: &mut fmt::Formatter<'_>, part: &Formula) -> fmt::Result {
    match part {
        Formula::Conj(inner) if inner.len() >= 2 => write!(f, "({part})"),
        _ => write!(f, "{part}"),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Truth => f.write_str("true"),
            Formula::Eq(l, r) if l == r => write!(f, "def({l})"),
            Formula::Eq(l, r) => write!(f, "{l} = {r}"),
            Formula::Rel(r, args) if args.is_empty() => f.write_str(r),
            Formula::Rel(r, args) => write!(f, "{}", Term::App(r.clone(), args.clone())),
            Formula::Conj(parts) => match parts.len() {
                0 => f.write_str("true"),
                1 => write!(f, "and({})", parts[0]),
                _ => {
                    for (i, p) in parts.iter().enumerate() {
                        if i > 0 {
                            f.write_str(" /\\ ")?;
                        }
                        write_conjunct(f, p)?;
                    }
                    Ok(())
                }
            },
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (v, s)) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{s}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} |- {}", self.context, self.premise, self.conclusion)
    }
}

/// Renders a theory in the DSL.
pub fn print_theory(t: &Theory) -> String {
    let mut out = String::new();
    let sig = &t.signature;
    writeln!(out, "theory {}", t.name).unwrap();
    if sig.sort_count() > 0 {
        let sorts: Vec<_> = sig.sorts().collect();
        writeln!(out, "sorts: {}", sorts.join(" ")).unwrap();
    }
    for f in sig.functions() {
        let args = f.args.join(" ");
        let sep = if args.is_empty() { "" } else { " " };
        writeln!(out, "fun {} : {args}{sep}-> {};", f.name, f.result).unwrap();
    }
    for r in sig.relations() {
        let args = r.args.join(" ");
        let sep = if args.is_empty() { "" } else { " " };
        writeln!(out, "rel {} :{sep}{args};", r.name).unwrap();
    }
    for a in &t.axioms {
        writeln!(out, "axiom {} {};", a.name, a.sequent).unwrap();
    }
    out
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_theory(self))
    }
}
