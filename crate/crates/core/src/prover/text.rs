//! Derivation files: one node per line, children indented two spaces deeper
//! than their parent. Each line reads `SEQUENT  [rule NAME {DATA}]`. The data
//! holds only what the conclusion does not already determine.

use std::fmt::Write as _;

use thiserror::Error;

use super::derivation::Derivation;
use super::rules::{RuleInstance, RuleName, Side};
use crate::syntax::{parse_sequent, parse_term, Formula, Sequent, Term, Theory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DerivationParseError {
    pub line: usize,
    pub message: String,
}

fn data_text(d: &Derivation) -> String {
    match &d.rule {
        RuleInstance::Axiom { name } => format!("name={name}"),
        RuleInstance::Refl { index, .. } => format!("i={index}"),
        RuleInstance::SEq { side, .. } => match side {
            Side::Left => "side=left".into(),
            Side::Right => "side=right".into(),
        },
        RuleInstance::SRel { index, .. } | RuleInstance::SFun { index, .. } | RuleInstance::EConj { index, .. } => {
            format!("j={index}")
        }
        RuleInstance::Subst { terms, .. } => {
            let names: Vec<String> = match d.premises.first() {
                Some(p) => p.conclusion.context.names().map(str::to_owned).collect(),
                None => (0..terms.len()).map(|i| format!("_{i}")).collect(),
            };
            names
                .iter()
                .zip(terms)
                .map(|(v, t)| format!("{v}:={t}"))
                .collect::<Vec<_>>()
                .join("; ")
        }
        RuleInstance::Id { .. } | RuleInstance::Cut | RuleInstance::Eq { .. } | RuleInstance::IConj { .. } => String::new(),
    }
}

/// Renders a derivation in the indented text format.
pub fn print_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    fn go(d: &Derivation, depth: usize, out: &mut String) {
        writeln!(
            out,
            "{}{}  [rule {} {{{}}}]",
            "  ".repeat(depth),
            d.conclusion,
            d.rule.name(),
            data_text(d)
        )
        .unwrap();
        for p in &d.premises {
            go(p, depth + 1, out);
        }
    }
    go(d, 0, &mut out);
    out
}

struct Line {
    number: usize,
    depth: usize,
    sequent: Sequent,
    rule: RuleName,
    data: String,
}

fn key_value<'a>(data: &'a str, key: &str, line: usize) -> Result<&'a str, DerivationParseError> {
    let data = data.trim();
    data.strip_prefix(key)
        .and_then(|r| r.trim_start().strip_prefix('='))
        .map(str::trim)
        .ok_or_else(|| DerivationParseError {
            line,
            message: format!("expected `{key}=...`, found `{data}`"),
        })
}

fn index(data: &str, key: &str, line: usize) -> Result<usize, DerivationParseError> {
    key_value(data, key, line)?.parse().map_err(|_| DerivationParseError {
        line,
        message: format!("`{key}` must be a number"),
    })
}

fn parse_line(theory: &Theory, number: usize, raw: &str) -> Result<Option<Line>, DerivationParseError> {
    let trimmed = raw.trim_end();
    if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
        return Ok(None);
    }
    let err = |message: String| DerivationParseError { line: number, message };
    let indent = trimmed.len() - trimmed.trim_start_matches(' ').len();
    if !indent.is_multiple_of(2) {
        return Err(err("indentation must be a multiple of two spaces".into()));
    }
    let body = &trimmed[indent..];
    let at = body
        .rfind("[rule ")
        .ok_or_else(|| err("missing `[rule NAME {...}]` label".into()))?;
    let (seq_text, label) = body.split_at(at);
    let label = label
        .strip_prefix("[rule ")
        .and_then(|l| l.strip_suffix(']'))
        .ok_or_else(|| err("label must end with `]`".into()))?;
    let (name, data) = match label.find('{') {
        Some(i) => {
            let data = label[i + 1..]
                .strip_suffix('}')
                .ok_or_else(|| err("rule data must end with `}`".into()))?;
            (label[..i].trim(), data)
        }
        None => (label.trim(), ""),
    };
    let rule = RuleName::parse(name).ok_or_else(|| err(format!("unknown rule `{name}`")))?;
    let sequent = parse_sequent(&theory.signature, seq_text.trim()).map_err(|e| err(e.to_string()))?;
    Ok(Some(Line {
        number,
        depth: indent / 2,
        sequent,
        rule,
        data: data.to_owned(),
    }))
}

fn instance(theory: &Theory, line: &Line, children: &[Derivation]) -> Result<RuleInstance, DerivationParseError> {
    let n = line.number;
    let err = |message: String| DerivationParseError { line: n, message };
    let s = &line.sequent;
    let ctx = s.context.clone();
    Ok(match line.rule {
        RuleName::Axiom => RuleInstance::Axiom {
            name: key_value(&line.data, "name", n)?.to_owned(),
        },
        RuleName::Id => RuleInstance::Id {
            context: ctx,
            formula: s.premise.clone(),
        },
        RuleName::Cut => RuleInstance::Cut,
        RuleName::IConj => RuleInstance::IConj {
            context: ctx,
            premise: s.premise.clone(),
        },
        RuleName::Refl => RuleInstance::Refl {
            context: ctx,
            index: index(&line.data, "i", n)?,
        },
        RuleName::SEq => {
            let Formula::Eq(lhs, rhs) = &s.premise else {
                return Err(err("SEq needs an equation as premise".into()));
            };
            let side = match key_value(&line.data, "side", n)? {
                "left" => Side::Left,
                "right" => Side::Right,
                other => return Err(err(format!("side must be `left` or `right`, found `{other}`"))),
            };
            RuleInstance::SEq {
                context: ctx,
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                side,
            }
        }
        RuleName::SRel => {
            let Formula::Rel(r, args) = &s.premise else {
                return Err(err("SRel needs a relation atom as premise".into()));
            };
            RuleInstance::SRel {
                context: ctx,
                relation: r.clone(),
                args: args.clone(),
                index: index(&line.data, "j", n)?,
            }
        }
        RuleName::SFun => {
            let Formula::Eq(Term::App(f, args), r) = &s.premise else {
                return Err(err("SFun needs a definedness atom as premise".into()));
            };
            if !matches!(r, Term::App(g, rargs) if g == f && rargs == args) {
                return Err(err("SFun needs a definedness atom as premise".into()));
            }
            RuleInstance::SFun {
                context: ctx,
                function: f.clone(),
                args: args.clone(),
                index: index(&line.data, "j", n)?,
            }
        }
        RuleName::EConj => {
            let Formula::Conj(parts) = &s.premise else {
                return Err(err("EConj needs a conjunction as premise".into()));
            };
            RuleInstance::EConj {
                context: ctx,
                conjuncts: parts.clone(),
                index: index(&line.data, "j", n)?,
            }
        }
        RuleName::Eq => {
            let Formula::Conj(parts) = &s.premise else {
                return Err(err("Eq needs a conjunction as premise".into()));
            };
            let (first, eqs) = parts.split_first().ok_or_else(|| err("Eq needs a nonempty conjunction".into()))?;
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for e in eqs {
                match e {
                    Formula::Eq(Term::Var(x), Term::Var(y)) => {
                        xs.push(x.clone());
                        ys.push(y.clone());
                    }
                    _ => return Err(err(format!("`{e}` is not an equation between variables"))),
                }
            }
            RuleInstance::Eq {
                context: ctx,
                formula: first.clone(),
                xs,
                ys,
            }
        }
        RuleName::Subst => {
            let child = children.first().ok_or_else(|| err("Subst needs one premise".into()))?;
            let mut assigned: Vec<(String, Term)> = Vec::new();
            for part in line.data.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                let (v, t) = part
                    .split_once(":=")
                    .ok_or_else(|| err(format!("expected `var:=term`, found `{part}`")))?;
                let t = parse_term(&theory.signature, &ctx, t.trim()).map_err(|e| err(e.to_string()))?;
                assigned.push((v.trim().to_owned(), t));
            }
            let mut terms = Vec::new();
            for v in child.conclusion.context.names() {
                let t = assigned
                    .iter()
                    .find(|(w, _)| w == v)
                    .map(|(_, t)| t.clone())
                    .ok_or_else(|| err(format!("no term for `{v}`")))?;
                terms.push(t);
            }
            if assigned.len() != terms.len() {
                return Err(err("substitution mentions variables outside the premise context".into()));
            }
            RuleInstance::Subst { target: ctx, terms }
        }
    })
}

/// Reads a derivation in the indented text format. Rule applicability is
/// not checked here; use [`check_derivation`](super::check_derivation).
pub fn parse_derivation(theory: &Theory, text: &str) -> Result<Derivation, DerivationParseError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(l) = parse_line(theory, i + 1, raw)? {
            lines.push(l);
        }
    }
    if lines.is_empty() {
        return Err(DerivationParseError {
            line: 1,
            message: "empty derivation".into(),
        });
    }
    if lines[0].depth != 0 {
        return Err(DerivationParseError {
            line: lines[0].number,
            message: "the root must not be indented".into(),
        });
    }
    let mut pos = 0;
    let d = build(theory, &lines, &mut pos, 0)?;
    if pos < lines.len() {
        return Err(DerivationParseError {
            line: lines[pos].number,
            message: "more than one root".into(),
        });
    }
    Ok(d)
}

fn build(theory: &Theory, lines: &[Line], pos: &mut usize, depth: usize) -> Result<Derivation, DerivationParseError> {
    let me = &lines[*pos];
    *pos += 1;
    let mut children = Vec::new();
    while *pos < lines.len() && lines[*pos].depth > depth {
        if lines[*pos].depth != depth + 1 {
            return Err(DerivationParseError {
                line: lines[*pos].number,
                message: "children must be indented exactly one level deeper".into(),
            });
        }
        children.push(build(theory, lines, pos, depth + 1)?);
    }
    let rule = instance(theory, me, &children)?;
    Ok(Derivation::new(me.sequent.clone(), rule, children))
}
