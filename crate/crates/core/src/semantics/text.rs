//! Text formats for finite structures and homomorphisms.

use std::fmt::Write as _;
use std::sync::Arc;

use super::hom::{hom_violation, Homomorphism};
use super::structure::PartialStructure;
use crate::syntax::lexer::Tok;
use crate::syntax::{quote_name, ParseError, Parser, Signature, Theory};

fn structure_error(p: &Parser, e: impl ToString) -> ParseError {
    p.error(e.to_string())
}

fn parse_tuple(p: &mut Parser) -> Result<Vec<String>, ParseError> {
    if !p.eat(&Tok::LParen) {
        return Ok(vec![p.expect_name()?]);
    }
    let mut out = Vec::new();
    if p.eat(&Tok::RParen) {
        return Ok(out);
    }
    loop {
        out.push(p.expect_name()?);
        if p.eat(&Tok::RParen) {
            return Ok(out);
        }
        p.expect(&Tok::Comma)?;
    }
}

impl Parser {
    /// A `model NAME of THEORY` block over the given theory's signature.
    pub fn parse_model_block(&mut self, theory: &Theory) -> Result<PartialStructure, ParseError> {
        self.expect_keyword("model")?;
        let name = self.expect_name()?;
        self.expect_keyword("of")?;
        let span = self.span();
        let of = self.expect_name()?;
        if of != theory.name {
            return Err(ParseError::syntax(
                span,
                format!("model `{name}` is declared over `{of}`, not `{}`", theory.name),
            ));
        }
        self.parse_model_body(name, theory.signature.clone())
    }

    pub(crate) fn parse_model_body(&mut self, name: String, sig: Arc<Signature>) -> Result<PartialStructure, ParseError> {
        let mut m = PartialStructure::empty(name, sig.clone());
        while !self.at_block_start() {
            if self.eat_keyword("carrier") {
                let span = self.span();
                let s = self.expect_name()?;
                let si = sig
                    .sort_index(&s)
                    .ok_or_else(|| ParseError::syntax(span, format!("unknown sort `{s}`")))?;
                self.expect(&Tok::Colon)?;
                while !self.eat(&Tok::Semi) {
                    let e = self.expect_name()?;
                    self.eat(&Tok::Comma);
                    m.add_element(si, e).map_err(|e| structure_error(self, e))?;
                }
            } else if self.eat_keyword("fun") {
                let f = self.expect_name()?;
                self.expect(&Tok::Colon)?;
                let args = parse_tuple(self)?;
                self.expect(&Tok::Arrow)?;
                let v = self.expect_name()?;
                let args: Vec<&str> = args.iter().map(String::as_str).collect();
                m.define(&f, &args, &v).map_err(|e| structure_error(self, e))?;
                self.expect(&Tok::Semi)?;
            } else if self.eat_keyword("rel") {
                let r = self.expect_name()?;
                self.expect(&Tok::Colon)?;
                while !self.eat(&Tok::Semi) {
                    let t = if matches!(self.peek(), Tok::LParen) {
                        parse_tuple(self)?
                    } else {
                        vec![self.expect_name()?]
                    };
                    let t: Vec<&str> = t.iter().map(String::as_str).collect();
                    m.relate(&r, &t).map_err(|e| structure_error(self, e))?;
                }
            } else {
                return Err(self.error(format!(
                    "expected `carrier`, `fun` or `rel`, found {}",
                    self.peek().describe()
                )));
            }
        }
        Ok(m)
    }

    /// A `hom NAME : M -> N` block between two given structures.
    pub fn parse_hom_block(&mut self, src: &PartialStructure, tgt: &PartialStructure) -> Result<(String, Homomorphism), ParseError> {
        let (name, _, _) = self.parse_hom_header()?;
        let h = self.parse_hom_body(src, tgt)?;
        Ok((name, h))
    }

    /// `hom NAME : SRC -> TGT`, returning the three names.
    pub fn parse_hom_header(&mut self) -> Result<(String, String, String), ParseError> {
        self.expect_keyword("hom")?;
        let name = self.expect_name()?;
        self.expect(&Tok::Colon)?;
        let a = self.expect_name()?;
        self.expect(&Tok::Arrow)?;
        let b = self.expect_name()?;
        Ok((name, a, b))
    }

    pub fn parse_hom_body(&mut self, src: &PartialStructure, tgt: &PartialStructure) -> Result<Homomorphism, ParseError> {
        let sig = src.signature().clone();
        let start = self.span();
        let mut maps: Vec<Vec<Option<usize>>> = (0..sig.sort_count()).map(|s| vec![None; src.carrier_size(s)]).collect();
        while !self.at_block_start() {
            self.expect_keyword("map")?;
            let span = self.span();
            let s = self.expect_name()?;
            let si = sig
                .sort_index(&s)
                .ok_or_else(|| ParseError::syntax(span, format!("unknown sort `{s}`")))?;
            self.expect(&Tok::Colon)?;
            while !self.eat(&Tok::Semi) {
                let a = self.expect_name()?;
                self.expect(&Tok::Arrow)?;
                let b = self.expect_name()?;
                self.eat(&Tok::Comma);
                let ai = src.lookup(si, &a).map_err(|e| structure_error(self, e))?;
                let bi = tgt.lookup(si, &b).map_err(|e| structure_error(self, e))?;
                maps[si][ai] = Some(bi);
            }
        }
        let mut out = Vec::with_capacity(maps.len());
        for (s, row) in maps.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (e, v) in row.into_iter().enumerate() {
                r.push(v.ok_or_else(|| {
                    ParseError::syntax(
                        start,
                        format!("element `{}` of sort `{}` is not mapped", src.element_name(s, e), sig.sort_name(s)),
                    )
                })?);
            }
            out.push(r);
        }
        let h = Homomorphism { maps: out };
        if let Some(reason) = hom_violation(src, tgt, &h) {
            return Err(ParseError::syntax(start, format!("not a homomorphism: {reason}")));
        }
        Ok(h)
    }
}

/// Parses a single model of `theory`.
pub fn parse_model(text: &str, theory: &Theory) -> Result<PartialStructure, ParseError> {
    let mut p = Parser::new(text)?;
    let m = p.parse_model_block(theory)?;
    p.expect_eof()?;
    Ok(m)
}

/// Parses a single homomorphism between two given structures.
pub fn parse_hom(text: &str, src: &PartialStructure, tgt: &PartialStructure) -> Result<Homomorphism, ParseError> {
    let mut p = Parser::new(text)?;
    let (_, h) = p.parse_hom_block(src, tgt)?;
    p.expect_eof()?;
    Ok(h)
}

fn tuple_text(names: &[&str]) -> String {
    let parts: Vec<String> = names.iter().map(|n| quote_name(n)).collect();
    format!("({})", parts.join(","))
}

/// Renders a structure in the model format.
pub fn print_model(m: &PartialStructure, theory_name: &str) -> String {
    let sig = m.signature();
    let mut out = String::new();
    writeln!(out, "model {} of {}", quote_name(&m.name), theory_name).unwrap();
    for s in 0..sig.sort_count() {
        let elems: Vec<String> = m.carrier(s).iter().map(|e| quote_name(e)).collect();
        let sep = if elems.is_empty() { "" } else { " " };
        writeln!(out, "carrier {}:{sep}{};", sig.sort_name(s), elems.join(" ")).unwrap();
    }
    for f in 0..sig.function_count() {
        let arg_sorts = m.function_arg_sorts(f);
        let rs = m.function_result_sort(f);
        for (args, &v) in m.function_table(f) {
            let names: Vec<&str> = args.iter().zip(&arg_sorts).map(|(&a, &s)| m.element_name(s, a)).collect();
            writeln!(
                out,
                "fun {}: {} -> {};",
                sig.function_at(f).name,
                tuple_text(&names),
                quote_name(m.element_name(rs, v))
            )
            .unwrap();
        }
    }
    for r in 0..sig.relation_count() {
        let sorts = m.relation_arg_sorts(r);
        let table = m.relation_table(r);
        if table.is_empty() {
            continue;
        }
        let tuples: Vec<String> = table
            .iter()
            .map(|t| {
                let names: Vec<&str> = t.iter().zip(&sorts).map(|(&a, &s)| m.element_name(s, a)).collect();
                tuple_text(&names)
            })
            .collect();
        writeln!(out, "rel {}: {};", sig.relation_at(r).name, tuples.join(" ")).unwrap();
    }
    out
}

/// Renders a homomorphism in the hom format.
pub fn print_hom(name: &str, src: &PartialStructure, tgt: &PartialStructure, h: &Homomorphism) -> String {
    let sig = src.signature();
    let mut out = String::new();
    writeln!(out, "hom {} : {} -> {}", quote_name(name), quote_name(&src.name), quote_name(&tgt.name)).unwrap();
    for s in 0..sig.sort_count() {
        let pairs: Vec<String> = h.maps[s]
            .iter()
            .enumerate()
            .map(|(a, &b)| format!("{}->{}", quote_name(src.element_name(s, a)), quote_name(tgt.element_name(s, b))))
            .collect();
        let sep = if pairs.is_empty() { "" } else { " " };
        writeln!(out, "map {}:{sep}{};", sig.sort_name(s), pairs.join(" ")).unwrap();
    }
    out
}
