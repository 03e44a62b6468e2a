use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::prover::{prove, Budget, BudgetError, Verdict};
use crate::semantics::{interp_formula, interp_term, for_each_tuple, Homomorphism, PartialStructure};
use crate::syntax::{
    formula_diagnostics, rename_formula, rename_term, sort_of_term, Context, Formula, ParseError, Parser, Sequent,
    Signature, Term, Theory,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("sort `{0}` has no image")]
    UnmappedSort(String),
    #[error("symbol `{0}` has no image")]
    UnmappedSymbol(String),
    #[error("`{0}` is not a sort or symbol of the source theory")]
    UnknownSource(String),
    #[error("image of `{symbol}` is ill-typed: {reason}")]
    IllTyped { symbol: String, reason: String },
    #[error("morphism goes {found}, expected {expected}")]
    WrongEnds { expected: String, found: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A theory morphism: sorts go to sorts, function symbols to terms and
/// relation symbols to formulas of the target, each in a context whose
/// variables stand for the argument positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryMorphism {
    pub name: String,
    pub source: Theory,
    pub target: Theory,
    pub sorts: BTreeMap<String, String>,
    pub functions: BTreeMap<String, (Context, Term)>,
    pub relations: BTreeMap<String, (Context, Formula)>,
}

/// Outcome of one axiom obligation.
#[derive(Clone, Debug)]
pub struct Obligation {
    pub axiom: String,
    pub translated: Sequent,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub obligations: Vec<Obligation>,
}

impl MorphismReport {
    /// Every translated axiom was proved.
    pub fn accepted(&self) -> bool {
        self.obligations.iter().all(|o| o.verdict.is_proved())
    }

    /// Some obligation has a countermodel.
    pub fn rejected(&self) -> bool {
        self.obligations.iter().any(|o| o.verdict.is_refuted())
    }
}

fn arg_context(sorts: &BTreeMap<String, String>, args: &[String]) -> Context {
    Context::from_pairs(
        args.iter()
            .enumerate()
            .map(|(i, s)| (format!("x{i}"), sorts.get(s).cloned().unwrap_or_else(|| s.clone()))),
    )
}

impl TheoryMorphism {
    /// The identity morphism of a theory.
    pub fn identity(t: &Theory) -> Self {
        Self::inclusion(t, t).expect("a theory includes itself")
    }

    /// The morphism sending every sort and symbol to the one of the same name.
    pub fn inclusion(source: &Theory, target: &Theory) -> Result<Self, MorphismError> {
        let mut m = TheoryMorphism {
            name: format!("{}_to_{}", source.name, target.name),
            source: source.clone(),
            target: target.clone(),
            sorts: BTreeMap::new(),
            functions: BTreeMap::new(),
            relations: BTreeMap::new(),
        };
        m.fill_defaults();
        m.validate()?;
        Ok(m)
    }

    /// Maps every still unassigned sort or symbol to the same-named one of the
    /// target, when the target has it.
    pub fn fill_defaults(&mut self) {
        let (src, tgt) = (self.source.signature.clone(), self.target.signature.clone());
        for s in src.sorts() {
            if !self.sorts.contains_key(s) && tgt.has_sort(s) {
                self.sorts.insert(s.to_owned(), s.to_owned());
            }
        }
        for f in src.functions() {
            if !self.functions.contains_key(&f.name) && tgt.function(&f.name).is_some() {
                let ctx = arg_context(&self.sorts, &f.args);
                let t = Term::App(f.name.clone(), ctx.terms());
                self.functions.insert(f.name.clone(), (ctx, t));
            }
        }
        for r in src.relations() {
            if !self.relations.contains_key(&r.name) && tgt.relation(&r.name).is_some() {
                let ctx = arg_context(&self.sorts, &r.args);
                let phi = Formula::Rel(r.name.clone(), ctx.terms());
                self.relations.insert(r.name.clone(), (ctx, phi));
            }
        }
    }

    pub fn sort(&self, s: &str) -> Result<&str, MorphismError> {
        self.sorts
            .get(s)
            .map(String::as_str)
            .ok_or_else(|| MorphismError::UnmappedSort(s.to_owned()))
    }

    /// Checks that every source sort and symbol is mapped, and that each
    /// image is well-typed against the translated arity.
    pub fn validate(&self) -> Result<(), MorphismError> {
        let src = &self.source.signature;
        let tgt = &self.target.signature;
        for k in self.sorts.keys() {
            if !src.has_sort(k) {
                return Err(MorphismError::UnknownSource(k.clone()));
            }
        }
        for k in self.functions.keys().chain(self.relations.keys()) {
            if !src.has_symbol(k) {
                return Err(MorphismError::UnknownSource(k.clone()));
            }
        }
        for s in src.sorts() {
            let image = self.sort(s)?;
            if !tgt.has_sort(image) {
                return Err(MorphismError::IllTyped {
                    symbol: s.to_owned(),
                    reason: format!("`{image}` is not a target sort"),
                });
            }
        }
        let check_ctx = |name: &str, ctx: &Context, args: &[String]| -> Result<(), MorphismError> {
            let expected: Vec<&str> = args.iter().map(|a| self.sort(a)).collect::<Result<_, _>>()?;
            if !ctx.sorts().eq(expected.iter().copied()) {
                return Err(MorphismError::IllTyped {
                    symbol: name.to_owned(),
                    reason: format!("context {ctx} does not match the translated arity ({})", expected.join(", ")),
                });
            }
            Ok(())
        };
        for f in src.functions() {
            let (ctx, t) = self
                .functions
                .get(&f.name)
                .ok_or_else(|| MorphismError::UnmappedSymbol(f.name.clone()))?;
            check_ctx(&f.name, ctx, &f.args)?;
            let want = self.sort(&f.result)?;
            match sort_of_term(tgt, ctx, t) {
                Ok(found) if found == want => {}
                Ok(found) => {
                    return Err(MorphismError::IllTyped {
                        symbol: f.name.clone(),
                        reason: format!("`{t}` has sort `{found}`, expected `{want}`"),
                    })
                }
                Err(d) => {
                    return Err(MorphismError::IllTyped {
                        symbol: f.name.clone(),
                        reason: d.message,
                    })
                }
            }
        }
        for r in src.relations() {
            let (ctx, phi) = self
                .relations
                .get(&r.name)
                .ok_or_else(|| MorphismError::UnmappedSymbol(r.name.clone()))?;
            check_ctx(&r.name, ctx, &r.args)?;
            if let Some(d) = formula_diagnostics(tgt, ctx, phi).into_iter().next() {
                return Err(MorphismError::IllTyped {
                    symbol: r.name.clone(),
                    reason: d.message,
                });
            }
        }
        Ok(())
    }

    pub fn translate_context(&self, ctx: &Context) -> Result<Context, MorphismError> {
        let mut out = Context::new();
        for (v, s) in &ctx.vars {
            out.push(v.clone(), self.sort(s)?);
        }
        Ok(out)
    }

    /// Translates a term. Arguments that the image of a symbol discards are
    /// pushed onto `lost`, since their definedness still has to be asserted.
    fn term(&self, t: &Term, lost: &mut Vec<Term>) -> Result<Term, MorphismError> {
        match t {
            Term::Var(_) => Ok(t.clone()),
            Term::App(f, args) => {
                let (ctx, image) = self
                    .functions
                    .get(f)
                    .ok_or_else(|| MorphismError::UnmappedSymbol(f.clone()))?;
                let args = args.iter().map(|a| self.term(a, lost)).collect::<Result<Vec<_>, _>>()?;
                let mut map = HashMap::new();
                for ((v, _), a) in ctx.vars.iter().zip(&args) {
                    if !image.mentions_var(v) {
                        lost.push(a.clone());
                    }
                    map.insert(v.clone(), a.clone());
                }
                Ok(rename_term(image, &map))
            }
        }
    }

    /// The translation of a term alone, ignoring definedness of discarded
    /// arguments.
    pub fn translate_term(&self, t: &Term) -> Result<Term, MorphismError> {
        self.term(t, &mut Vec::new())
    }

    /// Translates a formula symbol by symbol. When an image drops an argument
    /// position, the definedness of that argument is conjoined after the
    /// translated atom, so the translation keeps Kleene-strict meaning.
    pub fn translate_formula(&self, phi: &Formula) -> Result<Formula, MorphismError> {
        Ok(match phi {
            Formula::Truth => Formula::Truth,
            Formula::Conj(parts) => Formula::Conj(parts.iter().map(|p| self.translate_formula(p)).collect::<Result<_, _>>()?),
            Formula::Eq(l, r) => {
                let mut lost = Vec::new();
                let l = self.term(l, &mut lost)?;
                let r = self.term(r, &mut lost)?;
                with_definedness(Formula::Eq(l, r), lost)
            }
            Formula::Rel(name, args) => {
                let (ctx, image) = self
                    .relations
                    .get(name)
                    .ok_or_else(|| MorphismError::UnmappedSymbol(name.clone()))?;
                let mut lost = Vec::new();
                let args = args.iter().map(|a| self.term(a, &mut lost)).collect::<Result<Vec<_>, _>>()?;
                let mut map = HashMap::new();
                let mut dropped = Vec::new();
                for ((v, _), a) in ctx.vars.iter().zip(&args) {
                    if !image.mentions_var(v) {
                        dropped.push(a.clone());
                    }
                    map.insert(v.clone(), a.clone());
                }
                dropped.extend(lost);
                with_definedness(rename_formula(image, &map), dropped)
            }
        })
    }

    pub fn translate_sequent(&self, s: &Sequent) -> Result<Sequent, MorphismError> {
        Ok(Sequent::new(
            self.translate_context(&s.context)?,
            self.translate_formula(&s.premise)?,
            self.translate_formula(&s.conclusion)?,
        ))
    }

    /// Runs the prover on the translation of every source axiom.
    pub fn check(&self, budget: Budget) -> Result<MorphismReport, BudgetError> {
        let mut obligations = Vec::new();
        for a in &self.source.axioms {
            let translated = self
                .translate_sequent(&a.sequent)
                .map_err(|e| BudgetError::IllFormed(e.to_string()))?;
            let verdict = prove(&self.target, &translated, budget)?;
            obligations.push(Obligation {
                axiom: a.name.clone(),
                translated,
                verdict,
            });
        }
        Ok(MorphismReport { obligations })
    }

    /// The reduct of a target structure: each source sort gets the carrier of
    /// its image, each symbol the interpretation of its image.
    pub fn reduct(&self, m: &PartialStructure) -> Result<PartialStructure, MorphismError> {
        let src = self.source.signature.clone();
        let tgt = m.signature();
        let mut out = PartialStructure::empty(m.name.clone(), src.clone());
        let sort_map = self.sort_indices(tgt)?;
        for (s, &t) in sort_map.iter().enumerate() {
            for name in m.carrier(t) {
                out.add_element(s, name.clone()).expect("distinct names");
            }
        }
        for (fi, f) in src.functions().enumerate() {
            let (ctx, image) = &self.functions[&f.name];
            let dims: Vec<usize> = ctx.sorts().map(|s| m.carrier_size(tgt.sort_index(s).expect("checked"))).collect();
            let mut err = None;
            for_each_tuple(&dims, |tuple| {
                match interp_term(m, ctx, image, tuple) {
                    Ok(Some(v)) => out.set_function(fi, tuple.to_vec(), v).expect("in range"),
                    Ok(None) => {}
                    Err(e) => {
                        err = Some(e);
                        return false;
                    }
                }
                true
            });
            if let Some(e) = err {
                return Err(MorphismError::IllTyped {
                    symbol: f.name.clone(),
                    reason: e.to_string(),
                });
            }
        }
        for (ri, r) in src.relations().enumerate() {
            let (ctx, image) = &self.relations[&r.name];
            let tuples = interp_formula(m, ctx, image).map_err(|e| MorphismError::IllTyped {
                symbol: r.name.clone(),
                reason: e.to_string(),
            })?;
            for t in tuples {
                out.add_relation(ri, t).expect("in range");
            }
        }
        Ok(out)
    }

    /// The reduct of a homomorphism between target structures.
    pub fn reduct_hom(&self, h: &Homomorphism) -> Result<Homomorphism, MorphismError> {
        let sort_map = self.sort_indices(&self.target.signature)?;
        Ok(Homomorphism {
            maps: sort_map.iter().map(|&t| h.maps[t].clone()).collect(),
        })
    }

    fn sort_indices(&self, tgt: &Signature) -> Result<Vec<usize>, MorphismError> {
        self.source
            .signature
            .sorts()
            .map(|s| {
                let image = self.sort(s)?;
                tgt.sort_index(image).ok_or_else(|| MorphismError::IllTyped {
                    symbol: s.to_owned(),
                    reason: format!("`{image}` is not a sort of the structure"),
                })
            })
            .collect()
    }
}

fn with_definedness(atom: Formula, lost: Vec<Term>) -> Formula {
    if lost.is_empty() {
        return atom;
    }
    let mut parts = vec![atom];
    for t in lost {
        let d = t.defined();
        if !parts.contains(&d) {
            parts.push(d);
        }
    }
    Formula::Conj(parts)
}

/// The translation functor on finite models: restriction along `rho`.
#[allow(non_snake_case)]
pub fn U_rho(rho: &TheoryMorphism, m: &PartialStructure) -> Result<PartialStructure, MorphismError> {
    rho.reduct(m)
}

/// Reads the `(name, source, target)` header of a morphism file without
/// resolving the theories.
pub fn morphism_header(text: &str) -> Result<(String, String, String), ParseError> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("morphism")?;
    let name = p.expect_ident()?;
    p.expect(&crate::syntax::lexer::Tok::Colon)?;
    let s = p.expect_ident()?;
    p.expect(&crate::syntax::lexer::Tok::Arrow)?;
    let t = p.expect_ident()?;
    Ok((name, s, t))
}

/// Parses a morphism file against its source and target theories. Sorts and
/// symbols without an explicit line go to the same-named target ones.
pub fn parse_morphism(text: &str, source: &Theory, target: &Theory) -> Result<TheoryMorphism, MorphismError> {
    use crate::syntax::lexer::Tok;
    let mut p = Parser::new(text)?;
    p.expect_keyword("morphism")?;
    let name = p.expect_ident()?;
    p.expect(&Tok::Colon)?;
    let s = p.expect_ident()?;
    p.expect(&Tok::Arrow)?;
    let t = p.expect_ident()?;
    if s != source.name || t != target.name {
        return Err(MorphismError::WrongEnds {
            expected: format!("{} -> {}", source.name, target.name),
            found: format!("{s} -> {t}"),
        });
    }
    let mut m = TheoryMorphism {
        name,
        source: source.clone(),
        target: target.clone(),
        sorts: BTreeMap::new(),
        functions: BTreeMap::new(),
        relations: BTreeMap::new(),
    };
    let sig = &target.signature;
    while !p.at_eof() {
        if p.eat_keyword("sort") {
            let a = p.expect_ident()?;
            p.expect(&Tok::FatArrow)?;
            let b = p.expect_ident()?;
            p.expect(&Tok::Semi)?;
            m.sorts.insert(a, b);
        } else if p.eat_keyword("fun") {
            let f = p.expect_ident()?;
            p.expect(&Tok::FatArrow)?;
            let ctx = p.parse_context()?;
            let term = p.parse_term(sig, &ctx)?;
            p.expect(&Tok::Semi)?;
            m.functions.insert(f, (ctx, term));
        } else if p.eat_keyword("rel") {
            let r = p.expect_ident()?;
            p.expect(&Tok::FatArrow)?;
            let ctx = p.parse_context()?;
            let phi = p.parse_formula(sig, &ctx)?;
            p.expect(&Tok::Semi)?;
            m.relations.insert(r, (ctx, phi));
        } else {
            return Err(p.error(format!("expected `sort`, `fun` or `rel`, found {}", p.peek().describe())).into());
        }
    }
    m.fill_defaults();
    m.validate()?;
    Ok(m)
}

/// Renders a morphism with every assignment spelled out.
pub fn print_morphism(m: &TheoryMorphism) -> String {
    let mut out = format!("morphism {} : {} -> {}\n", m.name, m.source.name, m.target.name);
    for (a, b) in &m.sorts {
        writeln!(out, "sort {a} => {b};").unwrap();
    }
    for (f, (ctx, t)) in &m.functions {
        writeln!(out, "fun {f} => {ctx} {t};").unwrap();
    }
    for (r, (ctx, phi)) in &m.relations {
        writeln!(out, "rel {r} => {ctx} {phi};").unwrap();
    }
    out
}
