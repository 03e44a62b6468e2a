//! Finite limit sketches with product and pullback cones, their partial
//! Horn theories, and a direct enumeration of their set-valued models.
//!
//! Sketch files are line oriented:
//!
//! ```text
//! sketch square
//! objects: A B C P
//! arrows:
//!   r0 : A -> C
//!   r1 : B -> C
//!   q0 : P -> A
//!   q1 : P -> B
//!   d  : P -> C
//! compose:
//!   r0 . q0 = d
//!   r1 . q1 = d
//! pullback-cone:
//!   glue : q0 q1 over r0 r1
//! ```
//!
//! Every object gets an identity arrow `id_X` unless one is declared with
//! that name, and composites with identities are filled in. All other
//! composable pairs need a `compose` line. A `product-cone` line reads
//! `NAME : p1 ... pn` with projections out of a common apex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::finder::size_vectors;
use crate::semantics::{dedup_isomorphic, for_each_tuple, PartialStructure};
use crate::syntax::{is_plain_ident, Context, Formula, FunctionSymbol, Sequent, Signature, Term, Theory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SketchError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("ill-formed sketch: {0}")]
    IllFormed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cone {
    /// The apex is the product of the targets of the projections.
    Product { name: String, projections: Vec<String> },
    /// The apex with `legs` is the pullback of the cospan `base`.
    Pullback {
        name: String,
        legs: [String; 2],
        base: [String; 2],
    },
}

impl Cone {
    pub fn name(&self) -> &str {
        match self {
            Cone::Product { name, .. } | Cone::Pullback { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sketch {
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// `(g, f) -> h` records `g . f = h`.
    pub compose: BTreeMap<(String, String), String>,
    pub cones: Vec<Cone>,
}

fn ill(msg: impl Into<String>) -> SketchError {
    SketchError::IllFormed(msg.into())
}

impl Sketch {
    pub fn new(name: impl Into<String>) -> Self {
        Sketch {
            name: name.into(),
            ..Sketch::default()
        }
    }

    pub fn identity_name(object: &str) -> String {
        format!("id_{object}")
    }

    pub fn arrow(&self, name: &str) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.name == name)
    }

    pub fn add_arrow(&mut self, name: &str, source: &str, target: &str) {
        self.arrows.push(Arrow {
            name: name.into(),
            source: source.into(),
            target: target.into(),
        });
    }

    pub fn set_composite(&mut self, g: &str, f: &str, h: &str) {
        self.compose.insert((g.into(), f.into()), h.into());
    }

    fn is_identity(&self, a: &Arrow) -> bool {
        a.source == a.target && a.name == Self::identity_name(&a.source)
    }

    /// Adds missing identity arrows and the composites involving them.
    pub fn complete_identities(&mut self) {
        for o in self.objects.clone() {
            let id = Self::identity_name(&o);
            if self.arrow(&id).is_none() {
                self.add_arrow(&id, &o, &o);
            }
        }
        for a in self.arrows.clone() {
            let (src_id, tgt_id) = (Self::identity_name(&a.source), Self::identity_name(&a.target));
            self.compose.entry((a.name.clone(), src_id)).or_insert_with(|| a.name.clone());
            self.compose.entry((tgt_id, a.name.clone())).or_insert_with(|| a.name.clone());
        }
    }

    /// Checks typing, completeness of the composition table, the identity
    /// and associativity laws, and the shape of every cone.
    pub fn validate(&self) -> Result<(), SketchError> {
        let mut seen = BTreeSet::new();
        for o in &self.objects {
            if !seen.insert(o) {
                return Err(ill(format!("object `{o}` declared twice")));
            }
        }
        let mut names = BTreeSet::new();
        for a in &self.arrows {
            if !names.insert(&a.name) {
                return Err(ill(format!("arrow `{}` declared twice", a.name)));
            }
            for end in [&a.source, &a.target] {
                if !seen.contains(end) {
                    return Err(ill(format!("arrow `{}` mentions unknown object `{end}`", a.name)));
                }
            }
        }
        for o in &self.objects {
            let id = Self::identity_name(o);
            match self.arrow(&id) {
                Some(a) if a.source == *o && a.target == *o => {}
                _ => return Err(ill(format!("object `{o}` has no identity arrow `{id}`"))),
            }
        }
        let get = |n: &str| self.arrow(n).ok_or_else(|| ill(format!("unknown arrow `{n}`")));
        for ((g, f), h) in &self.compose {
            let (g, f, h) = (get(g)?, get(f)?, get(h)?);
            if g.source != f.target {
                return Err(ill(format!("`{}` and `{}` are not composable", g.name, f.name)));
            }
            if h.source != f.source || h.target != g.target {
                return Err(ill(format!("`{} . {} = {}` is ill-typed", g.name, f.name, h.name)));
            }
        }
        for g in &self.arrows {
            for f in &self.arrows {
                if g.source == f.target && !self.compose.contains_key(&(g.name.clone(), f.name.clone())) {
                    return Err(ill(format!("no composite given for `{} . {}`", g.name, f.name)));
                }
            }
        }
        for a in &self.arrows {
            let l = &self.compose[&(a.name.clone(), Self::identity_name(&a.source))];
            let r = &self.compose[&(Self::identity_name(&a.target), a.name.clone())];
            if l != &a.name || r != &a.name {
                return Err(ill(format!("identity law fails at `{}`", a.name)));
            }
        }
        for ((h, g), hg) in &self.compose {
            for ((g2, f), gf) in &self.compose {
                if g2 != g {
                    continue;
                }
                let left = &self.compose[&(hg.clone(), f.clone())];
                let right = &self.compose[&(h.clone(), gf.clone())];
                if left != right {
                    return Err(ill(format!("composition is not associative at `{h} . {g} . {f}`")));
                }
            }
        }
        let mut cone_names = BTreeSet::new();
        for c in &self.cones {
            if !cone_names.insert(c.name()) || names.contains(&c.name().to_owned()) {
                return Err(ill(format!("cone name `{}` is already used", c.name())));
            }
            match c {
                Cone::Product { name, projections } => {
                    if projections.is_empty() {
                        return Err(ill(format!("product cone `{name}` has no projections")));
                    }
                    let apex = &get(&projections[0])?.source;
                    for p in projections {
                        if &get(p)?.source != apex {
                            return Err(ill(format!("projections of `{name}` do not share a source")));
                        }
                    }
                }
                Cone::Pullback { name, legs, base } => {
                    let (q0, q1, r0, r1) = (get(&legs[0])?, get(&legs[1])?, get(&base[0])?, get(&base[1])?);
                    if q0.source != q1.source
                        || q0.target != r0.source
                        || q1.target != r1.source
                        || r0.target != r1.target
                    {
                        return Err(ill(format!("pullback cone `{name}` is ill-typed")));
                    }
                    if self.compose[&(r0.name.clone(), q0.name.clone())] != self.compose[&(r1.name.clone(), q1.name.clone())] {
                        return Err(ill(format!("pullback cone `{name}` does not commute")));
                    }
                }
            }
        }
        Ok(())
    }

    fn apex(&self, c: &Cone) -> &str {
        let first = match c {
            Cone::Product { projections, .. } => &projections[0],
            Cone::Pullback { legs, .. } => &legs[0],
        };
        &self.arrow(first).expect("validated").source
    }
}

fn var(i: usize) -> Term {
    Term::var(format!("x{i}"))
}

fn app(f: &str, args: Vec<Term>) -> Term {
    Term::app(f, args)
}

fn all(parts: Vec<Formula>) -> Formula {
    if parts.len() == 1 {
        parts.into_iter().next().expect("one part")
    } else {
        Formula::conj(parts)
    }
}

/// The partial Horn theory whose models are the models of the sketch.
///
/// Sorts are the objects and function symbols are the arrows, plus one
/// symbol per cone that pairs up a compatible family into the apex. The
/// axioms say, in order: arrows are total; composites agree with the table;
/// identity arrows act as identities; each product apex is in bijection with
/// tuples of its projections; each pullback apex is in bijection with the
/// pairs that agree over the base, and its pairing is defined on those
/// pairs only.
pub fn sketch_to_pht(sketch: &Sketch) -> Result<Theory, SketchError> {
    sketch.validate()?;
    let mut sig = Signature::new();
    for o in &sketch.objects {
        sig.add_sort(o.clone());
    }
    for a in &sketch.arrows {
        sig.add_function(FunctionSymbol {
            name: a.name.clone(),
            args: vec![a.source.clone()],
            result: a.target.clone(),
        });
    }
    for c in &sketch.cones {
        let args = match c {
            Cone::Product { projections, .. } => projections.iter().map(|p| sketch.arrow(p).unwrap().target.clone()).collect(),
            Cone::Pullback { legs, .. } => legs.iter().map(|p| sketch.arrow(p).unwrap().target.clone()).collect(),
        };
        if !sig.add_function(FunctionSymbol {
            name: c.name().to_owned(),
            args,
            result: sketch.apex(c).to_owned(),
        }) {
            return Err(ill(format!("cone name `{}` clashes with an arrow", c.name())));
        }
    }
    let mut t = Theory::new(sketch.name.clone(), sig);
    let one = |s: &str| Context::from_pairs([("x0", s)]);
    for a in &sketch.arrows {
        t.push_axiom(
            format!("{}_total", a.name),
            Sequent::new(one(&a.source), Formula::Truth, app(&a.name, vec![var(0)]).defined()),
        );
    }
    for ((g, f), h) in &sketch.compose {
        let src = &sketch.arrow(f).unwrap().source;
        t.push_axiom(
            format!("comp_{g}_{f}"),
            Sequent::new(
                one(src),
                Formula::Truth,
                Formula::eq(app(g, vec![app(f, vec![var(0)])]), app(h, vec![var(0)])),
            ),
        );
    }
    for o in &sketch.objects {
        t.push_axiom(
            format!("unit_{o}"),
            Sequent::new(
                one(o),
                Formula::Truth,
                Formula::eq(var(0), app(&Sketch::identity_name(o), vec![var(0)])),
            ),
        );
    }
    for c in &sketch.cones {
        let apex = sketch.apex(c);
        let (legs, premise): (Vec<String>, Formula) = match c {
            Cone::Product { projections, .. } => (projections.clone(), Formula::Truth),
            Cone::Pullback { legs, base, .. } => (
                legs.to_vec(),
                Formula::eq(app(&base[0], vec![var(0)]), app(&base[1], vec![var(1)])),
            ),
        };
        let name = c.name();
        let eta = app(name, legs.iter().map(|p| app(p, vec![var(0)])).collect());
        t.push_axiom(
            format!("{name}_eta"),
            Sequent::new(one(apex), Formula::Truth, Formula::eq(eta, var(0))),
        );
        let ctx = Context::from_pairs(
            legs.iter()
                .enumerate()
                .map(|(i, p)| (format!("x{i}"), sketch.arrow(p).unwrap().target.clone())),
        );
        let glued = app(name, ctx.terms());
        let beta = legs
            .iter()
            .enumerate()
            .map(|(i, p)| Formula::eq(app(p, vec![glued.clone()]), var(i)))
            .collect();
        if let Cone::Pullback { .. } = c {
            t.push_axiom(
                format!("{name}_dom"),
                Sequent::new(ctx.clone(), glued.clone().defined(), premise.clone()),
            );
        }
        t.push_axiom(format!("{name}_beta"), Sequent::new(ctx, premise, all(beta)));
    }
    Ok(t)
}

/// Reads the line-oriented sketch format; see the module documentation.
pub fn parse_sketch(text: &str) -> Result<Sketch, SketchError> {
    #[derive(PartialEq)]
    enum Block {
        None,
        Objects,
        Arrows,
        Compose,
        Product,
        Pullback,
    }
    let mut sketch: Option<Sketch> = None;
    let mut block = Block::None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| SketchError::Syntax { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some(sk) = sketch.as_mut() else {
            let name = content
                .strip_prefix("sketch")
                .map(str::trim)
                .filter(|n| !n.is_empty() && is_plain_ident(n))
                .ok_or_else(|| err("expected `sketch NAME`".into()))?;
            sketch = Some(Sketch::new(name));
            continue;
        };
        let (head, rest) = match content.split_once(':') {
            Some((h, r)) if ["objects", "arrows", "compose", "product-cone", "pullback-cone"].contains(&h.trim()) => {
                (Some(h.trim()), r.trim())
            }
            _ if ["objects", "arrows", "compose", "product-cone", "pullback-cone"].contains(&content) => (Some(content), ""),
            _ => (None, content),
        };
        if let Some(h) = head {
            block = match h {
                "objects" => Block::Objects,
                "arrows" => Block::Arrows,
                "compose" => Block::Compose,
                "product-cone" => Block::Product,
                _ => Block::Pullback,
            };
        }
        for entry in rest.split(';').map(str::trim).filter(|e| !e.is_empty()) {
            let spaced = entry
                .replace("->", " \u{1} ")
                .replace(':', " : ")
                .replace('=', " = ")
                .replace('.', " . ")
                .replace('\u{1}', "->");
            let words: Vec<&str> = spaced.split(|c: char| c.is_whitespace() || c == ',').filter(|w| !w.is_empty()).collect();
            let check = |w: &str| {
                if is_plain_ident(w) {
                    Ok(w.to_owned())
                } else {
                    Err(err(format!("`{w}` is not a valid name")))
                }
            };
            match block {
                Block::None => return Err(err(format!("`{entry}` outside of a block"))),
                Block::Objects => {
                    for w in words {
                        sk.objects.push(check(w)?);
                    }
                }
                Block::Arrows => match words.as_slice() {
                    [n, ":", s, "->", t] => sk.add_arrow(&check(n)?, &check(s)?, &check(t)?),
                    _ => return Err(err(format!("expected `NAME : SOURCE -> TARGET`, found `{entry}`"))),
                },
                Block::Compose => match words.as_slice() {
                    [g, ".", f, "=", h] => sk.set_composite(&check(g)?, &check(f)?, &check(h)?),
                    _ => return Err(err(format!("expected `G . F = H`, found `{entry}`"))),
                },
                Block::Product => match words.as_slice() {
                    [n, ":", ps @ ..] => sk.cones.push(Cone::Product {
                        name: check(n)?,
                        projections: ps.iter().map(|p| check(p)).collect::<Result<_, _>>()?,
                    }),
                    _ => return Err(err(format!("expected `NAME : P1 ... PN`, found `{entry}`"))),
                },
                Block::Pullback => match words.as_slice() {
                    [n, ":", q0, q1, "over", r0, r1] => sk.cones.push(Cone::Pullback {
                        name: check(n)?,
                        legs: [check(q0)?, check(q1)?],
                        base: [check(r0)?, check(r1)?],
                    }),
                    _ => return Err(err(format!("expected `NAME : Q0 Q1 over R0 R1`, found `{entry}`"))),
                },
            }
        }
    }
    let mut sk = sketch.unwrap_or_else(|| Sketch::new(""));
    sk.complete_identities();
    sk.validate()?;
    Ok(sk)
}

/// Renders a sketch, leaving out identities and their composites.
pub fn print_sketch(s: &Sketch) -> String {
    let mut out = format!("sketch {}\n", s.name);
    writeln!(out, "objects: {}", s.objects.join(" ")).unwrap();
    let plain: Vec<&Arrow> = s.arrows.iter().filter(|a| !s.is_identity(a)).collect();
    if !plain.is_empty() {
        out.push_str("arrows:\n");
        for a in &plain {
            writeln!(out, "  {} : {} -> {}", a.name, a.source, a.target).unwrap();
        }
    }
    let nontrivial: Vec<_> = s
        .compose
        .iter()
        .filter(|((g, f), _)| !s.is_identity(s.arrow(g).unwrap()) && !s.is_identity(s.arrow(f).unwrap()))
        .collect();
    if !nontrivial.is_empty() {
        out.push_str("compose:\n");
        for ((g, f), h) in nontrivial {
            writeln!(out, "  {g} . {f} = {h}").unwrap();
        }
    }
    for c in &s.cones {
        match c {
            Cone::Product { name, projections } => {
                writeln!(out, "product-cone: {name} : {}", projections.join(" ")).unwrap()
            }
            Cone::Pullback { name, legs, base } => writeln!(
                out,
                "pullback-cone: {name} : {} {} over {} {}",
                legs[0], legs[1], base[0], base[1]
            )
            .unwrap(),
        }
    }
    out
}

struct Enumerator<'a> {
    sketch: &'a Sketch,
    sizes: Vec<usize>,
    obj: BTreeMap<&'a str, usize>,
    tables: Vec<Option<Vec<usize>>>,
}

impl Enumerator<'_> {
    fn arrow_index(&self, name: &str) -> usize {
        self.sketch.arrows.iter().position(|a| a.name == name).expect("validated")
    }

    fn dims(&self, i: usize) -> (usize, usize) {
        let a = &self.sketch.arrows[i];
        (self.sizes[self.obj[a.source.as_str()]], self.sizes[self.obj[a.target.as_str()]])
    }

    /// A table forced by the composition law, if both factors are known.
    fn forced(&self, i: usize) -> Option<Vec<usize>> {
        let name = &self.sketch.arrows[i].name;
        for ((g, f), h) in &self.sketch.compose {
            if h != name || g == name || f == name {
                continue;
            }
            if let (Some(gt), Some(ft)) = (&self.tables[self.arrow_index(g)], &self.tables[self.arrow_index(f)]) {
                return Some(ft.iter().map(|&x| gt[x]).collect());
            }
        }
        None
    }

    fn consistent(&self) -> bool {
        self.sketch.compose.iter().all(|((g, f), h)| {
            let t = |n: &str| self.tables[self.arrow_index(n)].as_ref();
            match (t(g), t(f), t(h)) {
                (Some(gt), Some(ft), Some(ht)) => ft.iter().zip(ht).all(|(&x, &y)| gt[x] == y),
                _ => true,
            }
        })
    }

    fn run(&mut self, i: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == self.tables.len() {
            out.push(self.tables.iter().map(|t| t.clone().expect("assigned")).collect());
            return;
        }
        let (n, m) = self.dims(i);
        let candidates: Vec<Vec<usize>> = if self.sketch.is_identity(&self.sketch.arrows[i]) {
            vec![(0..n).collect()]
        } else if let Some(t) = self.forced(i) {
            vec![t]
        } else {
            let mut all = Vec::new();
            for_each_tuple(&vec![m; n], |t| {
                all.push(t.to_vec());
                true
            });
            all
        };
        for c in candidates {
            self.tables[i] = Some(c);
            if self.consistent() {
                self.run(i + 1, out);
            }
        }
        self.tables[i] = None;
    }
}

/// Set-valued models of the sketch with every object of size at most `max`,
/// one per isomorphism class, as structures over the signature of
/// [`sketch_to_pht`]. Arrows are enumerated as functions, checked against
/// the composition table, and each cone is checked to be a limit by
/// comparing its apex with the set of compatible families.
pub fn sketch_models(sketch: &Sketch, max: usize) -> Result<Vec<PartialStructure>, SketchError> {
    let theory = sketch_to_pht(sketch)?;
    let sig: Arc<Signature> = theory.signature.clone();
    let obj: BTreeMap<&str, usize> = sketch.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
    let mut out = Vec::new();
    for sizes in size_vectors(sketch.objects.len(), max) {
        let mut e = Enumerator {
            sketch,
            sizes: sizes.clone(),
            obj: obj.clone(),
            tables: vec![None; sketch.arrows.len()],
        };
        let mut found = Vec::new();
        e.run(0, &mut found);
        let mut batch = Vec::new();
        'model: for tables in found {
            let table = |n: &str| &tables[sketch.arrows.iter().position(|a| a.name == n).expect("validated")];
            let mut m = PartialStructure::empty(format!("{}_model", sketch.name), sig.clone());
            for (s, &n) in sizes.iter().enumerate() {
                m.add_elements(s, n, |i| i.to_string()).expect("fresh");
            }
            for (ai, a) in sketch.arrows.iter().enumerate() {
                let f = sig.function_index(&a.name).expect("declared");
                for (x, &y) in tables[ai].iter().enumerate() {
                    m.set_function(f, vec![x], y).expect("in range");
                }
            }
            for c in &sketch.cones {
                let apex = sizes[obj[sketch.apex(c)]];
                let (legs, families): (Vec<&Vec<usize>>, Vec<Vec<usize>>) = match c {
                    Cone::Product { projections, .. } => {
                        let dims: Vec<usize> = projections
                            .iter()
                            .map(|p| sizes[obj[sketch.arrow(p).unwrap().target.as_str()]])
                            .collect();
                        let mut fam = Vec::new();
                        for_each_tuple(&dims, |t| {
                            fam.push(t.to_vec());
                            true
                        });
                        (projections.iter().map(|p| table(p)).collect(), fam)
                    }
                    Cone::Pullback { legs, base, .. } => {
                        let (r0, r1) = (table(&base[0]), table(&base[1]));
                        let mut fam = Vec::new();
                        for (a, &ra) in r0.iter().enumerate() {
                            for (b, &rb) in r1.iter().enumerate() {
                                if ra == rb {
                                    fam.push(vec![a, b]);
                                }
                            }
                        }
                        (legs.iter().map(|p| table(p)).collect(), fam)
                    }
                };
                let mut inverse: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
                for x in 0..apex {
                    let image: Vec<usize> = legs.iter().map(|t| t[x]).collect();
                    if inverse.insert(image, x).is_some() {
                        continue 'model;
                    }
                }
                if inverse.len() != families.len() || !families.iter().all(|f| inverse.contains_key(f)) {
                    continue 'model;
                }
                let f = sig.function_index(c.name()).expect("declared");
                for (args, x) in inverse {
                    m.set_function(f, args, x).expect("in range");
                }
            }
            batch.push(m);
        }
        out.extend(dedup_isomorphic(batch));
    }
    Ok(out)
}
