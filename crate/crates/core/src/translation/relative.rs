use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use super::morphism::{MorphismError, TheoryMorphism};
use crate::prover::{prove, Budget, BudgetError, Verdict};
use crate::semantics::{is_model, PartialStructure};
use crate::syntax::lexer::Tok;
use crate::syntax::{
    formula_diagnostics, sequent_diagnostics, sort_of_term, Axiom, Context, Formula, FunctionSymbol, ParseError, Parser,
    Sequent, Term, Theory,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelativeError {
    #[error("operator `{0}` clashes with a symbol of the base")]
    Clash(String),
    #[error("operator `{op}`: {reason}")]
    BadOperator { op: String, reason: String },
    #[error("judgment `{name}`: {reason}")]
    BadJudgment { name: String, reason: String },
    #[error("relative theory is over `{found}`, expected `{expected}`")]
    WrongBase { expected: String, found: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An operator with its arity formula and result sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    pub name: String,
    pub context: Context,
    pub arity: Formula,
    pub sort: String,
}

impl Operator {
    /// The operator applied to its context variables.
    pub fn applied(&self) -> Term {
        Term::App(self.name.clone(), self.context.terms())
    }
}

/// Operators and judgments over a base theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeTheory {
    pub name: String,
    pub base: Theory,
    pub operators: Vec<Operator>,
    pub judgments: Vec<Axiom>,
}

impl RelativeTheory {
    pub fn new(name: impl Into<String>, base: Theory) -> Self {
        RelativeTheory {
            name: name.into(),
            base,
            operators: Vec::new(),
            judgments: Vec::new(),
        }
    }

    /// Checks the arity formulas and judgment premises against the base
    /// signature and the conclusions against the extended one.
    pub fn validate(&self) -> Result<(), RelativeError> {
        let base = &self.base.signature;
        let ext = pht_of_unchecked(self).signature;
        for op in &self.operators {
            if base.has_symbol(&op.name) {
                return Err(RelativeError::Clash(op.name.clone()));
            }
            if !base.has_sort(&op.sort) {
                return Err(RelativeError::BadOperator {
                    op: op.name.clone(),
                    reason: format!("unknown sort `{}`", op.sort),
                });
            }
            if let Some(d) = formula_diagnostics(base, &op.context, &op.arity).into_iter().next() {
                return Err(RelativeError::BadOperator {
                    op: op.name.clone(),
                    reason: d.message,
                });
            }
        }
        for j in &self.judgments {
            if let Some(d) = formula_diagnostics(base, &j.sequent.context, &j.sequent.premise).into_iter().next() {
                return Err(RelativeError::BadJudgment {
                    name: j.name.clone(),
                    reason: format!("premise must be over the base: {}", d.message),
                });
            }
            if let Some(d) = sequent_diagnostics(&ext, &j.sequent).into_iter().next() {
                return Err(RelativeError::BadJudgment {
                    name: j.name.clone(),
                    reason: d.message,
                });
            }
        }
        Ok(())
    }

    pub fn operator(&self, name: &str) -> Option<&Operator> {
        self.operators.iter().find(|o| o.name == name)
    }
}

fn pht_of_unchecked(r: &RelativeTheory) -> Theory {
    let mut sig = (*r.base.signature).clone();
    for op in &r.operators {
        sig.add_function(FunctionSymbol {
            name: op.name.clone(),
            args: op.context.sorts().map(str::to_owned).collect(),
            result: op.sort.clone(),
        });
    }
    let mut t = Theory::new(r.name.clone(), sig);
    t.axioms = r.base.axioms.clone();
    for op in &r.operators {
        let d = op.applied().defined();
        t.push_axiom(
            format!("{}_dom_fwd", op.name),
            Sequent::new(op.context.clone(), d.clone(), op.arity.clone()),
        );
        t.push_axiom(
            format!("{}_dom_bwd", op.name),
            Sequent::new(op.context.clone(), op.arity.clone(), d),
        );
    }
    t.axioms.extend(r.judgments.iter().cloned());
    t
}

/// The partial Horn theory of the algebras: the base axioms, both
/// directions of `def(op(x)) -||- arity` for each operator, then the judgments.
pub fn pht_of(r: &RelativeTheory) -> Result<Theory, RelativeError> {
    r.validate()?;
    Ok(pht_of_unchecked(r))
}

/// Whether a structure over the extended signature is an algebra: a model
/// of the base whose operator domains are exactly the arities, satisfying
/// the judgments.
pub fn is_algebra(m: &PartialStructure, r: &RelativeTheory) -> Result<bool, RelativeError> {
    let t = pht_of(r)?;
    Ok(**m.signature() == *t.signature && is_model(m, &t))
}

/// Reads the base name of a `relative NAME over BASE` block.
pub fn relative_header(text: &str) -> Result<(String, String), ParseError> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("relative")?;
    let name = p.expect_ident()?;
    p.expect_keyword("over")?;
    let base = p.expect_ident()?;
    Ok((name, base))
}

/// Parses a relative theory over a resolved base.
pub fn parse_relative(text: &str, base: &Theory) -> Result<RelativeTheory, RelativeError> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("relative")?;
    let name = p.expect_ident()?;
    p.expect_keyword("over")?;
    let base_name = p.expect_ident()?;
    if base_name != base.name {
        return Err(RelativeError::WrongBase {
            expected: base.name.clone(),
            found: base_name,
        });
    }
    let mut r = RelativeTheory::new(name, base.clone());
    while !p.at_eof() {
        if p.eat_keyword("op") {
            let op = p.expect_ident()?;
            p.expect(&Tok::Colon)?;
            let context = p.parse_context()?;
            let arity = p.parse_formula(&base.signature, &context)?;
            p.expect(&Tok::Arrow)?;
            let sort = p.expect_ident()?;
            p.expect(&Tok::Semi)?;
            r.operators.push(Operator {
                name: op,
                context,
                arity,
                sort,
            });
        } else if p.eat_keyword("judgment") {
            let jn = p.expect_ident()?;
            let ext = pht_of_unchecked(&r).signature;
            let sequent = p.parse_sequent(&ext)?;
            p.expect(&Tok::Semi)?;
            r.judgments.push(Axiom { name: jn, sequent });
        } else {
            return Err(p.error(format!("expected `op` or `judgment`, found {}", p.peek().describe())).into());
        }
    }
    r.validate()?;
    Ok(r)
}

/// Renders a relative theory in the format read by [`parse_relative`].
pub fn print_relative(r: &RelativeTheory) -> String {
    let mut out = format!("relative {} over {}\n", r.name, r.base.name);
    for op in &r.operators {
        writeln!(out, "op {} : {} {} -> {};", op.name, op.context, op.arity, op.sort).unwrap();
    }
    for j in &r.judgments {
        writeln!(out, "judgment {} {};", j.name, j.sequent).unwrap();
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelativeMorphismError {
    #[error("the two relative theories have different bases")]
    DifferentBases,
    #[error("operator `{0}` has no image")]
    Unmapped(String),
    #[error("image of `{op}` is ill-typed: {reason}")]
    IllTyped { op: String, reason: String },
    #[error(transparent)]
    Relative(#[from] RelativeError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
}

/// A morphism of relative theories over a common base: every operator of
/// the source becomes a term over the base and the target operators, in the
/// operator's own context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeMorphism {
    pub name: String,
    pub source: RelativeTheory,
    pub target: RelativeTheory,
    pub images: BTreeMap<String, Term>,
}

impl RelativeMorphism {
    pub fn new(
        name: impl Into<String>,
        source: &RelativeTheory,
        target: &RelativeTheory,
        images: BTreeMap<String, Term>,
    ) -> Result<Self, RelativeMorphismError> {
        if source.base != target.base {
            return Err(RelativeMorphismError::DifferentBases);
        }
        let ext = pht_of(target)?.signature;
        for op in &source.operators {
            let t = images
                .get(&op.name)
                .ok_or_else(|| RelativeMorphismError::Unmapped(op.name.clone()))?;
            match sort_of_term(&ext, &op.context, t) {
                Ok(s) if s == op.sort => {}
                Ok(s) => {
                    return Err(RelativeMorphismError::IllTyped {
                        op: op.name.clone(),
                        reason: format!("`{t}` has sort `{s}`, expected `{}`", op.sort),
                    })
                }
                Err(d) => {
                    return Err(RelativeMorphismError::IllTyped {
                        op: op.name.clone(),
                        reason: d.message,
                    })
                }
            }
        }
        Ok(RelativeMorphism {
            name: name.into(),
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// The identity on a relative theory.
    pub fn identity(r: &RelativeTheory) -> Self {
        let images = r.operators.iter().map(|o| (o.name.clone(), o.applied())).collect();
        RelativeMorphism::new(format!("id_{}", r.name), r, r, images).expect("identity is well-typed")
    }

    /// The induced theory morphism between the associated partial Horn
    /// theories, identical on the base.
    pub fn theory_morphism(&self) -> Result<TheoryMorphism, RelativeMorphismError> {
        let src = pht_of(&self.source)?;
        let tgt = pht_of(&self.target)?;
        let mut m = TheoryMorphism {
            name: self.name.clone(),
            source: src,
            target: tgt,
            sorts: BTreeMap::new(),
            functions: BTreeMap::new(),
            relations: BTreeMap::new(),
        };
        for op in &self.source.operators {
            m.functions
                .insert(op.name.clone(), (op.context.clone(), self.images[&op.name].clone()));
        }
        m.fill_defaults();
        m.validate()?;
        Ok(m)
    }

    /// `self` followed by `next`. Each image of `self` has its target
    /// operators replaced by their images under `next`, innermost first,
    /// scanning arguments from left to right.
    pub fn then(&self, next: &RelativeMorphism) -> Result<RelativeMorphism, RelativeMorphismError> {
        let mut images = BTreeMap::new();
        for op in &self.source.operators {
            images.insert(op.name.clone(), expand(&self.images[&op.name], next));
        }
        RelativeMorphism::new(
            format!("{}_{}", self.name, next.name),
            &self.source,
            &next.target,
            images,
        )
    }

    /// Checks that every translated judgment and operator domain holds in
    /// the target.
    pub fn check(&self, budget: Budget) -> Result<super::morphism::MorphismReport, RelativeMorphismError> {
        Ok(self.theory_morphism()?.check(budget)?)
    }
}

fn expand(t: &Term, next: &RelativeMorphism) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => {
            let args: Vec<Term> = args.iter().map(|a| expand(a, next)).collect();
            match next.source.operator(f) {
                Some(op) => {
                    let map: HashMap<String, Term> =
                        op.context.names().map(str::to_owned).zip(args).collect();
                    crate::syntax::rename_term(&next.images[f], &map)
                }
                None => Term::App(f.clone(), args),
            }
        }
    }
}

/// Outcome of comparing two relative morphisms.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    /// Per operator, the prover's verdict on `arity |- rho(op) = sigma(op)`.
    pub operators: Vec<(String, Verdict)>,
}

impl EquivalenceReport {
    pub fn equivalent(&self) -> bool {
        self.operators.iter().all(|(_, v)| v.is_proved())
    }

    pub fn inequivalent(&self) -> bool {
        self.operators.iter().any(|(_, v)| v.is_refuted())
    }
}

/// Decides, per operator, whether the target proves that the two images
/// agree on the arity.
pub fn morphism_equivalent(
    rho: &RelativeMorphism,
    sigma: &RelativeMorphism,
    budget: Budget,
) -> Result<EquivalenceReport, RelativeMorphismError> {
    if rho.source != sigma.source || rho.target != sigma.target {
        return Err(RelativeMorphismError::DifferentBases);
    }
    let tgt = pht_of(&rho.target)?;
    let mut operators = Vec::new();
    for op in &rho.source.operators {
        let s = Sequent::new(
            op.context.clone(),
            op.arity.clone(),
            Formula::Eq(rho.images[&op.name].clone(), sigma.images[&op.name].clone()),
        );
        operators.push((op.name.clone(), prove(&tgt, &s, budget)?));
    }
    Ok(EquivalenceReport { operators })
}
