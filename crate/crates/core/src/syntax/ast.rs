//! Abstract syntax of many-sorted partial Horn logic.

use std::collections::BTreeSet;
use std::sync::Arc;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

/// A function symbol `f : s1 ... sn -> s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FunctionSymbol {
    pub name: String,
    pub args: Vec<String>,
    pub result: String,
}

/// A relation symbol `R : s1 ... sn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationSymbol {
    pub name: String,
    pub args: Vec<String>,
}

/// A finite many-sorted signature.
///
/// Sorts, functions and relations keep their declaration order, which
/// gives every symbol a stable index used by the finite structures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: IndexSet<String>,
    functions: IndexMap<String, FunctionSymbol>,
    relations: IndexMap<String, RelationSymbol>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a sort. Returns `false` if it was already declared.
    pub fn add_sort(&mut self, name: impl Into<String>) -> bool {
        self.sorts.insert(name.into())
    }

    /// Adds a function symbol. Returns `false` if the name is taken by any symbol.
    pub fn add_function(&mut self, f: FunctionSymbol) -> bool {
        if self.has_symbol(&f.name) {
            return false;
        }
        self.functions.insert(f.name.clone(), f);
        true
    }

    /// Adds a relation symbol. Returns `false` if the name is taken by any symbol.
    pub fn add_relation(&mut self, r: RelationSymbol) -> bool {
        if self.has_symbol(&r.name) {
            return false;
        }
        self.relations.insert(r.name.clone(), r);
        true
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.functions.contains_key(name) || self.relations.contains_key(name)
    }

    pub fn sorts(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.sorts.iter().map(String::as_str)
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn sort_index(&self, name: &str) -> Option<usize> {
        self.sorts.get_index_of(name)
    }

    pub fn sort_name(&self, index: usize) -> &str {
        &self.sorts[index]
    }

    pub fn has_sort(&self, name: &str) -> bool {
        self.sorts.contains(name)
    }

    pub fn functions(&self) -> impl ExactSizeIterator<Item = &FunctionSymbol> + '_ {
        self.functions.values()
    }

    pub fn function(&self, name: &str) -> Option<&FunctionSymbol> {
        self.functions.get(name)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.get_index_of(name)
    }

    pub fn function_at(&self, index: usize) -> &FunctionSymbol {
        &self.functions[index]
    }

    pub fn function_count(&self) -> usize {
        self.functions.len()
    }

    pub fn relations(&self) -> impl ExactSizeIterator<Item = &RelationSymbol> + '_ {
        self.relations.values()
    }

    pub fn relation(&self, name: &str) -> Option<&RelationSymbol> {
        self.relations.get(name)
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.get_index_of(name)
    }

    pub fn relation_at(&self, index: usize) -> &RelationSymbol {
        &self.relations[index]
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    /// Whether `name` is a function symbol with no arguments.
    pub fn is_constant(&self, name: &str) -> bool {
        self.functions.get(name).is_some_and(|f| f.args.is_empty())
    }

    /// Union of two signatures. Fails on the first conflicting declaration.
    pub fn extend(&mut self, other: &Signature) -> Result<(), String> {
        for s in other.sorts() {
            self.add_sort(s);
        }
        for f in other.functions() {
            match self.functions.get(&f.name) {
                Some(existing) if existing == f => {}
                Some(_) => return Err(format!("conflicting declarations of function `{}`", f.name)),
                None if self.relations.contains_key(&f.name) => {
                    return Err(format!("`{}` is both a function and a relation", f.name))
                }
                None => {
                    self.functions.insert(f.name.clone(), f.clone());
                }
            }
        }
        for r in other.relations() {
            match self.relations.get(&r.name) {
                Some(existing) if existing == r => {}
                Some(_) => return Err(format!("conflicting declarations of relation `{}`", r.name)),
                None if self.functions.contains_key(&r.name) => {
                    return Err(format!("`{}` is both a function and a relation", r.name))
                }
                None => {
                    self.relations.insert(r.name.clone(), r.clone());
                }
            }
        }
        Ok(())
    }
}

/// An ordered list of distinct typed variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Context {
    pub vars: Vec<(String, String)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, A, B>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        Context {
            vars: pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, sort: impl Into<String>) {
        self.vars.push((name.into(), sort.into()));
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(v, _)| v == name)
    }

    pub fn sort_of(&self, name: &str) -> Option<&str> {
        self.vars.iter().find(|(v, _)| v == name).map(|(_, s)| s.as_str())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.vars.iter().map(|(v, _)| v.as_str())
    }

    pub fn sorts(&self) -> impl Iterator<Item = &str> + '_ {
        self.vars.iter().map(|(_, s)| s.as_str())
    }

    /// The variables as terms, in order.
    pub fn terms(&self) -> Vec<Term> {
        self.names().map(Term::var).collect()
    }
}

/// A raw term: a variable or a function symbol applied to terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn app(f: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(f.into(), args)
    }

    pub fn constant(f: impl Into<String>) -> Self {
        Term::App(f.into(), Vec::new())
    }

    /// Nesting depth: variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn mentions_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::App(_, args) => args.iter().any(|a| a.mentions_var(name)),
        }
    }

    /// Every subterm, children before parents.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            if let Term::App(_, args) = t {
                args.iter().for_each(|a| go(a, out));
            }
            out.push(t);
        }
        go(self, &mut out);
        out
    }

    /// Definedness assertion `t↓`, i.e. `t = t`.
    pub fn defined(self) -> Formula {
        Formula::Eq(self.clone(), self)
    }
}

/// A finitary Horn formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Truth,
    Conj(Vec<Formula>),
}

impl Formula {
    pub fn rel(r: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Rel(r.into(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Eq(lhs, rhs)
    }

    /// Conjunction, with the empty conjunction identified with truth.
    pub fn conj(parts: Vec<Formula>) -> Self {
        if parts.is_empty() {
            Formula::Truth
        } else {
            Formula::Conj(parts)
        }
    }

    /// Binary conjunction that flattens nothing: `a /\ b` as a two-element list.
    pub fn and(self, other: Formula) -> Self {
        Formula::Conj(vec![self, other])
    }

    pub fn is_truth(&self) -> bool {
        matches!(self, Formula::Truth) || matches!(self, Formula::Conj(v) if v.is_empty())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Rel(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Formula::Eq(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::Truth => {}
            Formula::Conj(parts) => parts.iter().for_each(|p| p.collect_vars(out)),
        }
    }

    pub fn mentions_var(&self, name: &str) -> bool {
        match self {
            Formula::Rel(_, args) => args.iter().any(|a| a.mentions_var(name)),
            Formula::Eq(l, r) => l.mentions_var(name) || r.mentions_var(name),
            Formula::Truth => false,
            Formula::Conj(parts) => parts.iter().any(|p| p.mentions_var(name)),
        }
    }

    /// The atomic formulas, left to right, with conjunction structure forgotten.
    pub fn atoms(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::Conj(parts) => parts.iter().for_each(|p| go(p, out)),
                Formula::Truth => {}
                atom => out.push(atom),
            }
        }
        go(self, &mut out);
        out
    }

    /// Every term occurring as an argument of an atom, including nested subterms.
    pub fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        for atom in self.atoms() {
            match atom {
                Formula::Rel(_, args) => args.iter().for_each(|a| out.extend(a.subterms())),
                Formula::Eq(l, r) => {
                    out.extend(l.subterms());
                    out.extend(r.subterms());
                }
                _ => {}
            }
        }
        out
    }
}

/// A Horn sequent `premise |-_context conclusion`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub context: Context,
    pub premise: Formula,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(context: Context, premise: Formula, conclusion: Formula) -> Self {
        Sequent {
            context,
            premise,
            conclusion,
        }
    }

    /// The same sequent with context variables renamed positionally to `_0, _1, ...`.
    pub fn alpha_normal(&self) -> Sequent {
        let mut map = std::collections::HashMap::new();
        let mut ctx = Context::new();
        for (i, (v, s)) in self.context.vars.iter().enumerate() {
            let fresh = format!("_{i}");
            map.insert(v.clone(), Term::Var(fresh.clone()));
            ctx.push(fresh, s.clone());
        }
        Sequent {
            context: ctx,
            premise: super::subst::rename_formula(&self.premise, &map),
            conclusion: super::subst::rename_formula(&self.conclusion, &map),
        }
    }

    /// Equality up to a positional renaming of context variables.
    pub fn alpha_eq(&self, other: &Sequent) -> bool {
        if self == other {
            return true;
        }
        self.context.len() == other.context.len()
            && self.context.sorts().eq(other.context.sorts())
            && self.alpha_normal() == other.alpha_normal()
    }
}

/// A named axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub sequent: Sequent,
}

/// A finitary partial Horn theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub signature: Arc<Signature>,
    pub axioms: Vec<Axiom>,
}

impl Theory {
    pub fn new(name: impl Into<String>, signature: Signature) -> Self {
        Theory {
            name: name.into(),
            signature: Arc::new(signature),
            axioms: Vec::new(),
        }
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn push_axiom(&mut self, name: impl Into<String>, sequent: Sequent) {
        self.axioms.push(Axiom {
            name: name.into(),
            sequent,
        });
    }

    /// The same signature with additional axioms appended.
    pub fn with_axioms(&self, name: impl Into<String>, extra: &[Axiom]) -> Theory {
        let mut t = self.clone();
        t.name = name.into();
        t.axioms.extend(extra.iter().cloned());
        t
    }
}
