//! Bounded forward saturation over an e-graph of term classes.
//!
//! A run starts from the generators of a context and a constraint formula,
//! then fires every axiom of a theory in rounds. Each round computes all
//! premise matches against the state left by the previous round, asserts
//! the instantiated conclusions (creating classes for new terms), and closes
//! the result under congruence.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::semantics::{compile_formula, CFormula, CTerm, PartialStructure};
use crate::syntax::{Context, Formula, Signature, Term, Theory};

/// Resource bounds for a saturation run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationBudget {
    /// Number of axiom rounds after the initial one.
    pub depth: usize,
    /// The run stops once this many classes exist.
    pub max_elements: usize,
    /// The run stops once a single round would fire more premise matches than this.
    pub max_matches: usize,
}

impl SaturationBudget {
    pub fn new(depth: usize) -> Self {
        SaturationBudget {
            depth,
            max_elements: 2_000,
            max_matches: 200_000,
        }
    }
}

/// Whether the run reached a fixed point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SaturationStatus {
    /// Round `d + 1` would change nothing; the structure is exact.
    Saturated(usize),
    /// Stopped after round `d` with work left to do.
    Truncated(usize),
}

impl SaturationStatus {
    pub fn is_saturated(self) -> bool {
        matches!(self, SaturationStatus::Saturated(_))
    }

    pub fn depth(self) -> usize {
        match self {
            SaturationStatus::Saturated(d) | SaturationStatus::Truncated(d) => d,
        }
    }
}

impl std::fmt::Display for SaturationStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SaturationStatus::Saturated(d) => write!(f, "Saturated({d})"),
            SaturationStatus::Truncated(d) => write!(f, "Truncated({d})"),
        }
    }
}

/// The exported result of a run.
#[derive(Clone, Debug)]
pub struct SaturationResult {
    pub structure: PartialStructure,
    /// Canonical representative term of every element, per sort.
    pub representatives: Vec<Vec<Term>>,
    /// Element index of each context variable.
    pub generic: Vec<usize>,
    pub status: SaturationStatus,
}

#[derive(Clone, Debug)]
struct EGraph {
    parent: Vec<usize>,
    sort: Vec<usize>,
    funcs: Vec<BTreeMap<Vec<usize>, usize>>,
    rels: Vec<BTreeSet<Vec<usize>>>,
    changed: bool,
}

impl EGraph {
    fn new(sig: &Signature) -> Self {
        EGraph {
            parent: Vec::new(),
            sort: Vec::new(),
            funcs: vec![BTreeMap::new(); sig.function_count()],
            rels: vec![BTreeSet::new(); sig.relation_count()],
            changed: false,
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn find_mut(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn new_class(&mut self, sort: usize) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.sort.push(sort);
        self.changed = true;
        id
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find_mut(a), self.find_mut(b));
        if a == b {
            return false;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop] = keep;
        self.changed = true;
        true
    }

    fn live(&self) -> usize {
        (0..self.parent.len()).filter(|&c| self.parent[c] == c).count()
    }

    fn classes_by_sort(&self, nsorts: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); nsorts];
        for c in 0..self.parent.len() {
            if self.parent[c] == c {
                out[self.sort[c]].push(c);
            }
        }
        out
    }

    /// The class of `f(args)`, created when missing.
    fn apply(&mut self, sig: &Signature, f: usize, args: Vec<usize>) -> usize {
        let args: Vec<usize> = args.into_iter().map(|a| self.find_mut(a)).collect();
        if let Some(&v) = self.funcs[f].get(&args) {
            return self.find_mut(v);
        }
        let rs = sig
            .sort_index(&sig.function_at(f).result)
            .expect("declared sort");
        let c = self.new_class(rs);
        self.funcs[f].insert(args, c);
        c
    }

    fn add_rel(&mut self, r: usize, args: Vec<usize>) {
        let args: Vec<usize> = args.into_iter().map(|a| self.find_mut(a)).collect();
        if self.rels[r].insert(args) {
            self.changed = true;
        }
    }

    /// Restores canonical keys and congruence after a batch of unions.
    fn rebuild(&mut self) {
        loop {
            let mut merged = false;
            for f in 0..self.funcs.len() {
                let old = std::mem::take(&mut self.funcs[f]);
                let mut fresh: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
                for (args, v) in old {
                    let key: Vec<usize> = args.iter().map(|&a| self.find_mut(a)).collect();
                    let v = self.find_mut(v);
                    match fresh.get(&key) {
                        Some(&w) if self.find_mut(w) != v => {
                            self.union(w, v);
                            merged = true;
                        }
                        Some(_) => {}
                        None => {
                            fresh.insert(key, v);
                        }
                    }
                }
                self.funcs[f] = fresh;
            }
            if !merged {
                break;
            }
        }
        for r in 0..self.rels.len() {
            let old = std::mem::take(&mut self.rels[r]);
            let fresh = old
                .into_iter()
                .map(|t| t.iter().map(|&a| self.find_mut(a)).collect())
                .collect();
            self.rels[r] = fresh;
        }
    }

    fn eval(&mut self, sig: &Signature, t: &CTerm, binding: &[usize]) -> usize {
        match t {
            CTerm::Var(i) => self.find_mut(binding[*i]),
            CTerm::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.eval(sig, a, binding)).collect();
                self.apply(sig, *f, vals)
            }
        }
    }

    fn assert(&mut self, sig: &Signature, phi: &CFormula, binding: &[usize]) {
        match phi {
            CFormula::Rel(r, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.eval(sig, a, binding)).collect();
                self.add_rel(*r, vals);
            }
            CFormula::Eq(l, r) => {
                let a = self.eval(sig, l, binding);
                let b = self.eval(sig, r, binding);
                self.union(a, b);
            }
            CFormula::Conj(parts) => parts.iter().for_each(|p| self.assert(sig, p, binding)),
        }
    }

    fn holds(&self, phi: &CFormula, binding: &[usize]) -> bool {
        match phi {
            CFormula::Rel(r, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    match self.lookup(a, binding) {
                        Some(v) => vals.push(v),
                        None => return false,
                    }
                }
                self.rels[*r].contains(&vals)
            }
            CFormula::Eq(l, r) => match (self.lookup(l, binding), self.lookup(r, binding)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
            CFormula::Conj(parts) => parts.iter().all(|p| self.holds(p, binding)),
        }
    }

    fn lookup(&self, t: &CTerm, binding: &[usize]) -> Option<usize> {
        match t {
            CTerm::Var(i) => Some(self.find(binding[*i])),
            CTerm::App(f, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.lookup(a, binding)?);
                }
                self.funcs[*f].get(&vals).map(|&v| self.find(v))
            }
        }
    }
}

/// A premise flattened into a conjunctive query over slots.
///
/// Slots `0..vars` are the context variables; the others name subterms.
#[derive(Clone, Debug)]
struct Query {
    vars: usize,
    slot_sorts: Vec<usize>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug)]
enum Constraint {
    Fun { f: usize, args: Vec<usize>, out: usize },
    Rel { r: usize, args: Vec<usize> },
    Eq(usize, usize),
}

struct QueryBuilder<'a> {
    sig: &'a Signature,
    slot_sorts: Vec<usize>,
    constraints: Vec<Constraint>,
    memo: HashMap<Term, usize>,
    ctx: &'a Context,
}

impl QueryBuilder<'_> {
    fn term(&mut self, t: &Term) -> usize {
        if let Some(&s) = self.memo.get(t) {
            return s;
        }
        let slot = match t {
            Term::Var(v) => self.ctx.position(v).expect("checked formula"),
            Term::App(f, args) => {
                let args: Vec<usize> = args.iter().map(|a| self.term(a)).collect();
                let fi = self.sig.function_index(f).expect("checked formula");
                let rs = self
                    .sig
                    .sort_index(&self.sig.function_at(fi).result)
                    .expect("declared sort");
                let out = self.slot_sorts.len();
                self.slot_sorts.push(rs);
                self.constraints.push(Constraint::Fun { f: fi, args, out });
                out
            }
        };
        self.memo.insert(t.clone(), slot);
        slot
    }

    fn formula(&mut self, phi: &Formula) {
        match phi {
            Formula::Rel(r, args) => {
                let args: Vec<usize> = args.iter().map(|a| self.term(a)).collect();
                let ri = self.sig.relation_index(r).expect("checked formula");
                self.constraints.push(Constraint::Rel { r: ri, args });
            }
            Formula::Eq(l, r) => {
                let a = self.term(l);
                let b = self.term(r);
                if a != b {
                    self.constraints.push(Constraint::Eq(a, b));
                }
            }
            Formula::Truth => {}
            Formula::Conj(parts) => parts.iter().for_each(|p| self.formula(p)),
        }
    }
}

impl Query {
    fn build(sig: &Signature, ctx: &Context, phi: &Formula) -> Query {
        let slot_sorts: Vec<usize> = ctx
            .sorts()
            .map(|s| sig.sort_index(s).expect("checked context"))
            .collect();
        let mut b = QueryBuilder {
            sig,
            slot_sorts,
            constraints: Vec::new(),
            memo: HashMap::new(),
            ctx,
        };
        b.formula(phi);
        Query {
            vars: ctx.len(),
            slot_sorts: b.slot_sorts,
            constraints: b.constraints,
        }
    }

    /// Calls `emit` on every binding of the context variables satisfying the query.
    /// Returns false when `emit` asked to stop.
    fn solve(&self, g: &EGraph, classes: &[Vec<usize>], emit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let mut bind: Vec<Option<usize>> = vec![None; self.slot_sorts.len()];
        let mut done = vec![false; self.constraints.len()];
        self.step(g, classes, &mut bind, &mut done, emit)
    }

    fn step(
        &self,
        g: &EGraph,
        classes: &[Vec<usize>],
        bind: &mut Vec<Option<usize>>,
        done: &mut Vec<bool>,
        emit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let Some(ci) = self.pick(g, bind, done) else {
            return self.free_vars(classes, bind, 0, emit);
        };
        done[ci] = true;
        let keep_going = match &self.constraints[ci] {
            Constraint::Fun { f, args, out } => {
                if args.iter().all(|&a| bind[a].is_some()) {
                    let key: Vec<usize> = args.iter().map(|&a| bind[a].unwrap()).collect();
                    match g.funcs[*f].get(&key) {
                        Some(&v) => self.with_binding(g, classes, bind, done, emit, &[(*out, v)]),
                        None => true,
                    }
                } else {
                    let mut go = true;
                    for (key, &v) in &g.funcs[*f] {
                        let mut pairs: Vec<(usize, usize)> = args.iter().copied().zip(key.iter().copied()).collect();
                        pairs.push((*out, v));
                        if !self.with_binding(g, classes, bind, done, emit, &pairs) {
                            go = false;
                            break;
                        }
                    }
                    go
                }
            }
            Constraint::Rel { r, args } => {
                if args.iter().all(|&a| bind[a].is_some()) {
                    let key: Vec<usize> = args.iter().map(|&a| bind[a].unwrap()).collect();
                    if g.rels[*r].contains(&key) {
                        self.step(g, classes, bind, done, emit)
                    } else {
                        true
                    }
                } else {
                    let mut go = true;
                    for t in &g.rels[*r] {
                        let pairs: Vec<(usize, usize)> = args.iter().copied().zip(t.iter().copied()).collect();
                        if !self.with_binding(g, classes, bind, done, emit, &pairs) {
                            go = false;
                            break;
                        }
                    }
                    go
                }
            }
            Constraint::Eq(a, b) => match (bind[*a], bind[*b]) {
                (Some(x), Some(y)) => {
                    if x == y {
                        self.step(g, classes, bind, done, emit)
                    } else {
                        true
                    }
                }
                (Some(x), None) => self.with_binding(g, classes, bind, done, emit, &[(*b, x)]),
                (None, Some(y)) => self.with_binding(g, classes, bind, done, emit, &[(*a, y)]),
                (None, None) => {
                    let mut go = true;
                    for &c in &classes[self.slot_sorts[*a]] {
                        if !self.with_binding(g, classes, bind, done, emit, &[(*a, c), (*b, c)]) {
                            go = false;
                            break;
                        }
                    }
                    go
                }
            },
        };
        done[ci] = false;
        keep_going
    }

    /// Binds the given slots (checking consistency), recurses, then undoes.
    fn with_binding(
        &self,
        g: &EGraph,
        classes: &[Vec<usize>],
        bind: &mut Vec<Option<usize>>,
        done: &mut Vec<bool>,
        emit: &mut dyn FnMut(&[usize]) -> bool,
        pairs: &[(usize, usize)],
    ) -> bool {
        let mut set = Vec::new();
        let mut ok = true;
        for &(slot, v) in pairs {
            match bind[slot] {
                Some(w) if w != v => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    bind[slot] = Some(v);
                    set.push(slot);
                }
            }
        }
        let r = if ok { self.step(g, classes, bind, done, emit) } else { true };
        for s in set {
            bind[s] = None;
        }
        r
    }

    /// Cheapest open constraint: determined ones first, then the smallest table.
    fn pick(&self, g: &EGraph, bind: &[Option<usize>], done: &[bool]) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (i, c) in self.constraints.iter().enumerate() {
            if done[i] {
                continue;
            }
            let cost = match c {
                Constraint::Fun { f, args, .. } => {
                    if args.iter().all(|&a| bind[a].is_some()) {
                        0
                    } else {
                        1 + g.funcs[*f].len()
                    }
                }
                Constraint::Rel { r, args } => {
                    if args.iter().all(|&a| bind[a].is_some()) {
                        0
                    } else {
                        1 + g.rels[*r].len()
                    }
                }
                Constraint::Eq(a, b) => {
                    if bind[*a].is_some() || bind[*b].is_some() {
                        0
                    } else {
                        usize::MAX / 2
                    }
                }
            };
            if best.is_none_or(|(_, c0)| cost < c0) {
                best = Some((i, cost));
                if cost == 0 {
                    break;
                }
            }
        }
        best.map(|(i, _)| i)
    }

    fn free_vars(
        &self,
        classes: &[Vec<usize>],
        bind: &mut Vec<Option<usize>>,
        from: usize,
        emit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let Some(v) = (from..self.vars).find(|&v| bind[v].is_none()) else {
            let tuple: Vec<usize> = bind[..self.vars].iter().map(|b| b.unwrap()).collect();
            return emit(&tuple);
        };
        for &c in &classes[self.slot_sorts[v]] {
            bind[v] = Some(c);
            let go = self.free_vars(classes, bind, v + 1, emit);
            bind[v] = None;
            if !go {
                return false;
            }
        }
        true
    }
}

struct CompiledAxiom {
    query: Query,
    conclusion: CFormula,
}

/// Saturation state for one theory and one generating context.
pub(crate) struct Saturator {
    sig: Arc<Signature>,
    axioms: Vec<CompiledAxiom>,
    graph: EGraph,
    generators: Vec<usize>,
    context: Context,
    budget: SaturationBudget,
}

enum RoundOutcome {
    Quiet,
    Changed,
    OverBudget,
}

impl Saturator {
    pub(crate) fn new(theory: &Theory, ctx: &Context, phi: &Formula, budget: SaturationBudget) -> Self {
        let sig = theory.signature.clone();
        let axioms = theory
            .axioms
            .iter()
            .map(|a| CompiledAxiom {
                query: Query::build(&sig, &a.sequent.context, &a.sequent.premise),
                conclusion: compile_formula(&sig, &a.sequent.context, &a.sequent.conclusion),
            })
            .collect();
        let mut graph = EGraph::new(&sig);
        let generators: Vec<usize> = ctx
            .sorts()
            .map(|s| graph.new_class(sig.sort_index(s).expect("checked context")))
            .collect();
        let c = compile_formula(&sig, ctx, phi);
        graph.assert(&sig, &c, &generators);
        graph.rebuild();
        Saturator {
            sig,
            axioms,
            graph,
            generators,
            context: ctx.clone(),
            budget,
        }
    }

    fn round(&mut self) -> RoundOutcome {
        let classes = self.graph.classes_by_sort(self.sig.sort_count());
        let mut firings: Vec<(usize, Vec<usize>)> = Vec::new();
        let limit = self.budget.max_matches;
        for (ai, ax) in self.axioms.iter().enumerate() {
            let g = &self.graph;
            let complete = ax.query.solve(g, &classes, &mut |b| {
                if !g.holds(&ax.conclusion, b) {
                    firings.push((ai, b.to_vec()));
                }
                firings.len() <= limit
            });
            if !complete {
                return RoundOutcome::OverBudget;
            }
        }
        self.graph.changed = false;
        for (ai, b) in &firings {
            let conclusion = &self.axioms[*ai].conclusion;
            self.graph.assert(&self.sig, conclusion, b);
        }
        self.graph.rebuild();
        if self.graph.changed {
            RoundOutcome::Changed
        } else {
            RoundOutcome::Quiet
        }
    }

    fn quiet_after_one_more(&self) -> bool {
        let mut probe = Saturator {
            sig: self.sig.clone(),
            axioms: Vec::new(),
            graph: self.graph.clone(),
            generators: self.generators.clone(),
            context: self.context.clone(),
            budget: self.budget,
        };
        probe.axioms = self
            .axioms
            .iter()
            .map(|a| CompiledAxiom {
                query: a.query.clone(),
                conclusion: a.conclusion.clone(),
            })
            .collect();
        matches!(probe.round(), RoundOutcome::Quiet)
    }

    pub(crate) fn run(mut self) -> SaturationResult {
        let mut status = None;
        for d in 0..self.budget.depth {
            if self.graph.live() > self.budget.max_elements {
                status = Some(SaturationStatus::Truncated(d));
                break;
            }
            let before = self.graph.clone();
            match self.round() {
                RoundOutcome::Quiet => {
                    status = Some(SaturationStatus::Saturated(d));
                    break;
                }
                RoundOutcome::Changed => {}
                RoundOutcome::OverBudget => {
                    self.graph = before;
                    status = Some(SaturationStatus::Truncated(d));
                    break;
                }
            }
        }
        let status = status.unwrap_or_else(|| {
            let d = self.budget.depth;
            if self.graph.live() <= self.budget.max_elements && self.quiet_after_one_more() {
                SaturationStatus::Saturated(d)
            } else {
                SaturationStatus::Truncated(d)
            }
        });
        self.export(status)
    }

    fn export(&self, status: SaturationStatus) -> SaturationResult {
        let g = &self.graph;
        let n = g.parent.len();
        let mut best: Vec<Option<(usize, String, Term)>> = vec![None; n];
        let offer = |best: &mut Vec<Option<(usize, String, Term)>>, c: usize, t: Term| -> bool {
            let key = (t.depth(), t.to_string());
            let better = match &best[c] {
                None => true,
                Some((d, s, _)) => (key.0, &key.1) < (*d, s),
            };
            if better {
                best[c] = Some((key.0, key.1, t));
            }
            better
        };
        for (i, &gen) in self.generators.iter().enumerate() {
            let c = g.find(gen);
            offer(&mut best, c, Term::var(self.context.vars[i].0.clone()));
        }
        loop {
            let mut improved = false;
            for (f, table) in g.funcs.iter().enumerate() {
                for (args, &v) in table {
                    let parts: Option<Vec<Term>> = args.iter().map(|&a| best[a].as_ref().map(|b| b.2.clone())).collect();
                    if let Some(parts) = parts {
                        let t = Term::app(self.sig.function_at(f).name.clone(), parts);
                        if offer(&mut best, g.find(v), t) {
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        let classes = g.classes_by_sort(self.sig.sort_count());
        let mut index = vec![usize::MAX; n];
        let mut structure = PartialStructure::empty("repn", self.sig.clone());
        let mut representatives = Vec::with_capacity(classes.len());
        for (s, cs) in classes.iter().enumerate() {
            let mut order: Vec<usize> = cs.clone();
            order.sort_by(|&a, &b| {
                let ka = best[a].as_ref().expect("every class has a term");
                let kb = best[b].as_ref().expect("every class has a term");
                (ka.0, &ka.1).cmp(&(kb.0, &kb.1))
            });
            let mut reps = Vec::with_capacity(order.len());
            for c in order {
                let (_, name, t) = best[c].clone().expect("every class has a term");
                index[c] = structure.add_element(s, name).expect("representatives are distinct");
                reps.push(t);
            }
            representatives.push(reps);
        }
        for (f, table) in g.funcs.iter().enumerate() {
            for (args, &v) in table {
                let a: Vec<usize> = args.iter().map(|&x| index[g.find(x)]).collect();
                structure
                    .set_function(f, a, index[g.find(v)])
                    .expect("congruence-closed tables are single-valued");
            }
        }
        for (r, table) in g.rels.iter().enumerate() {
            for t in table {
                let a: Vec<usize> = t.iter().map(|&x| index[g.find(x)]).collect();
                structure.add_relation(r, a).expect("valid tuple");
            }
        }
        let generic = self.generators.iter().map(|&c| index[g.find(c)]).collect();
        SaturationResult {
            structure,
            representatives,
            generic,
            status,
        }
    }
}

/// Saturates the generators of `ctx` under `phi` and the axioms of `theory`.
///
/// The inputs must be well-formed; callers check them first.
pub(crate) fn saturate(theory: &Theory, ctx: &Context, phi: &Formula, budget: SaturationBudget) -> SaturationResult {
    Saturator::new(theory, ctx, phi, budget).run()
}
