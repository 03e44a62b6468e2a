//! Finite-scale closure experiments on classes of models.
//!
//! A [`ModelUniverse`] is a finite list of models of one theory, one per
//! isomorphism class, with a bound on carrier sizes. The operators
//! [`close_p`], [`close_scl`] and [`close_r`] close a universe under
//! products, closed submodels and retracts, dropping (and recording) every
//! structure that would exceed the size bound.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::finder::enumerate_models;
use crate::morphology::{closed_submodel_generated, sequent_arrow};
use crate::semantics::{
    check_model, holds, is_isomorphic, product_over, visit_homs, Fingerprint, Homomorphism, PartialStructure,
};
use crate::syntax::{Sequent, Theory};
use crate::translation::TheoryMorphism;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BirkhoffError {
    #[error("`{model}` is not a model of `{theory}`: {reason}")]
    NotAModel {
        model: String,
        theory: String,
        reason: String,
    },
    #[error("`{0}` exceeds the size cap")]
    TooLarge(String),
    #[error("ill-formed category: {0}")]
    Category(String),
    #[error("judgment `{0}` is not over the signature of the theory")]
    BadJudgment(String),
}

/// A finite class of finite models, one per isomorphism class.
#[derive(Clone, Debug)]
pub struct ModelUniverse {
    pub theory: Theory,
    models: Vec<PartialStructure>,
    prints: Vec<Fingerprint>,
    /// Largest allowed carrier, per sort.
    pub size_cap: usize,
    /// Constructions dropped for exceeding the cap.
    pub skipped: Vec<String>,
}

impl ModelUniverse {
    pub fn empty(theory: &Theory, size_cap: usize) -> Self {
        ModelUniverse {
            theory: theory.clone(),
            models: Vec::new(),
            prints: Vec::new(),
            size_cap,
            skipped: Vec::new(),
        }
    }

    /// A universe of the given models, after checking each one.
    pub fn new(
        theory: &Theory,
        models: impl IntoIterator<Item = PartialStructure>,
        size_cap: usize,
    ) -> Result<Self, BirkhoffError> {
        let mut u = ModelUniverse::empty(theory, size_cap);
        for m in models {
            if !u.fits(&m) {
                return Err(BirkhoffError::TooLarge(m.name.clone()));
            }
            let report = check_model(&m, theory).map_err(|e| BirkhoffError::NotAModel {
                model: m.name.clone(),
                theory: theory.name.clone(),
                reason: e.to_string(),
            })?;
            if let Some(v) = report.violations.first() {
                return Err(BirkhoffError::NotAModel {
                    model: m.name.clone(),
                    theory: theory.name.clone(),
                    reason: format!("axiom `{}` fails", v.axiom),
                });
            }
            u.insert(m);
        }
        Ok(u)
    }

    /// Every model of the theory within the cap.
    pub fn all(theory: &Theory, size_cap: usize) -> Self {
        let mut u = ModelUniverse::empty(theory, size_cap);
        for m in enumerate_models(theory, size_cap) {
            u.insert(m);
        }
        u
    }

    pub fn models(&self) -> &[PartialStructure] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn fits(&self, m: &PartialStructure) -> bool {
        m.carrier_sizes().iter().all(|&n| n <= self.size_cap)
    }

    /// Position of the member isomorphic to `m`.
    pub fn position(&self, m: &PartialStructure) -> Option<usize> {
        let fp = m.fingerprint();
        (0..self.models.len()).find(|&i| self.prints[i] == fp && is_isomorphic(&self.models[i], m))
    }

    pub fn contains(&self, m: &PartialStructure) -> bool {
        self.position(m).is_some()
    }

    /// Adds `m` unless an isomorphic copy is present. Returns whether it was new.
    pub fn insert(&mut self, m: PartialStructure) -> bool {
        if self.contains(&m) {
            return false;
        }
        self.prints.push(m.fingerprint());
        self.models.push(m);
        true
    }

    /// Members satisfying a predicate.
    pub fn filter(&self, mut keep: impl FnMut(&PartialStructure) -> bool) -> Self {
        let mut u = ModelUniverse::empty(&self.theory, self.size_cap);
        for m in &self.models {
            if keep(m) {
                u.insert(m.clone());
            }
        }
        u
    }

    pub fn is_subclass_of(&self, other: &ModelUniverse) -> bool {
        self.models.iter().all(|m| other.contains(m))
    }

    /// Same isomorphism classes.
    pub fn same_class(&self, other: &ModelUniverse) -> bool {
        self.len() == other.len() && self.is_subclass_of(other)
    }

    /// Members of `self` with no isomorphic copy in `other`.
    pub fn difference(&self, other: &ModelUniverse) -> Vec<&PartialStructure> {
        self.models.iter().filter(|m| !other.contains(m)).collect()
    }

    fn merged(&self, extra: impl IntoIterator<Item = PartialStructure>) -> Self {
        let mut u = self.clone();
        for m in extra {
            u.insert(m);
        }
        u
    }
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Closure under products of at most `arity` factors, iterated until no new
/// member fits the cap. The empty product is included.
pub fn close_p(universe: &ModelUniverse, arity: usize) -> ModelUniverse {
    let mut u = universe.clone();
    let sig = u.theory.signature.clone();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    loop {
        let mut grew = false;
        let n = u.models.len();
        for k in 0..=arity {
            for factors in multisets(n, k) {
                if !seen.insert(factors.clone()) {
                    continue;
                }
                let sizes: Vec<u128> = (0..sig.sort_count())
                    .map(|s| factors.iter().map(|&i| u.models[i].carrier_size(s) as u128).product())
                    .collect();
                let names: Vec<&str> = factors.iter().map(|&i| u.models[i].name.as_str()).collect();
                let label = format!("({})", names.join(" x "));
                if sizes.iter().any(|&s| s > u.size_cap as u128) {
                    if !u.skipped.contains(&label) {
                        u.skipped.push(label);
                    }
                    continue;
                }
                let parts: Vec<PartialStructure> = factors.iter().map(|&i| u.models[i].clone()).collect();
                let total = sizes.iter().sum::<u128>() as usize;
                let (mut p, _) = product_over(sig.clone(), &parts, total.max(1)).expect("size checked");
                p.name = label;
                grew |= u.insert(p);
            }
        }
        if !grew {
            return u;
        }
    }
}

/// Every closed submodel of a structure, one per subset that is already closed.
pub fn closed_submodels(m: &PartialStructure) -> Vec<PartialStructure> {
    let sizes = m.carrier_sizes();
    let bits: usize = sizes.iter().sum();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for mask in 0u64..(1u64 << bits) {
        let mut seed = Vec::with_capacity(sizes.len());
        let mut b = 0;
        for &n in &sizes {
            seed.push((0..n).map(|i| mask & (1 << (b + i)) != 0).collect::<Vec<bool>>());
            b += n;
        }
        let (sub, incl) = closed_submodel_generated(m, &seed).expect("shape matches");
        if seen.insert(incl.maps.clone()) {
            out.push(sub);
        }
    }
    out
}

/// Closure under closed submodels.
pub fn close_scl(universe: &ModelUniverse) -> ModelUniverse {
    let extra: Vec<PartialStructure> = universe.models.iter().flat_map(closed_submodels).collect();
    universe.merged(extra)
}

/// A homomorphism from `src` onto `tgt` whose image under `u` has a section.
pub fn retraction_witness(
    src: &PartialStructure,
    tgt: &PartialStructure,
    u: Option<&TheoryMorphism>,
) -> Option<(Homomorphism, Homomorphism)> {
    let (us, ut) = match u {
        Some(rho) => (rho.reduct(src).ok()?, rho.reduct(tgt).ok()?),
        None => (src.clone(), tgt.clone()),
    };
    let id = Homomorphism::identity(&ut);
    let sections: Vec<Homomorphism> = {
        let mut v = Vec::new();
        visit_homs(&ut, &us, true, |s| {
            v.push(s.clone());
            true
        });
        v
    };
    let mut found = None;
    visit_homs(src, tgt, false, |h| {
        let uh = match u {
            Some(rho) => match rho.reduct_hom(h) {
                Ok(x) => x,
                Err(_) => return true,
            },
            None => h.clone(),
        };
        if let Some(s) = sections.iter().find(|s| s.then(&uh) == id) {
            found = Some((h.clone(), s.clone()));
        }
        found.is_none()
    });
    found
}

/// Closure under retracts: adds every member of `pool` that is the codomain
/// of a (`u`-split) homomorphism out of a member.
pub fn close_r(universe: &ModelUniverse, pool: &ModelUniverse, u: Option<&TheoryMorphism>) -> ModelUniverse {
    let extra: Vec<PartialStructure> = pool
        .models
        .iter()
        .filter(|cand| !universe.contains(cand))
        .filter(|cand| universe.models.iter().any(|m| retraction_witness(m, cand, u).is_some()))
        .cloned()
        .collect();
    universe.merged(extra)
}

/// The closure under `R S_cl P`, iterated to a fixed point.
///
/// Without a size cap one pass would suffice. With a cap, products that
/// are too large are dropped, and some of their closed submodels only show
/// up through later passes. `second_pass_added` lists what the first pass
/// missed.
#[derive(Clone, Debug)]
pub struct HspClosure {
    pub closure: ModelUniverse,
    pub passes: usize,
    pub second_pass_added: Vec<String>,
}

impl HspClosure {
    /// Whether a single pass already reached the fixed point.
    pub fn is_stable(&self) -> bool {
        self.second_pass_added.is_empty()
    }
}

/// Default number of factors for product closure.
pub const DEFAULT_ARITY: usize = 2;

fn hsp_once(universe: &ModelUniverse, pool: &ModelUniverse, u: Option<&TheoryMorphism>) -> ModelUniverse {
    close_r(&close_scl(&close_p(universe, DEFAULT_ARITY)), pool, u)
}

pub fn hsp_closure(universe: &ModelUniverse, pool: &ModelUniverse, u: Option<&TheoryMorphism>) -> HspClosure {
    let mut closure = hsp_once(universe, pool, u);
    let mut passes = 1;
    let mut second_pass_added = Vec::new();
    loop {
        let again = hsp_once(&closure, pool, u);
        let added: Vec<String> = again.difference(&closure).into_iter().map(|m| m.name.clone()).collect();
        if added.is_empty() {
            break;
        }
        if passes == 1 {
            second_pass_added = added;
        }
        passes += 1;
        closure = again;
    }
    HspClosure {
        closure,
        passes,
        second_pass_added,
    }
}

/// Whether a class is closed, with the members the closure adds.
#[derive(Clone, Debug)]
pub struct FixedPointReport {
    pub fixed: bool,
    /// Models produced by the closure but missing from the class.
    pub witnesses: Vec<PartialStructure>,
    /// Constructions skipped for size.
    pub skipped: Vec<String>,
}

pub fn fixed_point_check(class: &ModelUniverse, pool: &ModelUniverse, u: Option<&TheoryMorphism>) -> FixedPointReport {
    let h = hsp_closure(class, pool, u);
    let witnesses: Vec<PartialStructure> = h.closure.difference(class).into_iter().cloned().collect();
    FixedPointReport {
        fixed: witnesses.is_empty(),
        witnesses,
        skipped: h.closure.skipped,
    }
}

/// Agreement of a judgment's orthogonality test with its validity on the pool.
#[derive(Clone, Debug)]
pub struct JudgmentCheck {
    pub judgment: String,
    /// `None` when the presentations did not saturate.
    pub agrees: Option<bool>,
    pub disagreements: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct DefinabilityReport {
    pub class: ModelUniverse,
    pub fixed_point: FixedPointReport,
    pub judgments: Vec<JudgmentCheck>,
}

impl DefinabilityReport {
    pub fn passed(&self) -> bool {
        self.fixed_point.fixed && self.judgments.iter().all(|j| j.agrees != Some(false))
    }
}

/// Checks on `pool` that the models satisfying `judgments` form a closed
/// class and that each judgment's orthogonality test matches its validity.
pub fn definability_check(
    judgments: &[Sequent],
    pool: &ModelUniverse,
    u: Option<&TheoryMorphism>,
    depth: usize,
) -> Result<DefinabilityReport, BirkhoffError> {
    let theory = &pool.theory;
    for j in judgments {
        if !crate::syntax::sequent_diagnostics(&theory.signature, j).is_empty() {
            return Err(BirkhoffError::BadJudgment(j.to_string()));
        }
    }
    let class = pool.filter(|m| judgments.iter().all(|j| holds(m, j).unwrap_or(false)));
    let fixed_point = fixed_point_check(&class, pool, u);
    let mut checks = Vec::with_capacity(judgments.len());
    for j in judgments {
        let mut check = JudgmentCheck {
            judgment: j.to_string(),
            agrees: None,
            disagreements: Vec::new(),
        };
        if let Ok(arrow) = sequent_arrow(theory, j, depth) {
            for m in &pool.models {
                let orth = arrow.orthogonal(m).expect("comparison map is a homomorphism");
                if orth != holds(m, j).unwrap_or(false) {
                    check.disagreements.push(m.name.clone());
                }
            }
            check.agrees = Some(check.disagreements.is_empty());
        }
        checks.push(check);
    }
    Ok(DefinabilityReport {
        class,
        fixed_point,
        judgments: checks,
    })
}

/// A finite category given by its composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    /// `(source, target)` of each morphism.
    pub morphisms: Vec<(usize, usize)>,
    pub identities: Vec<usize>,
    /// `compose[g][f]` is `g ∘ f` when `f` ends where `g` starts.
    pub compose: Vec<Vec<Option<usize>>>,
}

impl FiniteCategory {
    /// The category with only identities.
    pub fn discrete(objects: Vec<String>) -> Self {
        let n = objects.len();
        let mut compose = vec![vec![None; n]; n];
        for (i, row) in compose.iter_mut().enumerate() {
            row[i] = Some(i);
        }
        FiniteCategory {
            objects,
            morphisms: (0..n).map(|i| (i, i)).collect(),
            identities: (0..n).collect(),
            compose,
        }
    }

    /// The thin category of a reflexive relation, closed transitively.
    pub fn thin(objects: Vec<String>, arrow: impl Fn(usize, usize) -> bool) -> Self {
        let n = objects.len();
        let mut reach: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || arrow(i, j)).collect()).collect();
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut index = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if reach[i][j] {
                    index[i][j] = Some(morphisms.len());
                    morphisms.push((i, j));
                }
            }
        }
        let identities = (0..n).map(|i| index[i][i].expect("reflexive")).collect();
        let m = morphisms.len();
        let mut compose = vec![vec![None; m]; m];
        for (g, &(b, c)) in morphisms.iter().enumerate() {
            for (f, &(a, b2)) in morphisms.iter().enumerate() {
                if b == b2 {
                    compose[g][f] = index[a][c];
                }
            }
        }
        FiniteCategory {
            objects,
            morphisms,
            identities,
            compose,
        }
    }

    /// Checks typing, identity and associativity laws.
    pub fn validate(&self) -> Result<(), BirkhoffError> {
        let err = |s: String| Err(BirkhoffError::Category(s));
        let n = self.objects.len();
        let m = self.morphisms.len();
        if self.identities.len() != n || self.compose.len() != m || self.compose.iter().any(|r| r.len() != m) {
            return err("table sizes do not match".into());
        }
        if self.morphisms.iter().any(|&(a, b)| a >= n || b >= n) {
            return err("morphism with an unknown end".into());
        }
        for (x, &i) in self.identities.iter().enumerate() {
            if self.morphisms.get(i) != Some(&(x, x)) {
                return err(format!("identity of `{}` is not an endomorphism of it", self.objects[x]));
            }
        }
        for g in 0..m {
            for f in 0..m {
                let (b, c) = self.morphisms[g];
                let (a, b2) = self.morphisms[f];
                match (b == b2, self.compose[g][f]) {
                    (true, Some(h)) if h < m && self.morphisms[h] == (a, c) => {}
                    (false, None) => {}
                    _ => return err(format!("composite of {g} after {f} is wrong")),
                }
            }
        }
        for f in 0..m {
            let (a, b) = self.morphisms[f];
            if self.compose[self.identities[b]][f] != Some(f) || self.compose[f][self.identities[a]] != Some(f) {
                return err(format!("identity law fails at morphism {f}"));
            }
        }
        for h in 0..m {
            for g in 0..m {
                let Some(hg) = self.compose[h][g] else { continue };
                for f in 0..m {
                    let Some(gf) = self.compose[g][f] else { continue };
                    if self.compose[hg][f] != self.compose[h][gf] {
                        return err(format!("associativity fails at {h}, {g}, {f}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A finite poset: `leq[i][j]` when `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    /// Objects of each element, as indices into the category.
    pub components: Vec<Vec<usize>>,
    pub leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// The poset of strongly connected components, ordered by reachability.
pub fn posetification(c: &FiniteCategory) -> FinitePoset {
    let n = c.objects.len();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in &c.morphisms {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut comp_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if comp_of[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &members {
            comp_of[j] = components.len();
        }
        components.push(members);
    }
    let leq = components
        .iter()
        .map(|a| components.iter().map(|b| reach[a[0]][b[0]]).collect())
        .collect();
    FinitePoset { components, leq }
}

/// Length of the longest strictly ascending chain, counted in elements.
///
/// Finite posets always satisfy the ascending chain condition; the number
/// is a diagnostic of how deep the order is.
pub fn acc_report(p: &FinitePoset) -> usize {
    let n = p.len();
    // Longest chain starting at each element, by memoized search.
    fn longest(i: usize, p: &FinitePoset, memo: &mut [Option<usize>]) -> usize {
        if let Some(v) = memo[i] {
            return v;
        }
        let best = (0..p.len())
            .filter(|&j| j != i && p.leq[i][j])
            .map(|j| longest(j, p, memo))
            .max()
            .unwrap_or(0);
        memo[i] = Some(best + 1);
        best + 1
    }
    let mut memo = vec![None; n];
    (0..n).map(|i| longest(i, p, &mut memo)).max().unwrap_or(0)
}

/// The thin category on the members of a universe with an arrow wherever a
/// homomorphism exists.
pub fn component_diagram(universe: &ModelUniverse) -> FiniteCategory {
    let models = universe.models();
    let names = models.iter().map(|m| m.name.clone()).collect();
    FiniteCategory::thin(names, |i, j| {
        let mut any = false;
        visit_homs(&models[i], &models[j], false, |_| {
            any = true;
            false
        });
        any
    })
}
