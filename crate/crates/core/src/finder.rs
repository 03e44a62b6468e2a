//! Finite model enumeration by backtracking over table cells.
//!
//! Every function entry and every relation entry is a cell. Cells are
//! assigned in order of their largest argument; a value may exceed the
//! largest element mentioned so far by at most one, which removes most
//! relabelled copies of the same model without losing any isomorphism
//! class. Ground instances of the axioms are evaluated in three-valued
//! logic after each assignment and the branch is cut as soon as one fails.

use crate::semantics::{compile_formula, dedup_isomorphic, for_each_tuple, CFormula, CTerm, PartialStructure};
use crate::syntax::Theory;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Fun(usize),
    Rel(usize),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tv {
    Val(usize),
    Undef,
    Unknown,
}

struct Layout {
    /// Per function: first cell id and argument strides.
    fun_base: Vec<usize>,
    fun_strides: Vec<Vec<usize>>,
    rel_base: Vec<usize>,
    rel_strides: Vec<Vec<usize>>,
    /// For each cell id: symbol, argument tuple.
    cells: Vec<(Cell, Vec<usize>)>,
}

fn strides(sizes: &[usize]) -> (usize, Vec<usize>) {
    let mut st = vec![0; sizes.len()];
    let mut acc = 1usize;
    for i in (0..sizes.len()).rev() {
        st[i] = acc;
        acc *= sizes[i];
    }
    (acc, st)
}

impl Layout {
    fn new(m: &PartialStructure) -> Self {
        let sig = m.signature();
        let mut cells = Vec::new();
        let mut fun_base = Vec::new();
        let mut fun_strides = Vec::new();
        for f in 0..sig.function_count() {
            let sizes: Vec<usize> = m.function_arg_sorts(f).iter().map(|&s| m.carrier_size(s)).collect();
            let (_, st) = strides(&sizes);
            fun_base.push(cells.len());
            fun_strides.push(st);
            for_each_tuple(&sizes, |t| {
                cells.push((Cell::Fun(f), t.to_vec()));
                true
            });
        }
        let mut rel_base = Vec::new();
        let mut rel_strides = Vec::new();
        for r in 0..sig.relation_count() {
            let sizes: Vec<usize> = m.relation_arg_sorts(r).iter().map(|&s| m.carrier_size(s)).collect();
            let (_, st) = strides(&sizes);
            rel_base.push(cells.len());
            rel_strides.push(st);
            for_each_tuple(&sizes, |t| {
                cells.push((Cell::Rel(r), t.to_vec()));
                true
            });
        }
        Layout {
            fun_base,
            fun_strides,
            rel_base,
            rel_strides,
            cells,
        }
    }

    fn fun_cell(&self, f: usize, args: &[usize]) -> usize {
        self.fun_base[f] + args.iter().zip(&self.fun_strides[f]).map(|(a, s)| a * s).sum::<usize>()
    }

    fn rel_cell(&self, r: usize, args: &[usize]) -> usize {
        self.rel_base[r] + args.iter().zip(&self.rel_strides[r]).map(|(a, s)| a * s).sum::<usize>()
    }
}

/// Cell values: `None` unassigned; for functions `Some(0)` means undefined
/// and `Some(v + 1)` means value `v`; for relations `Some(0|1)`.
struct Search<'a> {
    layout: Layout,
    order: Vec<usize>,
    values: Vec<Option<usize>>,
    instances: Vec<(usize, Vec<usize>)>,
    premises: Vec<CFormula>,
    conclusions: Vec<CFormula>,
    result_sort: Vec<usize>,
    arg_sorts: Vec<Vec<usize>>,
    sizes: Vec<usize>,
    template: PartialStructure,
    visit: &'a mut dyn FnMut(&PartialStructure) -> bool,
}

impl Search<'_> {
    fn term(&self, t: &CTerm, tuple: &[usize]) -> Tv {
        match t {
            CTerm::Var(i) => Tv::Val(tuple[*i]),
            CTerm::App(f, args) => {
                let mut vals = Vec::with_capacity(args.len());
                let mut unknown = false;
                for a in args {
                    match self.term(a, tuple) {
                        Tv::Val(v) => vals.push(v),
                        Tv::Undef => return Tv::Undef,
                        Tv::Unknown => unknown = true,
                    }
                }
                if unknown {
                    return Tv::Unknown;
                }
                match self.values[self.layout.fun_cell(*f, &vals)] {
                    None => Tv::Unknown,
                    Some(0) => Tv::Undef,
                    Some(v) => Tv::Val(v - 1),
                }
            }
        }
    }

    fn formula(&self, phi: &CFormula, tuple: &[usize]) -> Option<bool> {
        match phi {
            CFormula::Rel(r, args) => {
                let mut vals = Vec::with_capacity(args.len());
                let mut unknown = false;
                for a in args {
                    match self.term(a, tuple) {
                        Tv::Val(v) => vals.push(v),
                        Tv::Undef => return Some(false),
                        Tv::Unknown => unknown = true,
                    }
                }
                if unknown {
                    return None;
                }
                self.values[self.layout.rel_cell(*r, &vals)].map(|b| b == 1)
            }
            CFormula::Eq(l, r) => match (self.term(l, tuple), self.term(r, tuple)) {
                (Tv::Val(a), Tv::Val(b)) => Some(a == b),
                (Tv::Undef, _) | (_, Tv::Undef) => Some(false),
                _ => None,
            },
            CFormula::Conj(parts) => {
                let mut all = true;
                for p in parts {
                    match self.formula(p, tuple) {
                        Some(false) => return Some(false),
                        Some(true) => {}
                        None => all = false,
                    }
                }
                all.then_some(true)
            }
        }
    }

    /// Filters the open instances; `None` when one is violated.
    fn filter(&self, open: &[usize]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(open.len());
        for &i in open {
            let (ax, tuple) = &self.instances[i];
            match self.formula(&self.premises[*ax], tuple) {
                Some(false) => continue,
                p => match self.formula(&self.conclusions[*ax], tuple) {
                    Some(true) => continue,
                    Some(false) if p == Some(true) => return None,
                    _ => out.push(i),
                },
            }
        }
        Some(out)
    }

    fn run(&mut self, pos: usize, mdn: &mut Vec<usize>, open: Vec<usize>) -> bool {
        if pos == self.order.len() {
            if !open.is_empty() {
                return true;
            }
            let m = self.build();
            return (self.visit)(&m);
        }
        let cell = self.order[pos];
        let (kind, args) = self.layout.cells[cell].clone();
        let saved = mdn.clone();
        let sorts = match kind {
            Cell::Fun(f) => &self.arg_sorts[f],
            Cell::Rel(r) => &self.arg_sorts[self.result_sort.len() + r],
        }
        .clone();
        for (&a, &s) in args.iter().zip(&sorts) {
            mdn[s] = mdn[s].max(a + 1);
        }
        let candidates: Vec<usize> = match kind {
            Cell::Fun(f) => {
                let rs = self.result_sort[f];
                let bound = (mdn[rs] + 1).min(self.sizes[rs]);
                (0..=bound).collect()
            }
            Cell::Rel(_) => vec![0, 1],
        };
        for v in candidates {
            self.values[cell] = Some(v);
            if let Some(next) = self.filter(&open) {
                let mut m2 = mdn.clone();
                if let Cell::Fun(f) = kind {
                    if v > 0 {
                        let rs = self.result_sort[f];
                        m2[rs] = m2[rs].max(v);
                    }
                }
                if !self.run(pos + 1, &mut m2, next) {
                    self.values[cell] = None;
                    *mdn = saved;
                    return false;
                }
            }
        }
        self.values[cell] = None;
        *mdn = saved;
        true
    }

    fn build(&self) -> PartialStructure {
        let mut m = self.template.clone();
        for (id, (kind, args)) in self.layout.cells.iter().enumerate() {
            match (kind, self.values[id]) {
                (Cell::Fun(f), Some(v)) if v > 0 => m.set_function(*f, args.clone(), v - 1).expect("in range"),
                (Cell::Rel(r), Some(1)) => m.add_relation(*r, args.clone()).expect("in range"),
                _ => {}
            }
        }
        m
    }
}

/// Visits the models of `theory` with exactly the given carrier sizes, up to
/// the symmetry breaking described in the module docs. Several members of an
/// isomorphism class may still be visited. Returns false if `visit` stopped early.
pub fn for_each_model(theory: &Theory, sizes: &[usize], visit: &mut dyn FnMut(&PartialStructure) -> bool) -> bool {
    let sig = theory.signature.clone();
    assert_eq!(sizes.len(), sig.sort_count(), "one size per sort");
    let mut template = PartialStructure::empty(format!("{}_{}", theory.name, sizes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("_")), sig.clone());
    for (s, &n) in sizes.iter().enumerate() {
        template.add_elements(s, n, |i| i.to_string()).expect("fresh names");
    }
    let layout = Layout::new(&template);
    let mut order: Vec<usize> = (0..layout.cells.len()).collect();
    order.sort_by_key(|&c| {
        let (_, args) = &layout.cells[c];
        (args.iter().copied().max().unwrap_or(0), c)
    });
    let premises: Vec<CFormula> = theory
        .axioms
        .iter()
        .map(|a| compile_formula(&sig, &a.sequent.context, &a.sequent.premise))
        .collect();
    let conclusions: Vec<CFormula> = theory
        .axioms
        .iter()
        .map(|a| compile_formula(&sig, &a.sequent.context, &a.sequent.conclusion))
        .collect();
    let mut instances = Vec::new();
    for (ai, a) in theory.axioms.iter().enumerate() {
        let dims: Vec<usize> = a
            .sequent
            .context
            .sorts()
            .map(|s| sizes[sig.sort_index(s).expect("declared sort")])
            .collect();
        for_each_tuple(&dims, |t| {
            instances.push((ai, t.to_vec()));
            true
        });
    }
    let result_sort: Vec<usize> = (0..sig.function_count()).map(|f| template.function_result_sort(f)).collect();
    let mut arg_sorts: Vec<Vec<usize>> = (0..sig.function_count()).map(|f| template.function_arg_sorts(f)).collect();
    arg_sorts.extend((0..sig.relation_count()).map(|r| template.relation_arg_sorts(r)));
    let ncells = layout.cells.len();
    let mut search = Search {
        layout,
        order,
        values: vec![None; ncells],
        instances,
        premises,
        conclusions,
        result_sort,
        arg_sorts,
        sizes: sizes.to_vec(),
        template,
        visit,
    };
    let all: Vec<usize> = (0..search.instances.len()).collect();
    let Some(open) = search.filter(&all) else {
        return true;
    };
    let mut mdn = vec![0usize; sizes.len()];
    search.run(0, &mut mdn, open)
}

/// All size vectors with entries at most `max`, by total size then lexicographically.
pub fn size_vectors(nsorts: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_tuple(&vec![max + 1; nsorts], |t| {
        out.push(t.to_vec());
        true
    });
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

/// Models with every carrier of size at most `max`, one per isomorphism class.
pub fn enumerate_models(theory: &Theory, max: usize) -> Vec<PartialStructure> {
    let mut out = Vec::new();
    for sizes in size_vectors(theory.signature.sort_count(), max) {
        let mut batch = Vec::new();
        for_each_model(theory, &sizes, &mut |m| {
            batch.push(m.clone());
            true
        });
        out.extend(dedup_isomorphic(batch));
    }
    out
}

/// The first model found (smallest sizes first) satisfying `pred`.
pub fn find_model(theory: &Theory, max: usize, pred: &mut dyn FnMut(&PartialStructure) -> bool) -> Option<PartialStructure> {
    for sizes in size_vectors(theory.signature.sort_count(), max) {
        let mut found = None;
        for_each_model(theory, &sizes, &mut |m| {
            if pred(m) {
                found = Some(m.clone());
                false
            } else {
                true
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::semantics::{is_model, Homomorphism};

    /// Every structure with the given sizes, by brute force over all tables.
    fn brute_force(theory: &Theory, sizes: &[usize]) -> Vec<PartialStructure> {
        let sig = theory.signature.clone();
        let mut template = PartialStructure::empty("b", sig.clone());
        for (s, &n) in sizes.iter().enumerate() {
            template.add_elements(s, n, |i| i.to_string()).unwrap();
        }
        let layout = Layout::new(&template);
        let domains: Vec<usize> = layout
            .cells
            .iter()
            .map(|(k, _)| match k {
                Cell::Fun(f) => template.carrier_size(template.function_result_sort(*f)) + 1,
                Cell::Rel(_) => 2,
            })
            .collect();
        let mut out = Vec::new();
        for_each_tuple(&domains, |vals| {
            let mut m = template.clone();
            for ((k, args), &v) in layout.cells.iter().zip(vals) {
                match k {
                    Cell::Fun(f) if v > 0 => m.set_function(*f, args.clone(), v - 1).unwrap(),
                    Cell::Rel(r) if v == 1 => m.add_relation(*r, args.clone()).unwrap(),
                    _ => {}
                }
            }
            if is_model(&m, theory) {
                out.push(m);
            }
            true
        });
        out
    }

    fn classes(theory: &Theory, sizes: &[usize]) -> usize {
        let mut found = Vec::new();
        for_each_model(theory, sizes, &mut |m| {
            assert!(is_model(m, theory));
            found.push(m.clone());
            true
        });
        dedup_isomorphic(found).len()
    }

    #[test]
    fn agrees_with_brute_force_up_to_isomorphism() {
        for (t, sizes) in [
            (library::pos(), vec![3]),
            (library::preorder(), vec![3]),
            (library::mon(), vec![2]),
            (library::mon_inv(), vec![2]),
            (library::cat(), vec![1, 2]),
            (library::cat(), vec![2, 2]),
            (library::quiv(), vec![2, 2]),
            (library::set(), vec![3]),
        ] {
            let bf = dedup_isomorphic(brute_force(&t, &sizes)).len();
            assert_eq!(classes(&t, &sizes), bf, "{} at {:?}", t.name, sizes);
        }
    }

    #[test]
    fn known_counts() {
        // Posets on 1..4 points up to isomorphism: 1, 2, 5, 16.
        let pos = library::pos();
        let counts: Vec<usize> = (1..=4).map(|n| classes(&pos, &[n])).collect();
        assert_eq!(counts, [1, 2, 5, 16]);
        // Monoids of order 1..4: 1, 2, 7, 35.
        let mon = library::mon();
        let counts: Vec<usize> = (1..=4).map(|n| classes(&mon, &[n])).collect();
        assert_eq!(counts, [1, 2, 7, 35]);
    }

    #[test]
    fn finds_small_countermodel() {
        let mon = library::mon();
        let m = find_model(&mon, 4, &mut |m| {
            let mul = m.signature().function_index("mul").unwrap();
            (0..m.carrier_size(0)).any(|x| m.function_value(mul, &[x, x]) != Some(x))
        })
        .unwrap();
        assert_eq!(m.carrier_size(0), 2);
        let id = Homomorphism::identity(&m);
        assert_eq!(id.maps[0].len(), 2);
    }

    #[test]
    fn size_vectors_are_ordered() {
        assert_eq!(size_vectors(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(size_vectors(0, 3), vec![Vec::<usize>::new()]);
    }
}
