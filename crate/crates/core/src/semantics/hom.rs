//! Σ-homomorphisms between finite structures and exhaustive search for them.

use super::structure::PartialStructure;

/// A sort-indexed family of total maps between carriers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Homomorphism {
    pub maps: Vec<Vec<usize>>,
}

impl Homomorphism {
    pub fn identity(m: &PartialStructure) -> Self {
        Homomorphism {
            maps: m.carrier_sizes().into_iter().map(|n| (0..n).collect()).collect(),
        }
    }

    pub fn apply(&self, sort: usize, e: usize) -> usize {
        self.maps[sort][e]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Homomorphism) -> Homomorphism {
        Homomorphism {
            maps: self
                .maps
                .iter()
                .zip(&next.maps)
                .map(|(a, b)| a.iter().map(|&x| b[x]).collect())
                .collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| {
            let mut seen = std::collections::HashSet::new();
            m.iter().all(|x| seen.insert(*x))
        })
    }

    pub fn is_surjective_onto(&self, target: &PartialStructure) -> bool {
        self.maps.iter().enumerate().all(|(s, m)| {
            let mut hit = vec![false; target.carrier_size(s)];
            m.iter().for_each(|&x| hit[x] = true);
            hit.into_iter().all(|b| b)
        })
    }

    /// Per-sort image of the map.
    pub fn image(&self, target: &PartialStructure) -> Vec<Vec<bool>> {
        self.maps
            .iter()
            .enumerate()
            .map(|(s, m)| {
                let mut hit = vec![false; target.carrier_size(s)];
                m.iter().for_each(|&x| hit[x] = true);
                hit
            })
            .collect()
    }
}

/// Why a family of maps fails to be a homomorphism.
pub fn hom_violation(src: &PartialStructure, tgt: &PartialStructure, h: &Homomorphism) -> Option<String> {
    let sig = src.signature();
    if **sig != **tgt.signature() {
        return Some("different signatures".into());
    }
    if h.maps.len() != sig.sort_count() {
        return Some("wrong number of sort components".into());
    }
    for s in 0..sig.sort_count() {
        if h.maps[s].len() != src.carrier_size(s) {
            return Some(format!("component at `{}` is not total", sig.sort_name(s)));
        }
        if h.maps[s].iter().any(|&x| x >= tgt.carrier_size(s)) {
            return Some(format!("component at `{}` leaves the target carrier", sig.sort_name(s)));
        }
    }
    for f in 0..sig.function_count() {
        let arg_sorts = src.function_arg_sorts(f);
        let rs = src.function_result_sort(f);
        for (args, &v) in src.function_table(f) {
            let image: Vec<usize> = args.iter().zip(&arg_sorts).map(|(&a, &s)| h.maps[s][a]).collect();
            if tgt.function_value(f, &image) != Some(h.maps[rs][v]) {
                return Some(format!("`{}` is not preserved", sig.function_at(f).name));
            }
        }
    }
    for r in 0..sig.relation_count() {
        let sorts = src.relation_arg_sorts(r);
        for t in src.relation_table(r) {
            let image: Vec<usize> = t.iter().zip(&sorts).map(|(&a, &s)| h.maps[s][a]).collect();
            if !tgt.relation_holds(r, &image) {
                return Some(format!("`{}` is not preserved", sig.relation_at(r).name));
            }
        }
    }
    None
}

/// Whether `h` is a Σ-homomorphism from `src` to `tgt`.
pub fn check_hom(src: &PartialStructure, tgt: &PartialStructure, h: &Homomorphism) -> bool {
    hom_violation(src, tgt, h).is_none()
}

/// Options for the homomorphism search.
#[derive(Clone, Copy, Debug, Default)]
pub struct HomSearch {
    /// Only injective maps.
    pub injective: bool,
    /// Stop after this many results.
    pub limit: Option<usize>,
}

enum Constraint {
    Func { f: usize, args: Vec<usize>, value: usize },
    Rel { r: usize, args: Vec<usize> },
}

/// Every homomorphism from `src` to `tgt`, in lexicographic order of the maps.
pub fn enumerate_homs(src: &PartialStructure, tgt: &PartialStructure) -> Vec<Homomorphism> {
    search_homs(src, tgt, HomSearch::default())
}

/// Homomorphism search with options.
pub fn search_homs(src: &PartialStructure, tgt: &PartialStructure, opts: HomSearch) -> Vec<Homomorphism> {
    let mut out = Vec::new();
    visit_homs(src, tgt, opts.injective, |h| {
        out.push(h.clone());
        opts.limit.is_none_or(|l| out.len() < l)
    });
    out
}

/// Number of homomorphisms.
pub fn count_homs(src: &PartialStructure, tgt: &PartialStructure) -> usize {
    let mut n = 0;
    visit_homs(src, tgt, false, |_| {
        n += 1;
        true
    });
    n
}

/// Calls `visit` on every homomorphism until it returns `false`.
pub fn visit_homs(
    src: &PartialStructure,
    tgt: &PartialStructure,
    injective: bool,
    mut visit: impl FnMut(&Homomorphism) -> bool,
) {
    let sig = src.signature();
    if **sig != **tgt.signature() {
        return;
    }
    // Flatten elements: position p <-> (sort, index).
    let mut pos_of = Vec::new();
    let mut elems = Vec::new();
    for s in 0..sig.sort_count() {
        let mut row = Vec::new();
        for e in 0..src.carrier_size(s) {
            row.push(elems.len());
            elems.push((s, e));
        }
        pos_of.push(row);
    }
    let n = elems.len();
    // Constraints are checked at the position of their last element.
    let mut checks: Vec<Vec<Constraint>> = (0..n).map(|_| Vec::new()).collect();
    // Function entries whose value comes after all arguments force that value.
    let mut forcing: Vec<Vec<(usize, Vec<usize>)>> = (0..n).map(|_| Vec::new()).collect();
    for f in 0..sig.function_count() {
        let arg_sorts = src.function_arg_sorts(f);
        let rs = src.function_result_sort(f);
        for (args, &v) in src.function_table(f) {
            let arg_pos: Vec<usize> = args.iter().zip(&arg_sorts).map(|(&a, &s)| pos_of[s][a]).collect();
            let vp = pos_of[rs][v];
            let last_arg = arg_pos.iter().copied().max();
            if last_arg.is_none_or(|l| l < vp) {
                forcing[vp].push((f, arg_pos.clone()));
            }
            let last = last_arg.map_or(vp, |l| l.max(vp));
            checks[last].push(Constraint::Func {
                f,
                args: arg_pos,
                value: vp,
            });
        }
    }
    for r in 0..sig.relation_count() {
        let sorts = src.relation_arg_sorts(r);
        for t in src.relation_table(r) {
            let args: Vec<usize> = t.iter().zip(&sorts).map(|(&a, &s)| pos_of[s][a]).collect();
            match args.iter().max() {
                Some(&last) => checks[last].push(Constraint::Rel { r, args }),
                None => {
                    if !tgt.relation_holds(r, &[]) {
                        return;
                    }
                }
            }
        }
    }
    let mut assign = vec![0usize; n];
    let mut used: Vec<Vec<bool>> = (0..sig.sort_count()).map(|s| vec![false; tgt.carrier_size(s)]).collect();
    let mut state = Search {
        src,
        tgt,
        elems: &elems,
        checks: &checks,
        forcing: &forcing,
        injective,
    };
    state.go(0, &mut assign, &mut used, &mut visit);
}

struct Search<'a> {
    src: &'a PartialStructure,
    tgt: &'a PartialStructure,
    elems: &'a [(usize, usize)],
    checks: &'a [Vec<Constraint>],
    forcing: &'a [Vec<(usize, Vec<usize>)>],
    injective: bool,
}

impl Search<'_> {
    /// Returns `false` when the visitor asked to stop.
    fn go(
        &mut self,
        p: usize,
        assign: &mut [usize],
        used: &mut [Vec<bool>],
        visit: &mut impl FnMut(&Homomorphism) -> bool,
    ) -> bool {
        if p == self.elems.len() {
            let mut maps: Vec<Vec<usize>> = self.src.carrier_sizes().into_iter().map(Vec::with_capacity).collect();
            for (q, &(s, _)) in self.elems.iter().enumerate() {
                maps[s].push(assign[q]);
            }
            return visit(&Homomorphism { maps });
        }
        let (sort, _) = self.elems[p];
        let forced = self.forcing[p].first().map(|(f, args)| {
            let image: Vec<usize> = args.iter().map(|&q| assign[q]).collect();
            self.tgt.function_value(*f, &image)
        });
        let candidates: Vec<usize> = match forced {
            Some(Some(v)) => vec![v],
            Some(None) => return true,
            None => (0..self.tgt.carrier_size(sort)).collect(),
        };
        for v in candidates {
            if self.injective && used[sort][v] {
                continue;
            }
            assign[p] = v;
            if !self.checks[p].iter().all(|c| self.satisfied(c, assign)) {
                continue;
            }
            if self.injective {
                used[sort][v] = true;
            }
            let keep_going = self.go(p + 1, assign, used, visit);
            if self.injective {
                used[sort][v] = false;
            }
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn satisfied(&self, c: &Constraint, assign: &[usize]) -> bool {
        match c {
            Constraint::Func { f, args, value } => {
                let image: Vec<usize> = args.iter().map(|&q| assign[q]).collect();
                self.tgt.function_value(*f, &image) == Some(assign[*value])
            }
            Constraint::Rel { r, args } => {
                let image: Vec<usize> = args.iter().map(|&q| assign[q]).collect();
                self.tgt.relation_holds(*r, &image)
            }
        }
    }
}

/// An isomorphism together with its inverse, if the structures are isomorphic.
pub fn find_isomorphism(a: &PartialStructure, b: &PartialStructure) -> Option<(Homomorphism, Homomorphism)> {
    if a.carrier_sizes() != b.carrier_sizes() || a.fingerprint() != b.fingerprint() {
        return None;
    }
    let sig = a.signature();
    let same_table_sizes = (0..sig.function_count()).all(|f| a.function_table(f).len() == b.function_table(f).len())
        && (0..sig.relation_count()).all(|r| a.relation_table(r).len() == b.relation_table(r).len());
    if !same_table_sizes {
        return None;
    }
    // A bijective homomorphism between structures with equally large tables
    // maps table entries bijectively, so its inverse is a homomorphism too.
    let mut found = None;
    visit_homs(a, b, true, |h| {
        found = Some(h.clone());
        false
    });
    let h = found?;
    let inv = Homomorphism {
        maps: h
            .maps
            .iter()
            .map(|m| {
                let mut inv = vec![0; m.len()];
                m.iter().enumerate().for_each(|(i, &x)| inv[x] = i);
                inv
            })
            .collect(),
    };
    debug_assert!(check_hom(b, a, &inv));
    Some((h, inv))
}

pub fn is_isomorphic(a: &PartialStructure, b: &PartialStructure) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Keeps one representative of each isomorphism class, preserving first occurrence order.
pub fn dedup_isomorphic(models: Vec<PartialStructure>) -> Vec<PartialStructure> {
    let mut out: Vec<PartialStructure> = Vec::new();
    let mut prints = Vec::new();
    for m in models {
        let fp = m.fingerprint();
        let dup = out
            .iter()
            .zip(&prints)
            .any(|(o, p)| *p == fp && is_isomorphic(o, &m));
        if !dup {
            prints.push(fp);
            out.push(m);
        }
    }
    out
}
