//! Colimits of finite diagrams indexed by finite directed posets.

use std::collections::BTreeMap;

use thiserror::Error;

use super::hom::{check_hom, Homomorphism};
use super::structure::{PartialStructure, StructureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColimitError {
    #[error("diagram has no stages")]
    Empty,
    #[error("arrow {0} refers to a missing stage")]
    BadArrow(usize),
    #[error("arrow {0} is not a homomorphism")]
    NotHomomorphism(usize),
    #[error("the indexing graph has a cycle through stage {0}")]
    Cyclic(usize),
    #[error("two paths from stage {from} to stage {to} induce different maps")]
    NonFunctorial { from: usize, to: usize },
    #[error("stages {0} and {1} have no common upper bound")]
    NotDirected(usize, usize),
    #[error("colimit tables conflict at `{0}`")]
    Conflict(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A diagram of structures: stages and generating arrows `i -> j`.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub stages: Vec<PartialStructure>,
    pub arrows: Vec<(usize, usize, Homomorphism)>,
}

impl Diagram {
    /// A chain `M0 -> M1 -> ...` from consecutive connecting maps.
    pub fn chain(stages: Vec<PartialStructure>, maps: Vec<Homomorphism>) -> Self {
        let arrows = maps.into_iter().enumerate().map(|(i, h)| (i, i + 1, h)).collect();
        Diagram { stages, arrows }
    }
}

/// The colimit object and its coprojections.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub structure: PartialStructure,
    pub coprojections: Vec<Homomorphism>,
}

/// Composite maps `stage i -> stage j` for every `i <= j`, checking functoriality.
fn composites(d: &Diagram) -> Result<Vec<Vec<Option<Homomorphism>>>, ColimitError> {
    let n = d.stages.len();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, (i, j, h)) in d.arrows.iter().enumerate() {
        if *i >= n || *j >= n {
            return Err(ColimitError::BadArrow(k));
        }
        if !check_hom(&d.stages[*i], &d.stages[*j], h) {
            return Err(ColimitError::NotHomomorphism(k));
        }
        if i == j {
            if *h != Homomorphism::identity(&d.stages[*i]) {
                return Err(ColimitError::NonFunctorial { from: *i, to: *j });
            }
            continue;
        }
        indeg[*j] += 1;
        out[*i].push(k);
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = ready.pop() {
        order.push(v);
        for &k in &out[v] {
            let j = d.arrows[k].1;
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.push(j);
            }
        }
    }
    if order.len() < n {
        let v = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
        return Err(ColimitError::Cyclic(v));
    }
    let mut comp: Vec<Vec<Option<Homomorphism>>> = vec![vec![None; n]; n];
    for (i, row) in comp.iter_mut().enumerate() {
        row[i] = Some(Homomorphism::identity(&d.stages[i]));
    }
    for &a in &order {
        for &k in &out[a] {
            let (_, b, h) = &d.arrows[k];
            for i in 0..n {
                let Some(m) = comp[i][a].clone() else { continue };
                let candidate = m.then(h);
                match &comp[i][*b] {
                    Some(existing) if *existing != candidate => {
                        return Err(ColimitError::NonFunctorial { from: i, to: *b })
                    }
                    Some(_) => {}
                    None => comp[i][*b] = Some(candidate),
                }
            }
        }
    }
    Ok(comp)
}

/// Colimit of a diagram over a finite directed poset.
///
/// Elements are classes of the disjoint union of the stages, two elements
/// being identified when they meet in some later stage. A function is
/// defined on classes when some stage defines it on representatives.
pub fn chain_colimit(d: &Diagram) -> Result<Colimit, ColimitError> {
    let n = d.stages.len();
    if n == 0 {
        return Err(ColimitError::Empty);
    }
    let comp = composites(d)?;
    for i in 0..n {
        for j in i + 1..n {
            if !(0..n).any(|k| comp[i][k].is_some() && comp[j][k].is_some()) {
                return Err(ColimitError::NotDirected(i, j));
            }
        }
    }
    let sig = d.stages[0].signature().clone();
    if d.stages.iter().any(|m| **m.signature() != *sig) {
        return Err(StructureError::SignatureMismatch.into());
    }
    let nsorts = sig.sort_count();
    // Union-find over (stage, element) per sort.
    let mut result = PartialStructure::empty("colim", sig.clone());
    let mut class_of: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for s in 0..nsorts {
        let mut offset = Vec::with_capacity(n);
        let mut total = 0;
        for m in &d.stages {
            offset.push(total);
            total += m.carrier_size(s);
        }
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, j, h) in &d.arrows {
            for (a, &b) in h.maps[s].iter().enumerate() {
                let (x, y) = (find(&mut parent, offset[*i] + a), find(&mut parent, offset[*j] + b));
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
        let mut index_of_root = BTreeMap::new();
        for (i, m) in d.stages.iter().enumerate() {
            let mut row = Vec::with_capacity(m.carrier_size(s));
            for a in 0..m.carrier_size(s) {
                let root = find(&mut parent, offset[i] + a);
                let idx = match index_of_root.get(&root) {
                    Some(&idx) => idx,
                    None => {
                        let idx = result.add_element(s, format!("{}@{}", m.element_name(s, a), i))?;
                        index_of_root.insert(root, idx);
                        idx
                    }
                };
                row.push(idx);
            }
            if class_of[i].len() < nsorts {
                class_of[i].resize(nsorts, Vec::new());
            }
            class_of[i][s] = row;
        }
    }
    for (i, m) in d.stages.iter().enumerate() {
        for f in 0..sig.function_count() {
            let arg_sorts = m.function_arg_sorts(f);
            let rs = m.function_result_sort(f);
            for (args, &v) in m.function_table(f) {
                let cargs: Vec<usize> = args.iter().zip(&arg_sorts).map(|(&a, &s)| class_of[i][s][a]).collect();
                result
                    .set_function(f, cargs, class_of[i][rs][v])
                    .map_err(|_| ColimitError::Conflict(sig.function_at(f).name.clone()))?;
            }
        }
        for r in 0..sig.relation_count() {
            let sorts = m.relation_arg_sorts(r);
            for t in m.relation_table(r) {
                let ct: Vec<usize> = t.iter().zip(&sorts).map(|(&a, &s)| class_of[i][s][a]).collect();
                result.add_relation(r, ct)?;
            }
        }
    }
    let coprojections = class_of
        .into_iter()
        .map(|maps| Homomorphism { maps })
        .collect();
    Ok(Colimit {
        structure: result,
        coprojections,
    })
}
