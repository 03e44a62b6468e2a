//! Closed monomorphisms, dense maps and the factorization they form.
//!
//! A homomorphism `h : A -> B` is a closed mono when it is injective and
//! reflects both definedness and relations: whenever `f(h a)` is defined in
//! `B`, `f(a)` is already defined in `A`. It is dense when the closed
//! submodel of `B` generated by its image is all of `B`. Every map factors
//! as a dense map followed by a closed mono through the closed submodel
//! generated by its image.

use thiserror::Error;

use crate::freemodel::{representing_model, FreeModelError, ModelPresentation};
use crate::semantics::{hom_violation, visit_homs, Homomorphism, PartialStructure};
use crate::syntax::{Formula, Sequent, Theory};
use crate::translation::{MorphismError, TheoryMorphism};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphologyError {
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not a monomorphism: two elements of sort `{0}` share an image")]
    NotMono(String),
    #[error("the subset does not match the carriers of the structure")]
    SubsetShape,
    #[error(transparent)]
    Translation(#[from] MorphismError),
}

fn require_hom(src: &PartialStructure, tgt: &PartialStructure, h: &Homomorphism) -> Result<(), MorphologyError> {
    match hom_violation(src, tgt, h) {
        Some(why) => Err(MorphologyError::NotAHomomorphism(why)),
        None => Ok(()),
    }
}

/// Whether an injective homomorphism reflects definedness and relations.
pub fn is_closed_mono(src: &PartialStructure, tgt: &PartialStructure, h: &Homomorphism) -> Result<bool, MorphologyError> {
    require_hom(src, tgt, h)?;
    let sig = src.signature();
    // Preimages of target elements, per sort.
    let mut pre: Vec<Vec<Option<usize>>> = Vec::with_capacity(sig.sort_count());
    for (s, m) in h.maps.iter().enumerate() {
        let mut row = vec![None; tgt.carrier_size(s)];
        for (a, &b) in m.iter().enumerate() {
            if row[b].replace(a).is_some() {
                return Err(MorphologyError::NotMono(sig.sort_name(s).to_owned()));
            }
        }
        pre.push(row);
    }
    let pull = |sorts: &[usize], t: &[usize]| -> Option<Vec<usize>> {
        t.iter().zip(sorts).map(|(&b, &s)| pre[s][b]).collect()
    };
    for f in 0..sig.function_count() {
        let sorts = tgt.function_arg_sorts(f);
        for args in tgt.function_table(f).keys() {
            if let Some(a) = pull(&sorts, args) {
                if src.function_value(f, &a).is_none() {
                    return Ok(false);
                }
            }
        }
    }
    for r in 0..sig.relation_count() {
        let sorts = tgt.relation_arg_sorts(r);
        for t in tgt.relation_table(r) {
            if let Some(a) = pull(&sorts, t) {
                if !src.relation_holds(r, &a) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The least subset containing `seed` and closed under the function tables of `b`.
pub fn generated_subset(b: &PartialStructure, seed: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, MorphologyError> {
    if seed.len() != b.signature().sort_count() || seed.iter().enumerate().any(|(s, v)| v.len() != b.carrier_size(s)) {
        return Err(MorphologyError::SubsetShape);
    }
    let sig = b.signature();
    let mut inside = seed.to_vec();
    loop {
        let mut grew = false;
        for f in 0..sig.function_count() {
            let sorts = b.function_arg_sorts(f);
            let rs = b.function_result_sort(f);
            for (args, &v) in b.function_table(f) {
                if !inside[rs][v] && args.iter().zip(&sorts).all(|(&a, &s)| inside[s][a]) {
                    inside[rs][v] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(inside);
        }
    }
}

/// The substructure on a subset, with the induced tables and its inclusion.
///
/// Elements keep their names and relative order. Function entries are kept
/// when their arguments and value all lie in the subset.
pub fn induced_substructure(b: &PartialStructure, subset: &[Vec<bool>]) -> (PartialStructure, Homomorphism) {
    let sig = b.signature();
    let mut sub = PartialStructure::empty(format!("{}_sub", b.name), sig.clone());
    let mut index: Vec<Vec<Option<usize>>> = Vec::with_capacity(sig.sort_count());
    let mut maps = Vec::with_capacity(sig.sort_count());
    for s in 0..sig.sort_count() {
        let mut idx = vec![None; b.carrier_size(s)];
        let mut incl = Vec::new();
        for e in (0..b.carrier_size(s)).filter(|&e| subset[s][e]) {
            idx[e] = Some(sub.add_element(s, b.element_name(s, e)).expect("distinct names"));
            incl.push(e);
        }
        index.push(idx);
        maps.push(incl);
    }
    let pull = |sorts: &[usize], t: &[usize]| -> Option<Vec<usize>> {
        t.iter().zip(sorts).map(|(&e, &s)| index[s][e]).collect()
    };
    for f in 0..sig.function_count() {
        let sorts = b.function_arg_sorts(f);
        let rs = b.function_result_sort(f);
        for (args, &v) in b.function_table(f) {
            if let (Some(a), Some(v)) = (pull(&sorts, args), index[rs][v]) {
                sub.set_function(f, a, v).expect("in range");
            }
        }
    }
    for r in 0..sig.relation_count() {
        let sorts = b.relation_arg_sorts(r);
        for t in b.relation_table(r) {
            if let Some(a) = pull(&sorts, t) {
                sub.add_relation(r, a).expect("in range");
            }
        }
    }
    (sub, Homomorphism { maps })
}

/// The smallest closed submodel of `b` containing `seed`, with its inclusion.
pub fn closed_submodel_generated(
    b: &PartialStructure,
    seed: &[Vec<bool>],
) -> Result<(PartialStructure, Homomorphism), MorphologyError> {
    let inside = generated_subset(b, seed)?;
    Ok(induced_substructure(b, &inside))
}

/// Whether the image of `h` generates its codomain.
pub fn is_dense(src: &PartialStructure, tgt: &PartialStructure, h: &Homomorphism) -> Result<bool, MorphologyError> {
    require_hom(src, tgt, h)?;
    let inside = generated_subset(tgt, &h.image(tgt))?;
    Ok(inside.iter().all(|v| v.iter().all(|&b| b)))
}

pub fn is_surjective(src: &PartialStructure, tgt: &PartialStructure, h: &Homomorphism) -> Result<bool, MorphologyError> {
    require_hom(src, tgt, h)?;
    Ok(h.is_surjective_onto(tgt))
}

/// A map split as `closed_mono ∘ dense` through `mid`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationResult {
    pub dense: Homomorphism,
    pub closed_mono: Homomorphism,
    pub mid: PartialStructure,
}

pub fn factorize(
    src: &PartialStructure,
    tgt: &PartialStructure,
    h: &Homomorphism,
) -> Result<FactorizationResult, MorphologyError> {
    require_hom(src, tgt, h)?;
    let (mid, closed_mono) = closed_submodel_generated(tgt, &h.image(tgt))?;
    let position: Vec<Vec<usize>> = closed_mono
        .maps
        .iter()
        .enumerate()
        .map(|(s, incl)| {
            let mut pos = vec![usize::MAX; tgt.carrier_size(s)];
            incl.iter().enumerate().for_each(|(i, &e)| pos[e] = i);
            pos
        })
        .collect();
    let dense = Homomorphism {
        maps: h
            .maps
            .iter()
            .enumerate()
            .map(|(s, m)| m.iter().map(|&e| position[s][e]).collect())
            .collect(),
    };
    Ok(FactorizationResult {
        dense,
        closed_mono,
        mid,
    })
}

/// Every `d : b -> c` with `d ∘ e = u` and `m ∘ d = v`, for the square
/// `e : a -> b`, `m : c -> d_obj`, `u : a -> c`, `v : b -> d_obj`.
pub fn diagonal_fillers(
    b: &PartialStructure,
    c: &PartialStructure,
    e: &Homomorphism,
    m: &Homomorphism,
    u: &Homomorphism,
    v: &Homomorphism,
) -> Vec<Homomorphism> {
    let mut out = Vec::new();
    visit_homs(b, c, false, |d| {
        if e.then(d) == *u && d.then(m) == *v {
            out.push(d.clone());
        }
        true
    });
    out
}

/// Whether every homomorphism `dom(e) -> m` factors through `e : a -> b`
/// in exactly one way.
pub fn orthogonal(
    m: &PartialStructure,
    a: &PartialStructure,
    b: &PartialStructure,
    e: &Homomorphism,
) -> Result<bool, MorphologyError> {
    require_hom(a, b, e)?;
    let mut through = std::collections::HashMap::<Homomorphism, usize>::new();
    visit_homs(b, m, false, |k| {
        *through.entry(e.then(k)).or_default() += 1;
        true
    });
    let mut ok = true;
    visit_homs(a, m, false, |g| {
        ok = through.get(g) == Some(&1);
        ok
    });
    Ok(ok)
}

/// A section `s` of `h` (so that `h ∘ s` is the identity), if one exists.
pub fn is_retraction(
    src: &PartialStructure,
    tgt: &PartialStructure,
    h: &Homomorphism,
) -> Result<Option<Homomorphism>, MorphologyError> {
    require_hom(src, tgt, h)?;
    Ok(section_of(src, tgt, h))
}

fn section_of(src: &PartialStructure, tgt: &PartialStructure, h: &Homomorphism) -> Option<Homomorphism> {
    if !h.is_surjective_onto(tgt) {
        return None;
    }
    let id = Homomorphism::identity(tgt);
    let mut found = None;
    visit_homs(tgt, src, true, |s| {
        if s.then(h) == id {
            found = Some(s.clone());
        }
        found.is_none()
    });
    found
}

/// A section of `U h` where `U` forgets along `rho`, if one exists.
pub fn is_u_retraction(
    rho: &TheoryMorphism,
    src: &PartialStructure,
    tgt: &PartialStructure,
    h: &Homomorphism,
) -> Result<Option<Homomorphism>, MorphologyError> {
    require_hom(src, tgt, h)?;
    let us = rho.reduct(src)?;
    let ut = rho.reduct(tgt)?;
    let uh = rho.reduct_hom(h)?;
    Ok(section_of(&us, &ut, &uh))
}

/// The comparison map `⌜x.φ⌝ -> ⌜x.φ ∧ ψ⌝` of a sequent `φ ⊢ ψ`.
///
/// A model satisfies the sequent exactly when it is orthogonal to this map.
#[derive(Clone, Debug)]
pub struct SequentArrow {
    pub premise: ModelPresentation,
    pub both: ModelPresentation,
    pub map: Homomorphism,
}

impl SequentArrow {
    pub fn is_saturated(&self) -> bool {
        self.premise.is_saturated() && self.both.is_saturated()
    }

    pub fn orthogonal(&self, m: &PartialStructure) -> Result<bool, MorphologyError> {
        orthogonal(m, &self.premise.structure, &self.both.structure, &self.map)
    }
}

pub fn sequent_arrow(theory: &Theory, s: &Sequent, depth: usize) -> Result<SequentArrow, FreeModelError> {
    let premise = representing_model(theory, &s.context, &s.premise, depth)?;
    let conj = Formula::Conj(vec![s.premise.clone(), s.conclusion.clone()]);
    let both = representing_model(theory, &s.context, &conj, depth)?;
    if !premise.is_saturated() {
        return Err(FreeModelError::Truncated(premise.status));
    }
    if !both.is_saturated() {
        return Err(FreeModelError::Truncated(both.status));
    }
    let mut maps = Vec::with_capacity(premise.representatives.len());
    for reps in &premise.representatives {
        let mut row = Vec::with_capacity(reps.len());
        for t in reps {
            match both.element(t)? {
                Some((_, e)) => row.push(e),
                None => return Err(FreeModelError::Undefined(t.to_string())),
            }
        }
        maps.push(row);
    }
    let map = Homomorphism { maps };
    if let Some(why) = hom_violation(&premise.structure, &both.structure, &map) {
        return Err(FreeModelError::NotAHomomorphism(why));
    }
    Ok(SequentArrow { premise, both, map })
}
