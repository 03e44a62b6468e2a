//! Theory morphisms and the functors they induce, relative theories with
//! their associated partial Horn theories, and the translation of finite
//! limit sketches.

mod morphism;
mod relative;
mod sketch;

pub use morphism::{
    morphism_header, parse_morphism, print_morphism, MorphismError, MorphismReport, Obligation, TheoryMorphism, U_rho,
};
pub use relative::{
    is_algebra, morphism_equivalent, parse_relative, pht_of, print_relative, relative_header, EquivalenceReport,
    Operator, RelativeError, RelativeMorphism, RelativeMorphismError, RelativeTheory,
};
pub use sketch::{parse_sketch, print_sketch, sketch_models, sketch_to_pht, Arrow, Cone, Sketch, SketchError};

use crate::freemodel::{representing_model, FreeModelError, ModelPresentation};
use crate::semantics::{count_homs, PartialStructure};

/// The left adjoint of [`U_rho`] on presentations: the translated formula
/// in the translated context, saturated over the target theory.
#[allow(non_snake_case)]
pub fn F_rho(rho: &TheoryMorphism, p: &ModelPresentation, depth: usize) -> Result<ModelPresentation, FreeModelError> {
    let bad = |e: MorphismError| FreeModelError::IllFormed(e.to_string());
    let ctx = rho.translate_context(&p.context).map_err(bad)?;
    let phi = rho.translate_formula(&p.constraint).map_err(bad)?;
    representing_model(&rho.target, &ctx, &phi, depth)
}

/// Both sides of the adjunction bijection at a presentation and a target
/// model: homomorphisms out of the translated presentation, and
/// homomorphisms from the presentation into the reduct.
pub fn adjunction_counts(
    rho: &TheoryMorphism,
    p: &ModelPresentation,
    m: &PartialStructure,
    depth: usize,
) -> Result<(usize, usize), FreeModelError> {
    let free = F_rho(rho, p, depth)?;
    if !free.is_saturated() {
        return Err(FreeModelError::Truncated(free.status));
    }
    let reduct = rho.reduct(m).map_err(|e| FreeModelError::IllFormed(e.to_string()))?;
    Ok((count_homs(&free.structure, m), count_homs(&p.structure, &reduct)))
}
