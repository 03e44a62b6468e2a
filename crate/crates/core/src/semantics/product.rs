use super::hom::Homomorphism;
use super::structure::{PartialStructure, StructureError};

/// Default bound on the total number of elements of a product.
pub const DEFAULT_PRODUCT_CAP: usize = 100_000;

/// Componentwise product of structures over one signature.
///
/// The product of no factors is the terminal structure: one element per sort,
/// every function total and every relation full.
pub fn product(factors: &[PartialStructure], cap: usize) -> Result<PartialStructure, StructureError> {
    product_with_projections(factors, cap).map(|(p, _)| p)
}

/// The product together with its projection homomorphisms.
pub fn product_with_projections(
    factors: &[PartialStructure],
    cap: usize,
) -> Result<(PartialStructure, Vec<Homomorphism>), StructureError> {
    let Some(first) = factors.first() else {
        return Err(StructureError::SignatureMismatch);
    };
    product_over(first.signature().clone(), factors, cap)
}

/// Like [`product_with_projections`] but also accepts an empty list of factors.
pub fn product_over(
    sig: std::sync::Arc<crate::syntax::Signature>,
    factors: &[PartialStructure],
    cap: usize,
) -> Result<(PartialStructure, Vec<Homomorphism>), StructureError> {
    if factors.iter().any(|m| **m.signature() != *sig) {
        return Err(StructureError::SignatureMismatch);
    }
    let nsorts = sig.sort_count();
    let mut total: u128 = 0;
    let mut sizes = Vec::with_capacity(nsorts);
    for s in 0..nsorts {
        let n: u128 = factors.iter().map(|m| m.carrier_size(s) as u128).product();
        total += n;
        sizes.push(n);
    }
    if total > cap as u128 {
        return Err(StructureError::ProductTooLarge { size: total, cap });
    }
    let name = if factors.is_empty() {
        "1".to_owned()
    } else {
        factors.iter().map(|m| m.name.as_str()).collect::<Vec<_>>().join("x")
    };
    let mut out = PartialStructure::empty(name, sig.clone());
    // Mixed-radix encoding: the first factor is the most significant digit.
    let encode = |s: usize, coords: &[usize]| -> usize {
        coords
            .iter()
            .zip(factors)
            .fold(0usize, |acc, (&c, m)| acc * m.carrier_size(s) + c)
    };
    for s in 0..nsorts {
        let radices: Vec<usize> = factors.iter().map(|m| m.carrier_size(s)).collect();
        let mut names = Vec::with_capacity(sizes[s] as usize);
        super::structure::for_each_tuple_or_unit(&radices, |coords| {
            let parts: Vec<&str> = coords
                .iter()
                .zip(factors)
                .map(|(&c, m)| m.element_name(s, c))
                .collect();
            names.push(format!("({})", parts.join(",")));
        });
        for n in names {
            out.add_element(s, n)?;
        }
    }
    for f in 0..sig.function_count() {
        let arg_sorts = out.function_arg_sorts(f);
        let rs = out.function_result_sort(f);
        let tables: Vec<Vec<(&Vec<usize>, &usize)>> =
            factors.iter().map(|m| m.function_table(f).iter().collect()).collect();
        let radices: Vec<usize> = tables.iter().map(Vec::len).collect();
        let mut entries = Vec::new();
        super::structure::for_each_tuple_or_unit(&radices, |choice| {
            let args: Vec<usize> = (0..arg_sorts.len())
                .map(|j| {
                    let coords: Vec<usize> = choice.iter().zip(&tables).map(|(&c, t)| t[c].0[j]).collect();
                    encode(arg_sorts[j], &coords)
                })
                .collect();
            let coords: Vec<usize> = choice.iter().zip(&tables).map(|(&c, t)| *t[c].1).collect();
            entries.push((args, encode(rs, &coords)));
        });
        for (args, v) in entries {
            out.set_function(f, args, v)?;
        }
    }
    for r in 0..sig.relation_count() {
        let sorts = out.relation_arg_sorts(r);
        let tables: Vec<Vec<&Vec<usize>>> = factors.iter().map(|m| m.relation_table(r).iter().collect()).collect();
        let radices: Vec<usize> = tables.iter().map(Vec::len).collect();
        let mut tuples = Vec::new();
        super::structure::for_each_tuple_or_unit(&radices, |choice| {
            let t: Vec<usize> = (0..sorts.len())
                .map(|j| {
                    let coords: Vec<usize> = choice.iter().zip(&tables).map(|(&c, t)| t[c][j]).collect();
                    encode(sorts[j], &coords)
                })
                .collect();
            tuples.push(t);
        });
        for t in tuples {
            out.add_relation(r, t)?;
        }
    }
    let projections = (0..factors.len())
        .map(|i| Homomorphism {
            maps: (0..nsorts)
                .map(|s| {
                    let radices: Vec<usize> = factors.iter().map(|m| m.carrier_size(s)).collect();
                    let mut proj = Vec::new();
                    super::structure::for_each_tuple_or_unit(&radices, |coords| proj.push(coords[i]));
                    proj
                })
                .collect(),
        })
        .collect();
    Ok((out, projections))
}
