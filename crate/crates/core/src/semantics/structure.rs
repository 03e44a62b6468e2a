use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::Signature;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("element `{element}` is not in the carrier of `{sort}`")]
    UnknownElement { sort: String, element: String },
    #[error("element `{element}` declared twice in the carrier of `{sort}`")]
    DuplicateElement { sort: String, element: String },
    #[error("`{symbol}` expects {expected} arguments, got {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("`{symbol}` is given two different values at the same arguments")]
    NotSingleValued { symbol: String },
    #[error("element index {index} out of range for sort `{sort}`")]
    IndexOutOfRange { sort: String, index: usize },
    #[error("product would have {size} elements, over the cap of {cap}")]
    ProductTooLarge { size: u128, cap: usize },
    #[error("structures have different signatures")]
    SignatureMismatch,
}

/// A finite partial Σ-structure.
///
/// Elements are addressed by their index inside the carrier of their sort;
/// every element also carries an opaque display name. Function tables hold
/// only defined entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialStructure {
    pub name: String,
    signature: Arc<Signature>,
    carriers: Vec<Vec<String>>,
    functions: Vec<BTreeMap<Vec<usize>, usize>>,
    relations: Vec<BTreeSet<Vec<usize>>>,
}

impl PartialStructure {
    /// The structure with empty carriers and tables.
    pub fn empty(name: impl Into<String>, signature: Arc<Signature>) -> Self {
        PartialStructure {
            name: name.into(),
            carriers: vec![Vec::new(); signature.sort_count()],
            functions: vec![BTreeMap::new(); signature.function_count()],
            relations: vec![BTreeSet::new(); signature.relation_count()],
            signature,
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn carrier(&self, sort: usize) -> &[String] {
        &self.carriers[sort]
    }

    pub fn carrier_size(&self, sort: usize) -> usize {
        self.carriers[sort].len()
    }

    pub fn carrier_sizes(&self) -> Vec<usize> {
        self.carriers.iter().map(Vec::len).collect()
    }

    /// Total number of elements across all sorts.
    pub fn size(&self) -> usize {
        self.carriers.iter().map(Vec::len).sum()
    }

    pub fn element_name(&self, sort: usize, index: usize) -> &str {
        &self.carriers[sort][index]
    }

    pub fn element_index(&self, sort: usize, name: &str) -> Option<usize> {
        self.carriers[sort].iter().position(|e| e == name)
    }

    pub fn add_element(&mut self, sort: usize, name: impl Into<String>) -> Result<usize, StructureError> {
        let name = name.into();
        if self.element_index(sort, &name).is_some() {
            return Err(StructureError::DuplicateElement {
                sort: self.signature.sort_name(sort).to_owned(),
                element: name,
            });
        }
        self.carriers[sort].push(name);
        Ok(self.carriers[sort].len() - 1)
    }

    /// Adds `n` elements named by `namer(i)`.
    pub fn add_elements(&mut self, sort: usize, n: usize, namer: impl Fn(usize) -> String) -> Result<(), StructureError> {
        for i in 0..n {
            self.add_element(sort, namer(i))?;
        }
        Ok(())
    }

    fn check_tuple(&self, symbol: &str, sorts: &[usize], tuple: &[usize]) -> Result<(), StructureError> {
        if sorts.len() != tuple.len() {
            return Err(StructureError::Arity {
                symbol: symbol.to_owned(),
                expected: sorts.len(),
                found: tuple.len(),
            });
        }
        for (&s, &e) in sorts.iter().zip(tuple) {
            if e >= self.carriers[s].len() {
                return Err(StructureError::IndexOutOfRange {
                    sort: self.signature.sort_name(s).to_owned(),
                    index: e,
                });
            }
        }
        Ok(())
    }

    /// Argument sort indices of function `f`.
    pub fn function_arg_sorts(&self, f: usize) -> Vec<usize> {
        sort_indices(&self.signature, &self.signature.function_at(f).args)
    }

    pub fn function_result_sort(&self, f: usize) -> usize {
        self.signature.sort_index(&self.signature.function_at(f).result).expect("declared sort")
    }

    pub fn relation_arg_sorts(&self, r: usize) -> Vec<usize> {
        sort_indices(&self.signature, &self.signature.relation_at(r).args)
    }

    /// Defines `f(args) = value`. Redefining with the same value is accepted.
    pub fn set_function(&mut self, f: usize, args: Vec<usize>, value: usize) -> Result<(), StructureError> {
        let sym = self.signature.function_at(f).name.clone();
        self.check_tuple(&sym, &self.function_arg_sorts(f), &args)?;
        let rs = self.function_result_sort(f);
        self.check_tuple(&sym, &[rs], &[value])?;
        match self.functions[f].get(&args) {
            Some(&v) if v != value => Err(StructureError::NotSingleValued { symbol: sym }),
            _ => {
                self.functions[f].insert(args, value);
                Ok(())
            }
        }
    }

    pub fn add_relation(&mut self, r: usize, tuple: Vec<usize>) -> Result<(), StructureError> {
        let sym = self.signature.relation_at(r).name.clone();
        self.check_tuple(&sym, &self.relation_arg_sorts(r), &tuple)?;
        self.relations[r].insert(tuple);
        Ok(())
    }

    /// Name-based variant of [`set_function`](Self::set_function).
    pub fn define(&mut self, f: &str, args: &[&str], value: &str) -> Result<(), StructureError> {
        let fi = self
            .signature
            .function_index(f)
            .ok_or_else(|| StructureError::UnknownSymbol(f.to_owned()))?;
        let arg_sorts = self.function_arg_sorts(fi);
        if arg_sorts.len() != args.len() {
            return Err(StructureError::Arity {
                symbol: f.to_owned(),
                expected: arg_sorts.len(),
                found: args.len(),
            });
        }
        let args = arg_sorts
            .iter()
            .zip(args)
            .map(|(&s, a)| self.lookup(s, a))
            .collect::<Result<Vec<_>, _>>()?;
        let value = self.lookup(self.function_result_sort(fi), value)?;
        self.set_function(fi, args, value)
    }

    /// Name-based variant of [`add_relation`](Self::add_relation).
    pub fn relate(&mut self, r: &str, args: &[&str]) -> Result<(), StructureError> {
        let ri = self
            .signature
            .relation_index(r)
            .ok_or_else(|| StructureError::UnknownSymbol(r.to_owned()))?;
        let sorts = self.relation_arg_sorts(ri);
        if sorts.len() != args.len() {
            return Err(StructureError::Arity {
                symbol: r.to_owned(),
                expected: sorts.len(),
                found: args.len(),
            });
        }
        let tuple = sorts
            .iter()
            .zip(args)
            .map(|(&s, a)| self.lookup(s, a))
            .collect::<Result<Vec<_>, _>>()?;
        self.add_relation(ri, tuple)
    }

    pub fn lookup(&self, sort: usize, name: &str) -> Result<usize, StructureError> {
        self.element_index(sort, name).ok_or_else(|| StructureError::UnknownElement {
            sort: self.signature.sort_name(sort).to_owned(),
            element: name.to_owned(),
        })
    }

    pub fn function_value(&self, f: usize, args: &[usize]) -> Option<usize> {
        self.functions[f].get(args).copied()
    }

    pub fn relation_holds(&self, r: usize, tuple: &[usize]) -> bool {
        self.relations[r].contains(tuple)
    }

    pub fn function_table(&self, f: usize) -> &BTreeMap<Vec<usize>, usize> {
        &self.functions[f]
    }

    pub fn relation_table(&self, r: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[r]
    }

    /// Removes every table entry of function `f`.
    pub fn clear_function(&mut self, f: usize) {
        self.functions[f].clear();
    }

    /// Renames the elements of a sort; the new names must be distinct.
    pub fn rename_elements(&mut self, sort: usize, names: Vec<String>) {
        assert_eq!(names.len(), self.carriers[sort].len());
        self.carriers[sort] = names;
    }

    /// A compact description of the shape, useful for bucketing before an isomorphism search.
    pub fn fingerprint(&self) -> Fingerprint {
        let mut degree = Vec::new();
        for (f, table) in self.functions.iter().enumerate() {
            let mut image_counts = vec![0usize; self.carriers[self.function_result_sort(f)].len()];
            for &v in table.values() {
                image_counts[v] += 1;
            }
            image_counts.sort_unstable();
            degree.push((table.len(), image_counts));
        }
        let mut rel = Vec::new();
        for table in &self.relations {
            let diag = table.iter().filter(|t| t.windows(2).all(|w| w[0] == w[1])).count();
            rel.push((table.len(), diag));
        }
        Fingerprint {
            sizes: self.carrier_sizes(),
            functions: degree,
            relations: rel,
        }
    }

    /// Replaces the signature by an equal one (used when structures cross
    /// module boundaries with separately built but identical signatures).
    pub fn with_signature(mut self, signature: Arc<Signature>) -> Result<Self, StructureError> {
        if *signature != *self.signature {
            return Err(StructureError::SignatureMismatch);
        }
        self.signature = signature;
        Ok(self)
    }
}

/// Isomorphism-invariant summary of a structure.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub sizes: Vec<usize>,
    pub functions: Vec<(usize, Vec<usize>)>,
    pub relations: Vec<(usize, usize)>,
}

pub(crate) fn sort_indices(sig: &Signature, sorts: &[String]) -> Vec<usize> {
    sorts.iter().map(|s| sig.sort_index(s).expect("declared sort")).collect()
}

/// Odometer over the cartesian product of `0..sizes[i]`.
pub fn for_each_tuple(sizes: &[usize], mut f: impl FnMut(&[usize]) -> bool) {
    if sizes.contains(&0) {
        return;
    }
    let mut t = vec![0usize; sizes.len()];
    loop {
        if !f(&t) {
            return;
        }
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < sizes[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

/// [`for_each_tuple`] without early exit.
pub(crate) fn for_each_tuple_or_unit(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    for_each_tuple(sizes, |t| {
        f(t);
        true
    });
}
