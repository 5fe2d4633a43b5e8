use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::category::AInfty;
use crate::error::{Error, Result};
use crate::glinalg::{add_into, SparseVec};
use crate::novikov::Novikov;

/// An A∞-functor given by its terms Fᵈ of degree 1 − d.
pub trait AInftyFunctor {
    fn source(&self) -> &dyn AInfty;
    fn target(&self) -> &dyn AInfty;
    fn map_object(&self, x: usize) -> usize;
    fn arity_cap(&self) -> usize;
    /// Fᵈ on basis elements of the source chain.
    fn term(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec>;
}

/// The identity functor: F¹ = id, higher terms zero.
pub struct IdentityFunctor<'a> {
    pub cat: &'a dyn AInfty,
}

impl AInftyFunctor for IdentityFunctor<'_> {
    fn source(&self) -> &dyn AInfty {
        self.cat
    }
    fn target(&self) -> &dyn AInfty {
        self.cat
    }
    fn map_object(&self, x: usize) -> usize {
        x
    }
    fn arity_cap(&self) -> usize {
        usize::MAX
    }
    fn term(&self, _chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        if inputs.len() == 1 {
            Ok(SparseVec::from([(inputs[0], Novikov::one(self.cat.cutoff()))]))
        } else {
            Ok(SparseVec::new())
        }
    }
}

/// A functor stored as explicit tables keyed by (source chain, inputs).
pub struct TableFunctor<'a> {
    source: &'a dyn AInfty,
    target: &'a dyn AInfty,
    objects: Vec<usize>,
    arity_cap: usize,
    terms: BTreeMap<(Vec<usize>, Vec<usize>), SparseVec>,
}

impl<'a> TableFunctor<'a> {
    pub fn new(source: &'a dyn AInfty, target: &'a dyn AInfty, objects: Vec<usize>, arity_cap: usize) -> Result<Self> {
        if objects.len() != source.object_count() || objects.iter().any(|&y| y >= target.object_count()) {
            return Err(Error::Mismatch(String::from("object map does not fit the categories")));
        }
        Ok(TableFunctor { source, target, objects, arity_cap, terms: BTreeMap::new() })
    }

    /// Adds `c · out` to Fᵈ(inputs), checking the degree 1 − d.
    pub fn add_term(&mut self, chain: &[usize], inputs: &[usize], out: usize, c: &Novikov) -> Result<()> {
        let d = inputs.len();
        if chain.len() != d + 1 || d == 0 || d > self.arity_cap {
            return Err(Error::Mismatch(String::from("functor term shape")));
        }
        let in_deg: i32 = (0..d).map(|i| self.source.hom(chain[i], chain[i + 1]).degree(inputs[i])).sum();
        let target_space = self.target.hom(self.objects[chain[0]], self.objects[chain[d]]);
        if target_space.degree(out) != in_deg + 1 - d as i32 {
            return Err(Error::Mismatch(String::from("functor term of the wrong degree")));
        }
        let slot = self.terms.entry((chain.to_vec(), inputs.to_vec())).or_default();
        add_into(slot, out, c);
        Ok(())
    }
}

impl AInftyFunctor for TableFunctor<'_> {
    fn source(&self) -> &dyn AInfty {
        self.source
    }
    fn target(&self) -> &dyn AInfty {
        self.target
    }
    fn map_object(&self, x: usize) -> usize {
        self.objects[x]
    }
    fn arity_cap(&self) -> usize {
        self.arity_cap
    }
    fn term(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        if inputs.len() > self.arity_cap {
            return Ok(SparseVec::new());
        }
        Ok(self.terms.get(&(chain.to_vec(), inputs.to_vec())).cloned().unwrap_or_default())
    }
}
