//! Homotopy transfer onto cohomology (minimal model) by the tree formula.
//!
//! With a splitting `id − i∘p = μ¹∘h + h∘μ¹` on every hom space, set
//! λ₁ = i and, for d ≥ 2,
//! λ_d(x₁, …, x_d) = Σ_{k≥2} Σ_{d₁+…+d_k=d} μᵏ(T₁, …, T_k),
//! where T_j = i(x) for a single input and T_j = −h(λ_{d_j}) on a block.
//! The transferred operations are μ′ᵈ = p∘λ_d and the inclusion functor has
//! F¹ = i, Fᵈ = −h∘λ_d.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cell::RefCell;

use super::category::{mu_linear, AInfty};
use super::cohomology::{apply_linear, hom_splitting};
use super::functor::AInftyFunctor;
use super::relations::compositions;
use crate::error::{Error, Result};
use crate::glinalg::{GradedSpace, SparseVec, Splitting};
use crate::novikov::{Novikov, Rat};

/// The minimal A∞-structure on H(hom, μ¹) transferred from `source`.
pub struct TransferredModel<'a> {
    source: &'a dyn AInfty,
    arity_cap: usize,
    splittings: BTreeMap<(usize, usize), Splitting>,
    lambda: RefCell<BTreeMap<(Vec<usize>, Vec<usize>), SparseVec>>,
}

/// Builds the minimal model of `source` with operations up to `arity_cap`.
pub fn transfer_minimal_model(source: &dyn AInfty, arity_cap: usize) -> Result<TransferredModel<'_>> {
    if arity_cap > source.arity_cap() {
        return Err(Error::MissingArity(arity_cap));
    }
    let n = source.object_count();
    let mut splittings = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            splittings.insert((x, y), hom_splitting(source, x, y)?);
        }
    }
    Ok(TransferredModel { source, arity_cap, splittings, lambda: RefCell::new(BTreeMap::new()) })
}

impl<'a> TransferredModel<'a> {
    pub fn source(&self) -> &'a dyn AInfty {
        self.source
    }

    pub fn splitting(&self, x: usize, y: usize) -> &Splitting {
        &self.splittings[&(x, y)]
    }

    fn basis_vec(&self, i: usize) -> SparseVec {
        SparseVec::from([(i, Novikov::one(self.source.cutoff()))])
    }

    /// λ_d on basis elements of cohomology, as a chain in the source hom.
    pub fn lambda(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        let d = inputs.len();
        if d == 1 {
            return Ok(apply_linear(&self.splittings[&(chain[0], chain[1])].inclusion, &self.basis_vec(inputs[0])));
        }
        let key = (chain.to_vec(), inputs.to_vec());
        if let Some(v) = self.lambda.borrow().get(&key) {
            return Ok(v.clone());
        }
        let mut acc = SparseVec::new();
        for parts in compositions(d) {
            if parts.len() < 2 {
                continue;
            }
            if parts.len() > self.source.arity_cap() {
                return Err(Error::MissingArity(parts.len()));
            }
            let mut slots = Vec::with_capacity(parts.len());
            let mut outer_chain = alloc::vec![chain[0]];
            let mut start = 0;
            for &s in &parts {
                let v = if s == 1 {
                    self.lambda(&chain[start..=start + 1], &inputs[start..start + 1])?
                } else {
                    self.homotopy_block(&chain[start..=start + s], &inputs[start..start + s])?
                };
                slots.push(v);
                start += s;
                outer_chain.push(chain[start]);
            }
            if slots.iter().any(|v| v.is_empty()) {
                continue;
            }
            for (o, c) in mu_linear(self.source, &outer_chain, &slots)? {
                crate::glinalg::add_into(&mut acc, o, &c);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        self.lambda.borrow_mut().insert(key, acc.clone());
        Ok(acc)
    }

    /// −h(λ_d) on a block of inputs.
    fn homotopy_block(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        let l = self.lambda(chain, inputs)?;
        let h = &self.splittings[&(chain[0], chain[chain.len() - 1])].homotopy;
        Ok(apply_linear(h, &l).into_iter().map(|(o, c)| (o, c.neg_ref())).filter(|(_, c)| !c.is_zero()).collect())
    }
}

impl AInfty for TransferredModel<'_> {
    fn object_count(&self) -> usize {
        self.source.object_count()
    }
    fn object_name(&self, x: usize) -> String {
        self.source.object_name(x)
    }
    fn hom(&self, x: usize, y: usize) -> Arc<GradedSpace> {
        self.splittings[&(x, y)].cohomology.clone()
    }
    fn arity_cap(&self) -> usize {
        self.arity_cap
    }
    fn mu(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        let d = inputs.len();
        if d == 0 || d > self.arity_cap {
            return Err(Error::MissingArity(d));
        }
        if d == 1 {
            return Ok(SparseVec::new());
        }
        let l = self.lambda(chain, inputs)?;
        let p = &self.splittings[&(chain[0], chain[d])].projection;
        Ok(apply_linear(p, &l).into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
    fn cutoff(&self) -> Rat {
        self.source.cutoff()
    }
    fn unit(&self, x: usize) -> Option<usize> {
        let e = self.source.unit(x)?;
        let v = apply_linear(&self.splittings[&(x, x)].projection, &self.basis_vec(e));
        let (&i, c) = v.iter().next()?;
        (v.len() == 1 && *c == Novikov::one(c.cutoff().clone())).then_some(i)
    }
    fn differential_vanishes(&self) -> bool {
        true
    }
}

/// The A∞ quasi-isomorphism from the minimal model back into the source.
pub struct InclusionFunctor<'m, 'a> {
    pub model: &'m TransferredModel<'a>,
}

impl AInftyFunctor for InclusionFunctor<'_, '_> {
    fn source(&self) -> &dyn AInfty {
        self.model
    }
    fn target(&self) -> &dyn AInfty {
        self.model.source
    }
    fn map_object(&self, x: usize) -> usize {
        x
    }
    fn arity_cap(&self) -> usize {
        self.model.arity_cap
    }
    fn term(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        if inputs.len() == 1 {
            self.model.lambda(chain, inputs)
        } else {
            self.model.homotopy_block(chain, inputs)
        }
    }
}
