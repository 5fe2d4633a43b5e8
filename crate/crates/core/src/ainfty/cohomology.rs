//! The cohomology category: homs replaced by H(hom, μ¹), composition
//! [a₂]·[a₁] = (−1)^{|a₁|}[μ²(a₂, a₁)].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::category::{mu_linear, AInfty};
use crate::error::{Error, Result};
use crate::glinalg::{add_into, ChainComplex, GradedSpace, GradedTensor, SparseVec, Splitting};
use crate::novikov::{Novikov, Rat};

/// A graded linear category with an associative composition.
pub struct GradedCategory {
    names: Vec<String>,
    cutoff: Rat,
    homs: BTreeMap<(usize, usize), Arc<GradedSpace>>,
    splittings: BTreeMap<(usize, usize), Splitting>,
    /// product[(x, y, z)] on (a₁ ∈ hom(x,y), a₂ ∈ hom(y,z)).
    products: BTreeMap<(usize, usize, usize), GradedTensor>,
    units: BTreeMap<usize, SparseVec>,
}

/// Splits (hom(x, y), μ¹) into cohomology, or takes the identity splitting when μ¹ vanishes.
pub fn hom_splitting(cat: &dyn AInfty, x: usize, y: usize) -> Result<Splitting> {
    let space = cat.hom(x, y);
    let mut d = GradedTensor::new(alloc::vec![space.clone()], space.clone(), 1);
    if !cat.differential_vanishes() {
        for b in 0..space.dim() {
            for (o, c) in cat.mu(&[x, y], &[b])? {
                d.add_entry(&[b], o, &c)?;
            }
        }
    }
    let complex = ChainComplex::new(space, d)?;
    let s = complex.splitting()?;
    s.validate(&complex)?;
    Ok(s)
}

/// Applies an arity-1 tensor to a combination.
pub fn apply_linear(t: &GradedTensor, v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (&i, c) in v {
        if let Some(img) = t.get(&[i]) {
            for (&o, x) in img {
                add_into(&mut out, o, &x.mul_ref(c));
            }
        }
    }
    out
}

fn basis_vec(i: usize, cutoff: &Rat) -> SparseVec {
    SparseVec::from([(i, Novikov::one(cutoff.clone()))])
}

/// The cohomology category of `cat`, with products and units computed through a splitting.
pub fn cohomology_category(cat: &dyn AInfty) -> Result<GradedCategory> {
    let n = cat.object_count();
    let cutoff = cat.cutoff();
    let mut splittings = BTreeMap::new();
    let mut homs = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            let s = hom_splitting(cat, x, y)?;
            homs.insert((x, y), s.cohomology.clone());
            splittings.insert((x, y), s);
        }
    }
    let mut products = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (h1, h2, h3) = (&homs[&(x, y)], &homs[&(y, z)], &homs[&(x, z)]);
                let mut t = GradedTensor::new(alloc::vec![h1.clone(), h2.clone()], h3.clone(), 0);
                for a1 in 0..h1.dim() {
                    let i1 = apply_linear(&splittings[&(x, y)].inclusion, &basis_vec(a1, &cutoff));
                    for a2 in 0..h2.dim() {
                        let i2 = apply_linear(&splittings[&(y, z)].inclusion, &basis_vec(a2, &cutoff));
                        let m = mu_linear(cat, &[x, y, z], &[i1.clone(), i2])?;
                        let v = apply_linear(&splittings[&(x, z)].projection, &m);
                        let neg = h1.degree(a1).rem_euclid(2) == 1;
                        for (o, c) in v {
                            let c = if neg { c.neg_ref() } else { c };
                            t.add_entry(&[a1, a2], o, &c)?;
                        }
                    }
                }
                products.insert((x, y, z), t);
            }
        }
    }
    let mut units = BTreeMap::new();
    for x in 0..n {
        if let Some(e) = cat.unit(x) {
            units.insert(x, apply_linear(&splittings[&(x, x)].projection, &basis_vec(e, &cutoff)));
        }
    }
    Ok(GradedCategory { names: (0..n).map(|x| cat.object_name(x)).collect(), cutoff, homs, splittings, products, units })
}

impl GradedCategory {
    pub fn object_count(&self) -> usize {
        self.names.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn hom(&self, x: usize, y: usize) -> Arc<GradedSpace> {
        self.homs[&(x, y)].clone()
    }

    pub fn splitting(&self, x: usize, y: usize) -> &Splitting {
        &self.splittings[&(x, y)]
    }

    pub fn unit(&self, x: usize) -> Option<&SparseVec> {
        self.units.get(&x)
    }

    /// a₂·a₁ for a₁ ∈ hom(x,y), a₂ ∈ hom(y,z).
    pub fn compose(&self, x: usize, y: usize, z: usize, a1: &SparseVec, a2: &SparseVec) -> SparseVec {
        let t = &self.products[&(x, y, z)];
        let mut out = SparseVec::new();
        for (&i, c1) in a1 {
            for (&j, c2) in a2 {
                if let Some(v) = t.get(&[i, j]) {
                    let c = c1.mul_ref(c2);
                    for (&o, x) in v {
                        add_into(&mut out, o, &x.mul_ref(&c));
                    }
                }
            }
        }
        out
    }

    /// Exhaustive check of (a₃a₂)a₁ = a₃(a₂a₁) on basis elements.
    pub fn check_associative(&self) -> Result<()> {
        let n = self.object_count();
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let (h1, h2, h3) = (self.hom(w, x), self.hom(x, y), self.hom(y, z));
                        for a in 0..h1.dim() {
                            for b in 0..h2.dim() {
                                for c in 0..h3.dim() {
                                    let (va, vb, vc) = (basis_vec(a, &self.cutoff), basis_vec(b, &self.cutoff), basis_vec(c, &self.cutoff));
                                    let left = self.compose(w, y, z, &self.compose(w, x, y, &va, &vb), &vc);
                                    let right = self.compose(w, x, z, &va, &self.compose(x, y, z, &vb, &vc));
                                    if !vectors_equal(&left, &right) {
                                        return Err(Error::Invalid(alloc::format!(
                                            "composition is not associative on {}→{}→{}→{}",
                                            self.names[w], self.names[x], self.names[y], self.names[z]
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks e·a = a = a·e for every basis element and every unit present.
    pub fn check_unital(&self) -> Result<()> {
        let n = self.object_count();
        for x in 0..n {
            for y in 0..n {
                let h = self.hom(x, y);
                for a in 0..h.dim() {
                    let va = basis_vec(a, &self.cutoff);
                    if let Some(ey) = self.unit(y) {
                        if !vectors_equal(&self.compose(x, y, y, &va, ey), &va) {
                            return Err(Error::Invalid(alloc::format!("left unit fails at {}", self.names[y])));
                        }
                    }
                    if let Some(ex) = self.unit(x) {
                        if !vectors_equal(&self.compose(x, x, y, ex, &va), &va) {
                            return Err(Error::Invalid(alloc::format!("right unit fails at {}", self.names[x])));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Equality up to entries that are zero within the truncation.
pub fn vectors_equal(a: &SparseVec, b: &SparseVec) -> bool {
    let mut diff = a.clone();
    for (&i, c) in b {
        add_into(&mut diff, i, &c.neg_ref());
    }
    diff.values().all(|c| c.is_zero())
}
