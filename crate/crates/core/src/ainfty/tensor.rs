//! Tensor product of a graded linear category with an A∞-category:
//! μᵈ(c₁⊗x₁, …, c_d⊗x_d) = (−1)^△ (c_d⋯c₁) ⊗ μᵈ(x₁, …, x_d) with
//! △ = Σ_{i<j} |cᵢ|(|xⱼ| + 1), inputs indexed in composition order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::category::AInfty;
use super::cohomology::GradedCategory;
use crate::error::{Error, Result};
use crate::glinalg::{add_into, GradedSpace, SparseVec};
use crate::novikov::{Novikov, Rat};

/// Objects are pairs (left object, right object).
pub struct TensorCategory<A: AInfty> {
    left: GradedCategory,
    right: A,
    objects: Vec<(String, usize, usize)>,
    homs: BTreeMap<(usize, usize), Arc<GradedSpace>>,
}

impl<A: AInfty> TensorCategory<A> {
    pub fn new(left: GradedCategory, right: A, objects: Vec<(String, usize, usize)>) -> Result<Self> {
        for (name, l, r) in &objects {
            if *l >= left.object_count() || *r >= right.object_count() {
                return Err(Error::Mismatch(format!("{name} names an object outside the factors")));
            }
        }
        let mut homs = BTreeMap::new();
        for (x, (_, lx, rx)) in objects.iter().enumerate() {
            for (y, (_, ly, ry)) in objects.iter().enumerate() {
                let (hl, hr) = (left.hom(*lx, *ly), right.hom(*rx, *ry));
                let mut basis = Vec::new();
                for i in 0..hl.dim() {
                    for j in 0..hr.dim() {
                        basis.push((format!("{}⊗{}", hl.label(i), hr.label(j)), hl.degree(i) + hr.degree(j)));
                    }
                }
                homs.insert((x, y), Arc::new(GradedSpace::new(basis)?));
            }
        }
        Ok(TensorCategory { left, right, objects, homs })
    }

    pub fn left(&self) -> &GradedCategory {
        &self.left
    }

    pub fn right(&self) -> &A {
        &self.right
    }

    /// Splits a basis index of hom(x, y) into its left and right factors.
    pub fn factors(&self, x: usize, y: usize, i: usize) -> (usize, usize) {
        let n = self.right.hom(self.objects[x].2, self.objects[y].2).dim();
        (i / n, i % n)
    }
}

impl<A: AInfty> AInfty for TensorCategory<A> {
    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn object_name(&self, x: usize) -> String {
        self.objects[x].0.clone()
    }
    fn hom(&self, x: usize, y: usize) -> Arc<GradedSpace> {
        self.homs[&(x, y)].clone()
    }
    fn arity_cap(&self) -> usize {
        self.right.arity_cap()
    }
    fn mu(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        let d = inputs.len();
        let lefts: Vec<usize> = chain.iter().map(|&x| self.objects[x].1).collect();
        let rights: Vec<usize> = chain.iter().map(|&x| self.objects[x].2).collect();
        let cutoff = self.right.cutoff();
        let mut left_prod = SparseVec::from([(usize::MAX, Novikov::one(cutoff.clone()))]);
        let mut right_inputs = Vec::with_capacity(d);
        let mut left_degrees = Vec::with_capacity(d);
        let mut right_degrees = Vec::with_capacity(d);
        for m in 0..d {
            let (l, r) = self.factors(chain[m], chain[m + 1], inputs[m]);
            left_degrees.push(self.left.hom(lefts[m], lefts[m + 1]).degree(l));
            right_degrees.push(self.right.hom(rights[m], rights[m + 1]).degree(r));
            right_inputs.push(r);
            let lv = SparseVec::from([(l, Novikov::one(cutoff.clone()))]);
            left_prod = if m == 0 { lv } else { self.left.compose(lefts[0], lefts[m], lefts[m + 1], &left_prod, &lv) };
            if left_prod.is_empty() {
                return Ok(SparseVec::new());
            }
        }
        let right = self.right.mu(&rights, &right_inputs)?;
        if right.is_empty() {
            return Ok(SparseVec::new());
        }
        let mut sign = 0;
        for i in 0..d {
            for j in i + 1..d {
                sign += left_degrees[i] * (right_degrees[j] + 1);
            }
        }
        let n = self.right.hom(rights[0], rights[d]).dim();
        let mut out = SparseVec::new();
        for (&l, cl) in &left_prod {
            for (r, cr) in &right {
                let c = cl.mul_ref(cr);
                add_into(&mut out, l * n + r, &if sign.rem_euclid(2) == 1 { c.neg_ref() } else { c });
            }
        }
        Ok(out)
    }
    fn cutoff(&self) -> Rat {
        self.right.cutoff()
    }
    fn unit(&self, x: usize) -> Option<usize> {
        let (_, l, r) = self.objects[x];
        let el = self.left.unit(l)?;
        if el.len() != 1 || !el.values().all(|c| *c == Novikov::one(c.cutoff().clone())) {
            return None;
        }
        let el = *el.keys().next()?;
        let er = self.right.unit(r)?;
        Some(el * self.right.hom(r, r).dim() + er)
    }
    fn differential_vanishes(&self) -> bool {
        self.right.differential_vanishes()
    }
}
