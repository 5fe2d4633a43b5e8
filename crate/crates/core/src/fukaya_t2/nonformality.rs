//! The Koszul Massey product on L_s → τ²L_s ⊕ τ²L_s → τ⁴L_s → L_s.
//!
//! No product of two nonzero degree-0 morphisms between these lines
//! vanishes, so the triple product is taken with the doubled middle object:
//! b = (y₀, y₁) is a basis of hom(τ²L_s, τ⁴L_s), a spans the kernel of
//! μ²(·, b) and c spans the degree-1 kernel of μ²(b, ·). The product lands in
//! hom⁰(L_s, L_s), where the indeterminacy vanishes for degree reasons.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ainfty::{massey_triple, mu_linear, AInfty, MasseyOutcome};
use crate::error::{Error, Result};
use crate::glinalg::{Matrix, SparseVec};
use crate::novikov::Novikov;
use crate::twisted::{Summand, TwistedBasis, TwistedCategory, TwistedComplex};

/// The inputs and outcome of the Koszul Massey product.
#[derive(Clone, Debug)]
pub struct KoszulMassey {
    pub a: SparseVec,
    pub b: SparseVec,
    pub c: SparseVec,
    /// Dimensions of the two solution spaces; both are 1 for the Koszul sequence.
    pub kernel_dims: (usize, usize),
    pub outcome: MasseyOutcome,
}

/// Solves `map(v) = 0` for v in the span of `columns`, returning kernel vectors as combinations.
fn kernel_of(images: &[SparseVec], columns: &[usize], cutoff: &crate::novikov::Rat) -> Result<(Vec<SparseVec>, bool)> {
    let rows: Vec<usize> = {
        let mut r: Vec<usize> = images.iter().flat_map(|v| v.keys().copied()).collect();
        r.sort_unstable();
        r.dedup();
        r
    };
    let mut m = Matrix::zero(rows.len().max(1), columns.len());
    for (j, img) in images.iter().enumerate() {
        for (o, x) in img {
            let i = rows.binary_search(o).unwrap();
            m.set(i, j, x.clone());
        }
    }
    if rows.is_empty() {
        m.set(0, 0, Novikov::zero(cutoff.clone()));
    }
    let (kernel, certified) = m.kernel_lenient()?;
    let vecs = kernel
        .into_iter()
        .map(|k| k.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (columns[j], x)).collect())
        .collect();
    Ok((vecs, certified))
}

/// Runs the construction on objects `ls`, `t2 = τ²L_s` and `t4 = τ⁴L_s` of a minimal category.
pub fn koszul_massey(base: &dyn AInfty, ls: usize, t2: usize, t4: usize) -> Result<KoszulMassey> {
    let objects = vec![
        (String::from("L_s"), TwistedComplex::object(ls, 0)),
        (String::from("t2L_s⊕t2L_s"), TwistedComplex::direct_sum(vec![Summand { object: t2, shift: 0 }, Summand { object: t2, shift: 0 }])),
        (String::from("t4L_s"), TwistedComplex::object(t4, 0)),
    ];
    let tw = TwistedCategory::new(base, objects, 3)?;
    let cutoff = base.cutoff();
    let one = || Novikov::one(cutoff.clone());
    let middle = base.hom(t2, t4).indices_in(0);
    if middle.len() != 2 {
        return Err(Error::Invalid(String::from("hom(τ²L_s, τ⁴L_s) must have rank 2 in degree 0")));
    }
    let mut b = SparseVec::new();
    for (i, &y) in middle.iter().enumerate() {
        let idx = tw.index_of(1, 2, TwistedBasis { from: i, to: 0, element: y }).unwrap();
        b.insert(idx, one());
    }
    let a_cols = tw.hom(0, 1).indices_in(0);
    let a_images: Vec<SparseVec> =
        a_cols.iter().map(|&j| mu_linear(&tw, &[0, 1, 2], &[SparseVec::from([(j, one())]), b.clone()])).collect::<Result<_>>()?;
    let (a_kernel, cert_a) = kernel_of(&a_images, &a_cols, &cutoff)?;
    let c_cols = tw.hom(2, 0).indices_in(1);
    let c_images: Vec<SparseVec> =
        c_cols.iter().map(|&j| mu_linear(&tw, &[1, 2, 0], &[b.clone(), SparseVec::from([(j, one())])])).collect::<Result<_>>()?;
    let (c_kernel, cert_c) = kernel_of(&c_images, &c_cols, &cutoff)?;
    let (a, c) = match (a_kernel.first(), c_kernel.first()) {
        (Some(a), Some(c)) => (a.clone(), c.clone()),
        _ => return Err(Error::Invalid(String::from("the Koszul relations have no solution"))),
    };
    // both solution spaces are lines; anything larger means the truncation hid the relations
    let too_coarse = || Error::Precision {
        context: alloc::format!("Koszul kernels of dimension {:?} at T = {cutoff}", (a_kernel.len(), c_kernel.len())),
        suggested_truncation: alloc::format!("{}", &cutoff * crate::novikov::int(2)),
    };
    if a_kernel.len() != 1 || c_kernel.len() != 1 {
        return Err(too_coarse());
    }
    let mut outcome = match massey_triple(&tw, &[0, 1, 2, 0], &a, &b, &c) {
        Err(Error::Invalid(_)) => return Err(too_coarse()),
        other => other?,
    };
    outcome.certified &= cert_a && cert_c;
    Ok(KoszulMassey { a, b, c, kernel_dims: (a_kernel.len(), c_kernel.len()), outcome })
}

/// A degree −1 F² for a gauge transform, with entries drawn from `coefficient`
/// on every admissible basis tuple of the listed objects.
pub fn quadratic_gauge(base: &dyn AInfty, objects: &[usize], coefficient: &mut dyn FnMut() -> i64) -> BTreeMap<(Vec<usize>, Vec<usize>), SparseVec> {
    let cutoff = base.cutoff();
    let mut out = BTreeMap::new();
    for &x in objects {
        for &y in objects {
            for &z in objects {
                let (h1, h2, h3) = (base.hom(x, y), base.hom(y, z), base.hom(x, z));
                for i in 0..h1.dim() {
                    for j in 0..h2.dim() {
                        let mut v = SparseVec::new();
                        for o in h3.indices_in(h1.degree(i) + h2.degree(j) - 1) {
                            let k = coefficient();
                            if k != 0 {
                                v.insert(o, Novikov::constant(k, cutoff.clone()));
                            }
                        }
                        if !v.is_empty() {
                            out.insert((vec![x, y, z], vec![i, j]), v);
                        }
                    }
                }
            }
        }
    }
    out
}
