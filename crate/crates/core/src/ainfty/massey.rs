//! Massey triple products in a minimal A∞-category, and gauge transforms
//! used to test that the verdict does not depend on the chosen model.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cell::RefCell;

use super::category::{mu_linear, AInfty};
use super::functor::AInftyFunctor;
use super::relations::{compositions, dagger, sign_of};
use crate::error::{Error, Result};
use crate::glinalg::{add_into, rank_of_rows_lenient, GradedSpace, SparseVec};
use crate::novikov::{Novikov, Rat};

/// A Massey coset: representative plus a spanning set of the indeterminacy.
#[derive(Clone, Debug)]
pub struct MasseyOutcome {
    pub representative: SparseVec,
    pub indeterminacy: Vec<SparseVec>,
    /// True when the representative lies outside the span of the indeterminacy.
    pub nonvanishing: bool,
    /// False when a rank decision relied on entries known only below the cutoff.
    pub certified: bool,
}

fn basis_vec(i: usize, cutoff: &Rat) -> SparseVec {
    SparseVec::from([(i, Novikov::one(cutoff.clone()))])
}

fn is_zero_vec(v: &SparseVec) -> bool {
    v.values().all(|c| c.is_zero())
}

/// ⟨c, b, a⟩ for `a ∈ hom(X₀,X₁)`, `b ∈ hom(X₁,X₂)`, `c ∈ hom(X₂,X₃)` of pure
/// degrees, in a category with μ¹ = 0 and μ²(a,b) = μ²(b,c) = 0. The
/// representative is (−1)^{|b|} μ³(a, b, c); the indeterminacy is
/// μ²(hom(X₀,X₂), c) + μ²(a, hom(X₁,X₃)) in the matching degree.
pub fn massey_triple(cat: &dyn AInfty, chain: &[usize], a: &SparseVec, b: &SparseVec, c: &SparseVec) -> Result<MasseyOutcome> {
    if chain.len() != 4 {
        return Err(Error::Mismatch(String::from("a triple product needs a chain of four objects")));
    }
    if !cat.differential_vanishes() {
        return Err(Error::Invalid(String::from("Massey products need a minimal category")));
    }
    let degree_of = |x: usize, y: usize, v: &SparseVec| -> Result<i32> {
        let space = cat.hom(x, y);
        let mut ds = v.keys().map(|&i| space.degree(i));
        let d = ds.next().ok_or_else(|| Error::Invalid(String::from("Massey input is zero")))?;
        if ds.any(|e| e != d) {
            return Err(Error::Invalid(String::from("Massey input has mixed degree")));
        }
        Ok(d)
    };
    let (da, db, dc) = (degree_of(chain[0], chain[1], a)?, degree_of(chain[1], chain[2], b)?, degree_of(chain[2], chain[3], c)?);
    if !is_zero_vec(&mu_linear(cat, &chain[0..3], &[a.clone(), b.clone()])?) || !is_zero_vec(&mu_linear(cat, &chain[1..4], &[b.clone(), c.clone()])?) {
        return Err(Error::Invalid(String::from("Massey inputs do not compose to zero")));
    }
    let cutoff = cat.cutoff();
    let mut representative = mu_linear(cat, chain, &[a.clone(), b.clone(), c.clone()])?;
    if db.rem_euclid(2) == 1 {
        representative = representative.into_iter().map(|(o, x)| (o, x.neg_ref())).collect();
    }
    representative.retain(|_, x| !x.is_zero());
    let mut indeterminacy = Vec::new();
    let left = cat.hom(chain[0], chain[2]);
    for u in left.indices_in(da + db - 1) {
        let v = mu_linear(cat, &[chain[0], chain[2], chain[3]], &[basis_vec(u, &cutoff), c.clone()])?;
        if !is_zero_vec(&v) {
            indeterminacy.push(v);
        }
    }
    let right = cat.hom(chain[1], chain[3]);
    for u in right.indices_in(db + dc - 1) {
        let v = mu_linear(cat, &[chain[0], chain[1], chain[3]], &[a.clone(), basis_vec(u, &cutoff)])?;
        if !is_zero_vec(&v) {
            indeterminacy.push(v);
        }
    }
    let base = rank_of_rows_lenient(indeterminacy.clone())?;
    let mut with = indeterminacy.clone();
    with.push(representative.clone());
    let full = rank_of_rows_lenient(with)?;
    Ok(MasseyOutcome { nonvanishing: full.rank > base.rank, certified: base.certified && full.certified, representative, indeterminacy })
}

/// The category obtained by transporting μ along F = (id, F², 0, …), so that
/// F is an A∞-functor from `source` to the result. F² is given on basis
/// tuples and must have degree −1.
pub struct GaugeTransform<'a> {
    source: &'a dyn AInfty,
    quadratic: BTreeMap<(Vec<usize>, Vec<usize>), SparseVec>,
    memo: RefCell<BTreeMap<(Vec<usize>, Vec<usize>), SparseVec>>,
}

/// Builds the transported category; F² entries are keyed by (chain [X,Y,Z], inputs [i,j]).
pub fn gauge_transform(source: &dyn AInfty, quadratic: BTreeMap<(Vec<usize>, Vec<usize>), SparseVec>) -> Result<GaugeTransform<'_>> {
    if !source.differential_vanishes() {
        return Err(Error::Invalid(String::from("gauge transforms are only built over minimal categories")));
    }
    for ((chain, inputs), v) in &quadratic {
        if chain.len() != 3 || inputs.len() != 2 {
            return Err(Error::Mismatch(String::from("F² entries take two inputs")));
        }
        let expected = source.hom(chain[0], chain[1]).degree(inputs[0]) + source.hom(chain[1], chain[2]).degree(inputs[1]) - 1;
        let out = source.hom(chain[0], chain[2]);
        if v.keys().any(|&o| out.degree(o) != expected) {
            return Err(Error::Invalid(String::from("F² must have degree −1")));
        }
    }
    Ok(GaugeTransform { source, quadratic, memo: RefCell::new(BTreeMap::new()) })
}

impl GaugeTransform<'_> {
    fn quadratic_term(&self, chain: &[usize], inputs: &[usize]) -> SparseVec {
        self.quadratic.get(&(chain.to_vec(), inputs.to_vec())).cloned().unwrap_or_default()
    }

    /// The functor term Fᵈ on basis elements.
    fn functor_term(&self, chain: &[usize], inputs: &[usize]) -> SparseVec {
        match inputs.len() {
            1 => basis_vec(inputs[0], &self.source.cutoff()),
            2 => self.quadratic_term(chain, inputs),
            _ => SparseVec::new(),
        }
    }

    fn functor_linear(&self, chain: &[usize], inputs: &[SparseVec]) -> SparseVec {
        let mut out = SparseVec::new();
        super::category::for_each_tuple(inputs, &mut |t, c| {
            for (o, x) in self.functor_term(chain, t) {
                add_into(&mut out, o, &x.mul_ref(c));
            }
        });
        out
    }

    fn compute(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        let d = inputs.len();
        let src = self.source;
        let mut acc = SparseVec::new();
        // Σ (−1)^{✠ₙ} F(…, μᵐ(…), …), only F¹ and F² are nonzero.
        for m in d.saturating_sub(1).max(2)..=d {
            for n in 0..=d - m {
                let inner = src.mu(&chain[n..=n + m], &inputs[n..n + m])?;
                if inner.is_empty() {
                    continue;
                }
                let negative = sign_of(dagger(src, chain, inputs, n));
                let mut outer_chain = chain[..=n].to_vec();
                outer_chain.extend_from_slice(&chain[n + m..]);
                let mut slots: Vec<SparseVec> = inputs[..n].iter().map(|&i| basis_vec(i, &src.cutoff())).collect();
                slots.push(if negative { inner.into_iter().map(|(o, c)| (o, c.neg_ref())).collect() } else { inner });
                slots.extend(inputs[n + m..].iter().map(|&i| basis_vec(i, &src.cutoff())));
                for (o, c) in self.functor_linear(&outer_chain, &slots) {
                    add_into(&mut acc, o, &c);
                }
            }
        }
        // − Σ μ′ʳ(F^{s₁}, …, F^{s_r}) over compositions other than all ones.
        for parts in compositions(d) {
            if parts.len() == d || parts.iter().any(|&s| s > 2) || parts.len() < 2 {
                continue;
            }
            let mut blocks = Vec::with_capacity(parts.len());
            let mut target_chain = alloc::vec![chain[0]];
            let mut start = 0;
            for &s in &parts {
                blocks.push(self.functor_term(&chain[start..=start + s], &inputs[start..start + s]));
                start += s;
                target_chain.push(chain[start]);
            }
            if blocks.iter().any(|b| b.is_empty()) {
                continue;
            }
            for (o, c) in mu_linear(self, &target_chain, &blocks)? {
                add_into(&mut acc, o, &c.neg_ref());
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(acc)
    }
}

impl AInfty for GaugeTransform<'_> {
    fn object_count(&self) -> usize {
        self.source.object_count()
    }
    fn object_name(&self, x: usize) -> String {
        self.source.object_name(x)
    }
    fn hom(&self, x: usize, y: usize) -> Arc<GradedSpace> {
        self.source.hom(x, y)
    }
    fn arity_cap(&self) -> usize {
        self.source.arity_cap()
    }
    fn mu(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        let d = inputs.len();
        if d == 0 || d > self.arity_cap() {
            return Err(Error::MissingArity(d));
        }
        if d == 1 {
            return Ok(SparseVec::new());
        }
        let key = (chain.to_vec(), inputs.to_vec());
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute(chain, inputs)?;
        self.memo.borrow_mut().insert(key, v.clone());
        Ok(v)
    }
    fn cutoff(&self) -> Rat {
        self.source.cutoff()
    }
    fn unit(&self, _x: usize) -> Option<usize> {
        None
    }
    fn differential_vanishes(&self) -> bool {
        true
    }
}

/// The gauge functor F = (id, F²) from the source to the transported category.
pub struct GaugeFunctor<'g, 'a> {
    pub gauge: &'g GaugeTransform<'a>,
}

impl AInftyFunctor for GaugeFunctor<'_, '_> {
    fn source(&self) -> &dyn AInfty {
        self.gauge.source
    }
    fn target(&self) -> &dyn AInfty {
        self.gauge
    }
    fn map_object(&self, x: usize) -> usize {
        x
    }
    fn arity_cap(&self) -> usize {
        self.gauge.arity_cap()
    }
    fn term(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        Ok(self.gauge.functor_term(chain, inputs))
    }
}
