//! The normalized Hochschild cochain complex, truncated by input length.
//!
//! A cochain of degree r has components hᵈ(a_d, …, a_1) ∈ hom(X_0, X_d) of
//! degree r − d + Σ|a_i|. Components that take a strict unit as an input are
//! zero. The differential is
//!
//! (∂h)(a_d, …, a_1) = Σ (−1)^{(r+1)✠ᵢ} μ(a_d, …, a_{i+j+1}, hʲ(a_{i+j}, …, a_{i+1}), a_i, …, a_1)
//!                   + Σ (−1)^{✠ᵢ+r} h(a_d, …, a_{i+j+1}, μʲ(a_{i+j}, …, a_{i+1}), a_i, …, a_1).
//!
//! The differential never lowers length, so cochains supported in lengths
//! above the cap form a subcomplex and the truncation is the quotient.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::category::{chains, AInfty};
use super::relations::{dagger, sign_of};
use crate::error::{Error, Result};
use crate::glinalg::{add_into, rank_of_rows_lenient, SparseVec};
use crate::novikov::Novikov;

/// One basis cochain: the input tuple on `chain` goes to `output`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CochainKey {
    pub chain: Vec<usize>,
    pub inputs: Vec<usize>,
    pub output: usize,
}

impl CochainKey {
    pub fn length(&self) -> usize {
        self.inputs.len()
    }
}

/// A Hochschild cochain: (chain, inputs) → combination of outputs.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct HochschildCochain {
    pub degree: i32,
    pub components: BTreeMap<(Vec<usize>, Vec<usize>), SparseVec>,
}

impl HochschildCochain {
    pub fn new(degree: i32) -> Self {
        HochschildCochain { degree, components: BTreeMap::new() }
    }

    pub fn add(&mut self, chain: &[usize], inputs: &[usize], output: usize, c: &Novikov) {
        let slot = self.components.entry((chain.to_vec(), inputs.to_vec())).or_default();
        add_into(slot, output, c);
        if slot.is_empty() {
            self.components.remove(&(chain.to_vec(), inputs.to_vec()));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|v| v.is_empty())
    }

    /// The length-zero component at object `x`.
    pub fn constant_term(&self, x: usize) -> SparseVec {
        self.components.get(&(vec![x], Vec::new())).cloned().unwrap_or_default()
    }
}

/// Ranks of the truncated complex and of the classes that survive to longer caps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildReport {
    pub length_cap: usize,
    /// Extra length used to decide which classes extend.
    pub lookahead: usize,
    pub degree_window: (i32, i32),
    /// Cohomology of the truncated quotient complex.
    pub truncated_ranks: BTreeMap<i32, usize>,
    /// Rank of the image of the cohomology at cap + lookahead.
    pub ranks: BTreeMap<i32, usize>,
    pub cochain_dims: BTreeMap<i32, usize>,
    pub certified: bool,
}

impl HochschildReport {
    pub fn total(&self) -> usize {
        self.ranks.values().sum()
    }
}

/// The normalized cochain complex in lengths 0..=length_cap.
pub struct HochschildComplex<'a> {
    cat: &'a dyn AInfty,
    length_cap: usize,
    keys: BTreeMap<i32, Vec<CochainKey>>,
    index: BTreeMap<CochainKey, (i32, usize)>,
    /// ∂ on each basis cochain, as (degree + 1) coordinates.
    columns: BTreeMap<i32, Vec<SparseVec>>,
}

fn normalized_tuples(cat: &dyn AInfty, chain: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for w in chain.windows(2) {
        let space = cat.hom(w[0], w[1]);
        let unit = if w[0] == w[1] { cat.unit(w[0]) } else { None };
        let mut next = Vec::new();
        for t in &out {
            for b in 0..space.dim() {
                if Some(b) == unit {
                    continue;
                }
                let mut u = t.clone();
                u.push(b);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn all_chains(cat: &dyn AInfty, d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        (0..cat.object_count()).map(|x| vec![x]).collect()
    } else {
        chains(cat, d).collect()
    }
}

impl<'a> HochschildComplex<'a> {
    /// Assembles the basis and the differential; needs μ through arity cap + 1.
    pub fn new(cat: &'a dyn AInfty, length_cap: usize) -> Result<Self> {
        if cat.arity_cap() < length_cap + 1 {
            return Err(Error::MissingArity(length_cap + 1));
        }
        let mut keys: BTreeMap<i32, Vec<CochainKey>> = BTreeMap::new();
        let mut tuples = Vec::new();
        for d in 0..=length_cap {
            for chain in all_chains(cat, d) {
                let out_space = cat.hom(chain[0], chain[d]);
                for inputs in normalized_tuples(cat, &chain) {
                    let in_deg: i32 = (0..d).map(|i| cat.hom(chain[i], chain[i + 1]).degree(inputs[i])).sum();
                    for o in 0..out_space.dim() {
                        let r = out_space.degree(o) - in_deg + d as i32;
                        keys.entry(r).or_default().push(CochainKey { chain: chain.clone(), inputs: inputs.clone(), output: o });
                    }
                    tuples.push((chain.clone(), inputs));
                }
            }
        }
        let mut index = BTreeMap::new();
        for (&r, ks) in &keys {
            for (i, k) in ks.iter().enumerate() {
                index.insert(k.clone(), (r, i));
            }
        }
        let mut complex = HochschildComplex { cat, length_cap, keys, index, columns: BTreeMap::new() };
        complex.assemble(&tuples)?;
        Ok(complex)
    }

    pub fn length_cap(&self) -> usize {
        self.length_cap
    }

    pub fn basis(&self, degree: i32) -> &[CochainKey] {
        self.keys.get(&degree).map_or(&[], |v| v.as_slice())
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.keys.keys().copied().collect()
    }

    /// Walks every target tuple and records each basis source it meets.
    fn assemble(&mut self, tuples: &[(Vec<usize>, Vec<usize>)]) -> Result<()> {
        let cat = self.cat;
        let skip_mu1 = cat.differential_vanishes();
        let mut columns: BTreeMap<i32, Vec<SparseVec>> =
            self.keys.iter().map(|(&r, ks)| (r, vec![SparseVec::new(); ks.len()])).collect();
        for (chain, a) in tuples {
            let d = a.len();
            let out_space = cat.hom(chain[0], chain[d]);
            let daggers: Vec<i32> = (0..=d).map(|i| dagger(cat, chain, a, i)).collect();
            // hʲ inserted into an outer μ.
            for j in 0..=d {
                if skip_mu1 && j == d {
                    continue;
                }
                for i in 0..=d - j {
                    let sub_chain = &chain[i..=i + j];
                    let sub_inputs = &a[i..i + j];
                    let mid = cat.hom(chain[i], chain[i + j]);
                    let mut outer_chain = chain[..=i].to_vec();
                    outer_chain.extend_from_slice(&chain[i + j..]);
                    for o in 0..mid.dim() {
                        let src = CochainKey { chain: sub_chain.to_vec(), inputs: sub_inputs.to_vec(), output: o };
                        let Some(&(r, si)) = self.index.get(&src) else { continue };
                        let mut outer = a[..i].to_vec();
                        outer.push(o);
                        outer.extend_from_slice(&a[i + j..]);
                        let v = cat.mu(&outer_chain, &outer)?;
                        let neg = sign_of((r + 1) * daggers[i]);
                        for (out, c) in v {
                            let tgt = CochainKey { chain: chain.clone(), inputs: a.clone(), output: out };
                            let Some(&(_, ti)) = self.index.get(&tgt) else { continue };
                            let c = if neg { c.neg_ref() } else { c };
                            add_into(&mut columns.get_mut(&r).unwrap()[si], ti, &c);
                        }
                    }
                }
            }
            // μʲ inserted into h.
            for j in 1..=d {
                if skip_mu1 && j == 1 {
                    continue;
                }
                for i in 0..=d - j {
                    let v = cat.mu(&chain[i..=i + j], &a[i..i + j])?;
                    let unit = if chain[i] == chain[i + j] { cat.unit(chain[i]) } else { None };
                    let mut src_chain = chain[..=i].to_vec();
                    src_chain.extend_from_slice(&chain[i + j..]);
                    for (b, c) in v {
                        if Some(b) == unit {
                            continue;
                        }
                        let mut src_inputs = a[..i].to_vec();
                        src_inputs.push(b);
                        src_inputs.extend_from_slice(&a[i + j..]);
                        for out in 0..out_space.dim() {
                            let src = CochainKey { chain: src_chain.clone(), inputs: src_inputs.clone(), output: out };
                            let Some(&(r, si)) = self.index.get(&src) else { continue };
                            let tgt = CochainKey { chain: chain.clone(), inputs: a.clone(), output: out };
                            let Some(&(_, ti)) = self.index.get(&tgt) else { continue };
                            let neg = sign_of(daggers[i] + r);
                            let c = if neg { c.neg_ref() } else { c.clone() };
                            add_into(&mut columns.get_mut(&r).unwrap()[si], ti, &c);
                        }
                    }
                }
            }
        }
        self.columns = columns;
        Ok(())
    }

    /// Coordinates of a cochain in the basis of its degree (lengths above the cap dropped).
    pub fn coordinates(&self, h: &HochschildCochain) -> SparseVec {
        let mut out = SparseVec::new();
        for ((chain, inputs), v) in &h.components {
            for (&o, c) in v {
                let k = CochainKey { chain: chain.clone(), inputs: inputs.clone(), output: o };
                if let Some(&(r, i)) = self.index.get(&k) {
                    if r == h.degree {
                        add_into(&mut out, i, c);
                    }
                }
            }
        }
        out
    }

    pub fn cochain(&self, degree: i32, coords: &SparseVec) -> HochschildCochain {
        let mut h = HochschildCochain::new(degree);
        let ks = self.basis(degree);
        for (&i, c) in coords {
            let k = &ks[i];
            h.add(&k.chain, &k.inputs, k.output, c);
        }
        h
    }

    /// ∂h in the truncated complex.
    pub fn differential(&self, h: &HochschildCochain) -> HochschildCochain {
        let mut out = SparseVec::new();
        if let Some(cols) = self.columns.get(&h.degree) {
            for (i, c) in self.coordinates(h) {
                for (&t, x) in &cols[i] {
                    add_into(&mut out, t, &x.mul_ref(&c));
                }
            }
        }
        self.cochain(h.degree + 1, &out)
    }

    /// Columns of ∂ out of degree r.
    pub fn columns(&self, degree: i32) -> &[SparseVec] {
        self.columns.get(&degree).map_or(&[], |v| v.as_slice())
    }

    /// Nonzero entries of ∂∂ out of degree r (empty means ∂² = 0 there).
    pub fn square_defect(&self, degree: i32) -> Vec<(usize, usize)> {
        let first = self.columns(degree);
        let second = self.columns(degree + 1);
        let mut bad = Vec::new();
        for (i, col) in first.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (&t, x) in col {
                for (&u, y) in &second[t] {
                    add_into(&mut acc, u, &x.mul_ref(y));
                }
            }
            for (&u, v) in &acc {
                if !v.is_zero() {
                    bad.push((i, u));
                }
            }
        }
        bad
    }

    /// Checks (∂h)⁰_X = μ¹(h⁰_X) for every basis cochain of degree r.
    pub fn restriction_commutes(&self, degree: i32) -> Result<bool> {
        for (i, k) in self.basis(degree).iter().enumerate() {
            let h = self.cochain(degree, &SparseVec::from([(i, Novikov::one(self.cat.cutoff()))]));
            let dh = self.differential(&h);
            for x in 0..self.cat.object_count() {
                let lhs = dh.constant_term(x);
                let mut rhs = SparseVec::new();
                if k.length() == 0 && k.chain[0] == x {
                    rhs = self.cat.mu(&[x, x], &[k.output])?;
                }
                let diff: Vec<_> = {
                    let mut acc = lhs.clone();
                    for (&o, c) in &rhs {
                        add_into(&mut acc, o, &c.neg_ref());
                    }
                    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
                };
                if !diff.is_empty() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether a cochain is a coboundary in the truncated complex.
    pub fn is_coboundary(&self, h: &HochschildCochain) -> Result<bool> {
        let mut rows = self.columns(h.degree - 1).to_vec();
        let before = rank_of_rows_lenient(rows.clone())?.rank;
        rows.push(self.coordinates(h));
        Ok(rank_of_rows_lenient(rows)?.rank == before)
    }

    /// The degree-2 cochain q·d/dq μ, a cocycle measuring how the structure
    /// constants vary with the area.
    pub fn area_derivation(&self) -> Result<HochschildCochain> {
        let mut h = HochschildCochain::new(2);
        for k in self.basis(2) {
            if k.length() < 2 {
                continue;
            }
            if let Some(c) = self.cat.mu(&k.chain, &k.inputs)?.get(&k.output) {
                h.add(&k.chain, &k.inputs, k.output, &c.euler_derivative());
            }
        }
        Ok(h)
    }

    /// Rank of ∂ out of degree r.
    fn rank_out(&self, degree: i32) -> Result<(usize, bool)> {
        let cols = self.columns(degree).to_vec();
        let r = rank_of_rows_lenient(cols)?;
        Ok((r.rank, r.certified))
    }

    /// Cohomology of the truncated complex in degree r.
    pub fn truncated_rank(&self, degree: i32) -> Result<(usize, bool)> {
        let dim = self.basis(degree).len();
        let (out, c1) = self.rank_out(degree)?;
        let (inc, c2) = self.rank_out(degree - 1)?;
        Ok((dim - out - inc, c1 && c2))
    }

}

/// Rank of the image of H^r(CC_{≤long}) in H^r(CC_{≤short}).
///
/// With ρ the restriction and K its kernel (components above the short cap),
/// the image is ρ(Z_long)/B_short and B_short = ρ(B_long), so its rank is
/// dim CC_short − rank ∂_long + rank ∂_long|_K − rank ∂_short on degree r − 1.
fn surviving_rank(short: &HochschildComplex, long: &HochschildComplex, degree: i32) -> Result<(usize, bool)> {
    let cap = short.length_cap;
    let tail: Vec<SparseVec> = long
        .basis(degree)
        .iter()
        .zip(long.columns(degree))
        .filter(|(k, _)| k.length() > cap)
        .map(|(_, c)| c.clone())
        .collect();
    let (long_out, c1) = long.rank_out(degree)?;
    let tail_rank = rank_of_rows_lenient(tail)?;
    let (short_in, c2) = short.rank_out(degree - 1)?;
    let dim = short.basis(degree).len();
    Ok((dim + tail_rank.rank - long_out - short_in, c1 && c2 && tail_rank.certified))
}

/// Hochschild ranks in a degree window at a length cap.
///
/// A class counts when it is the restriction of a cocycle of the complex
/// truncated at `length_cap + lookahead`; the truncated ranks are reported
/// alongside. The window must satisfy `hi < length_cap`, otherwise the
/// truncation cannot see enough components and an error is returned.
pub fn hochschild(cat: &dyn AInfty, length_cap: usize, degree_window: (i32, i32), lookahead: usize) -> Result<HochschildReport> {
    let (lo, hi) = degree_window;
    if lo > hi || hi < 0 || hi as usize >= length_cap {
        return Err(Error::Invalid(alloc::format!(
            "degree window [{lo},{hi}] needs a length cap above {hi}, got {length_cap}"
        )));
    }
    let short = HochschildComplex::new(cat, length_cap)?;
    let long = HochschildComplex::new(cat, length_cap + lookahead)?;
    let mut truncated_ranks = BTreeMap::new();
    let mut ranks = BTreeMap::new();
    let mut cochain_dims = BTreeMap::new();
    let mut certified = true;
    for r in lo..=hi {
        for cx in [&short, &long] {
            for s in [r - 1, r] {
                if !cx.square_defect(s).is_empty() {
                    return Err(Error::Invalid(String::from("Hochschild differential does not square to zero")));
                }
            }
        }
        let (t, c1) = short.truncated_rank(r)?;
        let (s, c2) = surviving_rank(&short, &long, r)?;
        truncated_ranks.insert(r, t);
        ranks.insert(r, s);
        cochain_dims.insert(r, short.basis(r).len());
        certified &= c1 && c2;
    }
    Ok(HochschildReport { length_cap, lookahead, degree_window, truncated_ranks, ranks, cochain_dims, certified })
}

// Hochschild chains carry the degree |a_0| + Σ(|a_i| − 1) and the
// differential b of degree +1. A μ away from a_0 acting after i inputs has
// sign (−1)^{|a_0|−1+✠ᵢ}; a μ wrapping around a_0 has the Koszul sign of
// rotating the trailing block to the front.

/// One basis Hochschild chain a_0 ⊗ a_1 ⊗ … ⊗ a_d on the cycle
/// X_0 → X_1 → … → X_d → X_0, with a_0 ∈ hom(X_d, X_0).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainKey {
    pub cycle: Vec<usize>,
    pub head: usize,
    pub inputs: Vec<usize>,
}

/// The normalized Hochschild chain complex in lengths 0..=length_cap.
pub struct HochschildChains<'a> {
    cat: &'a dyn AInfty,
    length_cap: usize,
    keys: BTreeMap<i32, Vec<ChainKey>>,
    index: BTreeMap<ChainKey, (i32, usize)>,
    columns: BTreeMap<i32, Vec<SparseVec>>,
}

impl<'a> HochschildChains<'a> {
    pub fn new(cat: &'a dyn AInfty, length_cap: usize) -> Result<Self> {
        if cat.arity_cap() < length_cap + 1 {
            return Err(Error::MissingArity(length_cap + 1));
        }
        let mut keys: BTreeMap<i32, Vec<ChainKey>> = BTreeMap::new();
        for d in 0..=length_cap {
            for cycle in all_chains(cat, d) {
                let back = cat.hom(cycle[d], cycle[0]);
                for inputs in normalized_tuples(cat, &cycle) {
                    let reduced: i32 = (0..d).map(|i| cat.hom(cycle[i], cycle[i + 1]).degree(inputs[i]) - 1).sum();
                    for head in 0..back.dim() {
                        let r = back.degree(head) + reduced;
                        keys.entry(r).or_default().push(ChainKey { cycle: cycle.clone(), head, inputs: inputs.clone() });
                    }
                }
            }
        }
        let mut index = BTreeMap::new();
        for (&r, ks) in &keys {
            for (i, k) in ks.iter().enumerate() {
                index.insert(k.clone(), (r, i));
            }
        }
        let mut out = HochschildChains { cat, length_cap, keys, index, columns: BTreeMap::new() };
        out.assemble()?;
        Ok(out)
    }

    pub fn basis(&self, degree: i32) -> &[ChainKey] {
        self.keys.get(&degree).map_or(&[], |v| v.as_slice())
    }

    pub fn columns(&self, degree: i32) -> &[SparseVec] {
        self.columns.get(&degree).map_or(&[], |v| v.as_slice())
    }

    fn push(&self, columns: &mut BTreeMap<i32, Vec<SparseVec>>, src: (i32, usize), tgt: &ChainKey, c: &Novikov, neg: bool) {
        if let Some(&(_, ti)) = self.index.get(tgt) {
            let c = if neg { c.neg_ref() } else { c.clone() };
            add_into(&mut columns.get_mut(&src.0).unwrap()[src.1], ti, &c);
        }
    }

    fn assemble(&mut self) -> Result<()> {
        let cat = self.cat;
        let skip_mu1 = cat.differential_vanishes();
        let mut columns: BTreeMap<i32, Vec<SparseVec>> =
            self.keys.iter().map(|(&r, ks)| (r, vec![SparseVec::new(); ks.len()])).collect();
        let all: Vec<(ChainKey, (i32, usize))> = self.index.iter().map(|(k, v)| (k.clone(), *v)).collect();
        for (key, src) in all {
            let d = key.inputs.len();
            let cyc = &key.cycle;
            let a = &key.inputs;
            let head_deg = cat.hom(cyc[d], cyc[0]).degree(key.head);
            let red: Vec<i32> = (0..d).map(|i| cat.hom(cyc[i], cyc[i + 1]).degree(a[i]) - 1).collect();
            let prefix = |n: usize| -> i32 { red[..n].iter().sum() };
            // μʲ on a_{i+1}, …, a_{i+j} away from the head.
            for j in 1..=d {
                if skip_mu1 && j == 1 {
                    continue;
                }
                for i in 0..=d - j {
                    let v = cat.mu(&cyc[i..=i + j], &a[i..i + j])?;
                    let unit = if cyc[i] == cyc[i + j] { cat.unit(cyc[i]) } else { None };
                    let mut new_cycle = cyc[..=i].to_vec();
                    new_cycle.extend_from_slice(&cyc[i + j..]);
                    for (b, c) in v {
                        if Some(b) == unit {
                            continue;
                        }
                        let mut inputs = a[..i].to_vec();
                        inputs.push(b);
                        inputs.extend_from_slice(&a[i + j..]);
                        let exp = head_deg - 1 + prefix(i);
                        let tgt = ChainKey { cycle: new_cycle.clone(), head: key.head, inputs };
                        self.push(&mut columns, src, &tgt, &c, sign_of(exp));
                    }
                }
            }
            // μ on a_{d−l+1}, …, a_d, a_0, a_1, …, a_k.
            for l in 0..=d {
                for k in 0..=d - l {
                    let arity = l + 1 + k;
                    if skip_mu1 && arity == 1 {
                        continue;
                    }
                    let mut ch: Vec<usize> = cyc[d - l..=d].to_vec();
                    ch.extend_from_slice(&cyc[..=k]);
                    let mut ins: Vec<usize> = a[d - l..].to_vec();
                    ins.push(key.head);
                    ins.extend_from_slice(&a[..k]);
                    let v = cat.mu(&ch, &ins)?;
                    let new_cycle = cyc[k..=d - l].to_vec();
                    let rest = a[k..d - l].to_vec();
                    let s_after = prefix(d) - prefix(d - l);
                    let s_mid = prefix(d - l) - prefix(k);
                    let s_before = prefix(k);
                    for (b, c) in v {
                        let exp = s_after * (head_deg - 1 + s_before + s_mid);
                        let tgt = ChainKey { cycle: new_cycle.clone(), head: b, inputs: rest.clone() };
                        self.push(&mut columns, src, &tgt, &c, sign_of(exp));
                    }
                }
            }
        }
        self.columns = columns;
        Ok(())
    }

    pub fn square_defect(&self, degree: i32) -> usize {
        let first = self.columns(degree);
        let second = self.columns(degree + 1);
        let mut bad = 0;
        for col in first {
            let mut acc = SparseVec::new();
            for (&t, x) in col {
                for (&u, y) in &second[t] {
                    add_into(&mut acc, u, &x.mul_ref(y));
                }
            }
            bad += acc.values().filter(|v| !v.is_zero()).count();
        }
        bad
    }

    /// Rank of the image of H_r(F_cap) in H_r(F_long) for the longer complex `long`.
    pub fn surviving_rank(&self, long: &HochschildChains, degree: i32) -> Result<usize> {
        let cap = self.length_cap;
        let dim = self.basis(degree).len();
        let out = rank_of_rows_lenient(self.columns(degree).to_vec())?.rank;
        let incoming = rank_of_rows_lenient(long.columns(degree - 1).to_vec())?.rank;
        let keys = long.basis(degree);
        let high: Vec<SparseVec> = long
            .columns(degree - 1)
            .iter()
            .map(|col| col.iter().filter(|(t, _)| keys[**t].inputs.len() > cap).map(|(t, c)| (*t, c.clone())).collect())
            .collect();
        let high_rank = rank_of_rows_lenient(high)?.rank;
        Ok(dim - out - incoming + high_rank)
    }
}

