//! Twisted complexes over an A∞-category: shifts, cones, Maurer–Cartan
//! validation, hom complexes, twists, projection functors and Euler pairings.
//!
//! A morphism `x ∈ hom_A(X, Y)` viewed in `hom(X[s], Y[t])` has degree
//! `|x| + s − t`. Operations on shifted objects carry the Koszul sign of moving
//! the shift generators past the inputs, and operations on twisted complexes
//! sum over every insertion of δ between consecutive inputs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::ainfty::{mu_linear, AInfty, AInftyFunctor};
use crate::error::{Error, Result};
use crate::glinalg::{add_into, ChainComplex, CohomologyReport, GradedSpace, GradedTensor, Matrix, SparseVec};
use crate::novikov::{Novikov, Rat};

/// One summand `X[shift]` of a twisted complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub object: usize,
    pub shift: i32,
}

/// A formal sum of shifted objects with a strictly lower-triangular δ:
/// `delta[(i, j)]` with `i < j` lies in `hom_A(X_i, X_j)` and has degree 1
/// as a morphism `X_i[s_i] → X_j[s_j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedComplex {
    pub summands: Vec<Summand>,
    pub delta: BTreeMap<(usize, usize), SparseVec>,
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct McReport {
    /// Entries violating triangularity or the degree constraint.
    pub shape_errors: Vec<String>,
    /// Nonzero entries of Σ μʳ(δ, …, δ), keyed by summand pair.
    pub residuals: BTreeMap<(usize, usize), SparseVec>,
}

impl McReport {
    pub fn passed(&self) -> bool {
        self.shape_errors.is_empty() && self.residuals.is_empty()
    }
}

impl TwistedComplex {
    /// A single object with a shift.
    pub fn object(object: usize, shift: i32) -> Self {
        TwistedComplex { summands: vec![Summand { object, shift }], delta: BTreeMap::new() }
    }

    /// Direct sum with δ = 0.
    pub fn direct_sum(summands: Vec<Summand>) -> Self {
        TwistedComplex { summands, delta: BTreeMap::new() }
    }

    /// The same complex with every shift raised by `k`.
    pub fn shifted(&self, k: i32) -> Self {
        let mut out = self.clone();
        for s in &mut out.summands {
            s.shift += k;
        }
        out
    }

    fn path_ends(&self, from: usize) -> Vec<Vec<usize>> {
        // Every δ-path starting at `from`, including the empty one.
        let mut out = vec![vec![from]];
        let mut i = 0;
        while i < out.len() {
            let last = *out[i].last().unwrap();
            for j in last + 1..self.summands.len() {
                if self.delta.get(&(last, j)).is_some_and(|v| !v.is_empty()) {
                    let mut p = out[i].clone();
                    p.push(j);
                    out.push(p);
                }
            }
            i += 1;
        }
        out
    }

    fn paths_between(&self, from: usize, to: usize) -> Vec<Vec<usize>> {
        self.path_ends(from).into_iter().filter(|p| *p.last().unwrap() == to).collect()
    }
}

/// μᵈ on shifted objects: `shifts[k]` is the shift of the k-th object of the
/// chain. The sign is that of moving each shift generator to the front.
pub fn shifted_sign(base: &dyn AInfty, chain: &[usize], shifts: &[i32], inputs: &[usize]) -> bool {
    let d = inputs.len();
    let mut e = shifts[0] - shifts[d];
    let mut reduced_before = 0;
    for j in 0..d {
        let jump = shifts[j] - shifts[j + 1];
        e += jump * reduced_before;
        reduced_before += base.hom(chain[j], chain[j + 1]).degree(inputs[j]) - 1;
    }
    e.rem_euclid(2) == 1
}

/// μᵈ of the shifted category on combinations of homogeneous degree per slot.
fn shifted_mu_linear(base: &dyn AInfty, chain: &[usize], shifts: &[i32], inputs: &[SparseVec]) -> Result<SparseVec> {
    let mut reps = Vec::with_capacity(inputs.len());
    for v in inputs {
        match v.keys().next() {
            Some(&i) => reps.push(i),
            None => return Ok(SparseVec::new()),
        }
    }
    let v = mu_linear(base, chain, inputs)?;
    if shifted_sign(base, chain, shifts, &reps) {
        Ok(v.into_iter().map(|(o, c)| (o, c.neg_ref())).collect())
    } else {
        Ok(v)
    }
}

fn unit_vec(i: usize, cutoff: &Rat) -> SparseVec {
    SparseVec::from([(i, Novikov::one(cutoff.clone()))])
}

/// Checks triangularity, degrees and the Maurer–Cartan equation exactly.
pub fn validate(base: &dyn AInfty, tc: &TwistedComplex) -> Result<McReport> {
    let mut shape_errors = Vec::new();
    let n = tc.summands.len();
    for (&(i, j), v) in &tc.delta {
        if i >= j || j >= n {
            shape_errors.push(format!("δ entry ({i}, {j}) is not strictly lower-triangular"));
            continue;
        }
        let (si, sj) = (&tc.summands[i], &tc.summands[j]);
        let space = base.hom(si.object, sj.object);
        for &b in v.keys() {
            if b >= space.dim() {
                shape_errors.push(format!("δ entry ({i}, {j}) has basis index {b} out of range"));
            } else if space.degree(b) + si.shift - sj.shift != 1 {
                shape_errors.push(format!("δ entry ({i}, {j}) has a component of degree {}", space.degree(b) + si.shift - sj.shift));
            }
        }
    }
    let mut residuals = BTreeMap::new();
    if !shape_errors.is_empty() {
        return Ok(McReport { shape_errors, residuals });
    }
    for i in 0..n {
        for path in tc.path_ends(i) {
            if path.len() < 2 {
                continue;
            }
            if path.len() - 1 > base.arity_cap() {
                return Err(Error::MissingArity(path.len() - 1));
            }
            let chain: Vec<usize> = path.iter().map(|&k| tc.summands[k].object).collect();
            let shifts: Vec<i32> = path.iter().map(|&k| tc.summands[k].shift).collect();
            let inputs: Vec<SparseVec> = path.windows(2).map(|w| tc.delta[&(w[0], w[1])].clone()).collect();
            let v = shifted_mu_linear(base, &chain, &shifts, &inputs)?;
            let acc = residuals.entry((i, *path.last().unwrap())).or_insert_with(SparseVec::new);
            for (o, c) in v {
                add_into(acc, o, &c);
            }
        }
    }
    residuals.retain(|_, v: &mut SparseVec| !v.is_empty());
    Ok(McReport { shape_errors, residuals })
}

/// Cone of a closed morphism `c ∈ hom(y0, y1)` of pure degree k: the complex
/// `y0[1 − k] ⊕ y1` with δ = c.
pub fn cone(base: &dyn AInfty, y0: usize, y1: usize, c: &SparseVec) -> Result<TwistedComplex> {
    let space = base.hom(y0, y1);
    let mut degrees = c.keys().map(|&b| space.degree(b));
    let k = degrees.next().unwrap_or(0);
    if degrees.any(|d| d != k) {
        return Err(Error::Invalid(String::from("cone of a morphism of mixed degree")));
    }
    let d = mu_linear(base, &[y0, y1], core::slice::from_ref(c))?;
    if d.values().any(|x| !x.is_zero()) {
        return Err(Error::Invalid(String::from("cone of a morphism that is not closed")));
    }
    let mut delta = BTreeMap::new();
    if !c.is_empty() {
        delta.insert((0, 1), c.clone());
    }
    Ok(TwistedComplex { summands: vec![Summand { object: y0, shift: 1 - k }, Summand { object: y1, shift: 0 }], delta })
}

/// The twist `T_Y X`: the cone over the evaluation `hom(Y, X) ⊗ Y → X`, with
/// one summand of Y per basis element of hom(Y, X). Requires μ¹ = 0 on that hom.
pub fn twist(base: &dyn AInfty, y: usize, x: usize) -> Result<TwistedComplex> {
    let space = base.hom(y, x);
    if !base.differential_vanishes() {
        for b in 0..space.dim() {
            if !base.mu(&[y, x], &[b])?.is_empty() {
                return Err(Error::Invalid(String::from("twist needs a minimal hom(Y, X)")));
            }
        }
    }
    let cutoff = base.cutoff();
    let mut summands = Vec::new();
    let mut delta = BTreeMap::new();
    let n = space.dim();
    for b in 0..n {
        summands.push(Summand { object: y, shift: 1 - space.degree(b) });
        delta.insert((b, n), unit_vec(b, &cutoff));
    }
    summands.push(Summand { object: x, shift: 0 });
    Ok(TwistedComplex { summands, delta })
}

/// One basis element of hom(C, D): summand `from` of C, summand `to` of D, base element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwistedBasis {
    pub from: usize,
    pub to: usize,
    pub element: usize,
}

/// The A∞-category of a finite list of twisted complexes over `base`.
pub struct TwistedCategory<'a> {
    base: &'a dyn AInfty,
    names: Vec<String>,
    complexes: Vec<TwistedComplex>,
    arity_cap: usize,
    homs: BTreeMap<(usize, usize), Arc<GradedSpace>>,
    bases: BTreeMap<(usize, usize), Vec<TwistedBasis>>,
    memo: RefCell<BTreeMap<(Vec<usize>, Vec<usize>), SparseVec>>,
}

impl<'a> TwistedCategory<'a> {
    /// Validates every complex and lays out the hom spaces.
    pub fn new(base: &'a dyn AInfty, objects: Vec<(String, TwistedComplex)>, arity_cap: usize) -> Result<Self> {
        let mut names = Vec::new();
        let mut complexes = Vec::new();
        for (name, tc) in objects {
            if tc.summands.iter().any(|s| s.object >= base.object_count()) {
                return Err(Error::Mismatch(format!("{name} uses an object outside the base category")));
            }
            let report = validate(base, &tc)?;
            if !report.passed() {
                return Err(Error::Invalid(format!("{name} fails the Maurer–Cartan check")));
            }
            names.push(name);
            complexes.push(tc);
        }
        let mut homs = BTreeMap::new();
        let mut bases = BTreeMap::new();
        for (x, cx) in complexes.iter().enumerate() {
            for (y, cy) in complexes.iter().enumerate() {
                let mut labels = Vec::new();
                let mut basis = Vec::new();
                for (i, si) in cx.summands.iter().enumerate() {
                    for (k, sk) in cy.summands.iter().enumerate() {
                        let space = base.hom(si.object, sk.object);
                        for b in 0..space.dim() {
                            labels.push((format!("{i}.{k}:{}", space.label(b)), space.degree(b) + si.shift - sk.shift));
                            basis.push(TwistedBasis { from: i, to: k, element: b });
                        }
                    }
                }
                homs.insert((x, y), Arc::new(GradedSpace::new(labels)?));
                bases.insert((x, y), basis);
            }
        }
        Ok(TwistedCategory { base, names, complexes, arity_cap, homs, bases, memo: RefCell::new(BTreeMap::new()) })
    }

    pub fn base(&self) -> &dyn AInfty {
        self.base
    }

    pub fn complex(&self, x: usize) -> &TwistedComplex {
        &self.complexes[x]
    }

    pub fn basis_element(&self, x: usize, y: usize, i: usize) -> TwistedBasis {
        self.bases[&(x, y)][i]
    }

    /// Index of a basis element of hom(x, y).
    pub fn index_of(&self, x: usize, y: usize, e: TwistedBasis) -> Option<usize> {
        self.bases[&(x, y)].iter().position(|&b| b == e)
    }

    fn compute_mu(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        let d = inputs.len();
        let elems: Vec<TwistedBasis> = (0..d).map(|m| self.basis_element(chain[m], chain[m + 1], inputs[m])).collect();
        // Segments of δ-paths: before the first input, between inputs, after the last.
        let first = &self.complexes[chain[0]];
        let last = &self.complexes[chain[d]];
        let mut segments: Vec<Vec<Vec<usize>>> = Vec::with_capacity(d + 1);
        let mut starts = Vec::new();
        for p in 0..first.summands.len() {
            starts.extend(first.paths_between(p, elems[0].from));
        }
        segments.push(starts);
        for m in 1..d {
            segments.push(self.complexes[chain[m]].paths_between(elems[m - 1].to, elems[m].from));
        }
        segments.push(last.path_ends(elems[d - 1].to));
        if segments.iter().any(|s| s.is_empty()) {
            return Ok(SparseVec::new());
        }
        let cutoff = self.base.cutoff();
        let mut acc = SparseVec::new();
        let mut choice = vec![0usize; d + 1];
        loop {
            let mut base_chain = Vec::new();
            let mut shifts = Vec::new();
            let mut slots: Vec<SparseVec> = Vec::new();
            for (seg, &c) in choice.iter().enumerate() {
                let path = &segments[seg][c];
                let tc = &self.complexes[chain[seg]];
                if seg > 0 {
                    slots.push(unit_vec(elems[seg - 1].element, &cutoff));
                }
                for (t, &k) in path.iter().enumerate() {
                    if t > 0 {
                        slots.push(tc.delta[&(path[t - 1], k)].clone());
                    }
                    base_chain.push(tc.summands[k].object);
                    shifts.push(tc.summands[k].shift);
                }
            }
            if slots.len() > self.base.arity_cap() {
                return Err(Error::MissingArity(slots.len()));
            }
            let v = shifted_mu_linear(self.base, &base_chain, &shifts, &slots)?;
            if !v.is_empty() {
                let from = segments[0][choice[0]][0];
                let to = *segments[d][choice[d]].last().unwrap();
                for (o, c) in v {
                    let idx = self
                        .index_of(chain[0], chain[d], TwistedBasis { from, to, element: o })
                        .ok_or_else(|| Error::Mismatch(String::from("output outside the twisted hom")))?;
                    add_into(&mut acc, idx, &c);
                }
            }
            let mut k = 0;
            loop {
                if k > d {
                    return Ok(acc);
                }
                choice[k] += 1;
                if choice[k] < segments[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }
}

impl AInfty for TwistedCategory<'_> {
    fn object_count(&self) -> usize {
        self.complexes.len()
    }
    fn object_name(&self, x: usize) -> String {
        self.names[x].clone()
    }
    fn hom(&self, x: usize, y: usize) -> Arc<GradedSpace> {
        self.homs[&(x, y)].clone()
    }
    fn arity_cap(&self) -> usize {
        self.arity_cap
    }
    fn mu(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        if inputs.is_empty() || inputs.len() > self.arity_cap {
            return Err(Error::MissingArity(inputs.len()));
        }
        let key = (chain.to_vec(), inputs.to_vec());
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute_mu(chain, inputs)?;
        self.memo.borrow_mut().insert(key, v.clone());
        Ok(v)
    }
    fn cutoff(&self) -> Rat {
        self.base.cutoff()
    }
    fn unit(&self, x: usize) -> Option<usize> {
        let tc = &self.complexes[x];
        if tc.summands.len() != 1 {
            return None;
        }
        let e = self.base.unit(tc.summands[0].object)?;
        self.index_of(x, x, TwistedBasis { from: 0, to: 0, element: e })
    }
    fn differential_vanishes(&self) -> bool {
        self.base.differential_vanishes() && self.complexes.iter().all(|c| c.delta.is_empty())
    }
}

/// (hom(x, y), μ¹) as a chain complex.
pub fn hom_complex(cat: &dyn AInfty, x: usize, y: usize) -> Result<ChainComplex> {
    let space = cat.hom(x, y);
    let mut d = GradedTensor::new(vec![space.clone()], space.clone(), 1);
    if !cat.differential_vanishes() {
        for b in 0..space.dim() {
            for (o, c) in cat.mu(&[x, y], &[b])? {
                d.add_entry(&[b], o, &c)?;
            }
        }
    }
    ChainComplex::new(space, d)
}

/// Graded ranks of H(hom(x, y), μ¹).
pub fn hf_ranks(cat: &dyn AInfty, x: usize, y: usize) -> Result<CohomologyReport> {
    hom_complex(cat, x, y)?.cohomology()
}

/// χ(x, y) = Σ (−1)ⁱ rank Hⁱ hom(x, y).
pub fn euler_pairing(cat: &dyn AInfty, x: usize, y: usize) -> Result<i64> {
    Ok(hf_ranks(cat, x, y)?.euler())
}

/// The matrix of Euler pairings over every object pair.
pub fn euler_matrix(cat: &dyn AInfty) -> Result<Vec<Vec<i64>>> {
    let n = cat.object_count();
    (0..n).map(|x| (0..n).map(|y| euler_pairing(cat, x, y)).collect()).collect()
}

/// Rank over ℚ of an integer matrix.
pub fn integer_rank(m: &[Vec<i64>]) -> Result<usize> {
    if m.is_empty() {
        return Ok(0);
    }
    let cutoff = Rat::from_integer(1.into());
    Ok(Matrix::from_integers(m, &cutoff).rank()?.rank)
}

/// Checks χ(C, Z) = χ(Y₁, Z) − χ(Y₀, Z) and χ(Z, C) = χ(Z, Y₁) − χ(Z, Y₀) for
/// the cone `C` on a morphism `Y₀ → Y₁` of even degree, and with the signs
/// flipped for odd degree. Returns the failing test objects.
pub fn k0_relation_check(cat: &dyn AInfty, cone_obj: usize, y0: usize, y1: usize, degree: i32) -> Result<Vec<usize>> {
    let sign = if degree.rem_euclid(2) == 0 { 1 } else { -1 };
    let mut failures = Vec::new();
    for z in 0..cat.object_count() {
        let right = euler_pairing(cat, cone_obj, z)? == euler_pairing(cat, y1, z)? - sign * euler_pairing(cat, y0, z)?;
        let left = euler_pairing(cat, z, cone_obj)? == euler_pairing(cat, z, y1)? - sign * euler_pairing(cat, z, y0)?;
        if !(right && left) {
            failures.push(z);
        }
    }
    Ok(failures)
}

/// The projection functor X ↦ hom(K₋, X) ⊗ K₊ from `base` into a twisted
/// category whose objects are the images of the base objects, in order.
pub struct ProjectionFunctor<'a, 'b> {
    source: &'a dyn AInfty,
    target: &'b TwistedCategory<'a>,
    minus: usize,
    plus_unit: usize,
    arity_cap: usize,
}

/// The image `hom(K₋, X) ⊗ K₊` of X, one summand of K₊ per basis element.
/// Requires μ¹ = 0 on hom(K₋, X), so δ vanishes.
pub fn projection_object(base: &dyn AInfty, minus: usize, plus: usize, x: usize) -> TwistedComplex {
    let space = base.hom(minus, x);
    TwistedComplex::direct_sum((0..space.dim()).map(|b| Summand { object: plus, shift: -space.degree(b) }).collect())
}

impl<'a, 'b> ProjectionFunctor<'a, 'b> {
    /// `target` must hold `projection_object(source, minus, plus, x)` as its x-th object.
    pub fn new(source: &'a dyn AInfty, target: &'b TwistedCategory<'a>, minus: usize, plus: usize, arity_cap: usize) -> Result<Self> {
        let plus_unit = source.unit(plus).ok_or_else(|| Error::Invalid(String::from("projection functor needs a unit on K₊")))?;
        if !source.differential_vanishes() {
            return Err(Error::Invalid(String::from("projection functor needs a minimal source")));
        }
        for x in 0..source.object_count() {
            if *target.complex(x) != projection_object(source, minus, plus, x) {
                return Err(Error::Mismatch(format!("target object {x} is not the image of {}", source.object_name(x))));
            }
        }
        Ok(ProjectionFunctor { source, target, minus, plus_unit, arity_cap })
    }
}

impl AInftyFunctor for ProjectionFunctor<'_, '_> {
    fn source(&self) -> &dyn AInfty {
        self.source
    }
    fn target(&self) -> &dyn AInfty {
        self.target
    }
    fn map_object(&self, x: usize) -> usize {
        x
    }
    fn arity_cap(&self) -> usize {
        self.arity_cap
    }
    /// Fᵈ(a₁, …, a_d) sends the summand of b ∈ hom(K₋, X₀) to the summands
    /// of μ^{d+1}(b, a₁, …, a_d), tensored with the unit of K₊, with sign
    /// (−1)^{|b|·n} for n the total reduced degree of the a's.
    fn term(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        let src = self.source;
        let start = src.hom(self.minus, chain[0]);
        let mut full_chain = vec![self.minus];
        full_chain.extend_from_slice(chain);
        let reduced: i32 = (0..inputs.len()).map(|j| src.hom(chain[j], chain[j + 1]).degree(inputs[j]) - 1).sum();
        let mut out = SparseVec::new();
        for b in 0..start.dim() {
            let mut full_inputs = vec![b];
            full_inputs.extend_from_slice(inputs);
            for (o, c) in src.mu(&full_chain, &full_inputs)? {
                let idx = self
                    .target
                    .index_of(chain[0], chain[inputs.len()], TwistedBasis { from: b, to: o, element: self.plus_unit })
                    .ok_or_else(|| Error::Mismatch(String::from("projection term outside the target hom")))?;
                let negative = (start.degree(b) * reduced).rem_euclid(2) == 1;
                add_into(&mut out, idx, &if negative { c.neg_ref() } else { c });
            }
        }
        Ok(out)
    }
}
