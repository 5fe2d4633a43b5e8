//! Graded spaces, sparse multilinear maps and exact elimination over the
//! Novikov field.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::novikov::{Novikov, Rat, Valuation};

/// A finite graded basis with unique labels.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedSpace {
    basis: Vec<(String, i32)>,
}

impl GradedSpace {
    pub fn new<S: Into<String>, I: IntoIterator<Item = (S, i32)>>(basis: I) -> Result<Self> {
        let basis: Vec<(String, i32)> = basis.into_iter().map(|(l, d)| (l.into(), d)).collect();
        for (i, (l, _)) in basis.iter().enumerate() {
            if basis[..i].iter().any(|(m, _)| m == l) {
                return Err(Error::Invalid(alloc::format!("duplicate basis label {l}")));
            }
        }
        Ok(GradedSpace { basis })
    }

    pub fn zero() -> Self {
        GradedSpace { basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].1
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].0
    }

    pub fn basis(&self) -> &[(String, i32)] {
        &self.basis
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|(l, _)| l == label)
    }

    /// Dimension in each degree that occurs.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (_, d) in &self.basis {
            *out.entry(*d).or_insert(0) += 1;
        }
        out
    }

    pub fn dim_in(&self, degree: i32) -> usize {
        self.basis.iter().filter(|(_, d)| *d == degree).count()
    }

    /// Indices of basis vectors of the given degree, in basis order.
    pub fn indices_in(&self, degree: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == degree).collect()
    }

    /// The same labels with every degree lowered by `k` (the shift `[k]`).
    pub fn shifted(&self, k: i32) -> Self {
        GradedSpace { basis: self.basis.iter().map(|(l, d)| (l.clone(), d - k)).collect() }
    }
}

/// Sparse vector: basis index → nonzero scalar.
pub type SparseVec = BTreeMap<usize, Novikov>;

pub fn add_into(acc: &mut SparseVec, idx: usize, c: &Novikov) {
    if c.is_zero() && !c.is_truncated() {
        return;
    }
    let sum = match acc.get(&idx) {
        Some(prev) => prev.add_ref(c),
        None => c.clone(),
    };
    if sum.is_zero() {
        acc.remove(&idx);
    } else {
        acc.insert(idx, sum);
    }
}

/// A sparse multilinear map `inputs[0] ⊗ … ⊗ inputs[d-1] → output` of fixed degree.
#[derive(Clone, Debug)]
pub struct GradedTensor {
    inputs: Vec<Arc<GradedSpace>>,
    output: Arc<GradedSpace>,
    degree: i32,
    entries: BTreeMap<Vec<usize>, SparseVec>,
}

impl GradedTensor {
    pub fn new(inputs: Vec<Arc<GradedSpace>>, output: Arc<GradedSpace>, degree: i32) -> Self {
        GradedTensor { inputs, output, degree, entries: BTreeMap::new() }
    }

    pub fn identity(space: Arc<GradedSpace>) -> Self {
        let mut t = GradedTensor::new(vec![space.clone()], space.clone(), 0);
        let cutoff = crate::novikov::int(crate::novikov::DEFAULT_TRUNCATION);
        for i in 0..space.dim() {
            t.entries.insert(vec![i], BTreeMap::from([(i, Novikov::one(cutoff.clone()))]));
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn inputs(&self) -> &[Arc<GradedSpace>] {
        &self.inputs
    }

    pub fn output(&self) -> &Arc<GradedSpace> {
        &self.output
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, SparseVec> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `c · out` to the value on `tuple`; rejects entries of the wrong degree.
    pub fn add_entry(&mut self, tuple: &[usize], out: usize, c: &Novikov) -> Result<()> {
        if tuple.len() != self.arity() {
            return Err(Error::Mismatch(String::from("tuple length differs from arity")));
        }
        let in_deg: i32 = tuple.iter().zip(&self.inputs).map(|(&i, s)| s.degree(i)).sum();
        if self.output.degree(out) != in_deg + self.degree {
            return Err(Error::Mismatch(alloc::format!(
                "entry of degree {} in a tensor of degree {}",
                self.output.degree(out) - in_deg,
                self.degree
            )));
        }
        let slot = self.entries.entry(tuple.to_vec()).or_default();
        add_into(slot, out, c);
        if slot.is_empty() {
            self.entries.remove(tuple);
        }
        Ok(())
    }

    pub fn get(&self, tuple: &[usize]) -> Option<&SparseVec> {
        self.entries.get(tuple)
    }

    /// Substitutes `inner` into input `slot` of `outer`; no sign is applied.
    pub fn compose(outer: &GradedTensor, inner: &GradedTensor, slot: usize) -> Result<GradedTensor> {
        if slot >= outer.arity() || *outer.inputs[slot] != *inner.output {
            return Err(Error::Mismatch(String::from("inner output does not match outer input")));
        }
        let mut inputs = outer.inputs[..slot].to_vec();
        inputs.extend(inner.inputs.iter().cloned());
        inputs.extend(outer.inputs[slot + 1..].iter().cloned());
        let mut out = GradedTensor::new(inputs, outer.output.clone(), outer.degree + inner.degree);
        for (s, inner_val) in &inner.entries {
            for (b, c_in) in inner_val {
                for (t, outer_val) in &outer.entries {
                    if t[slot] != *b {
                        continue;
                    }
                    let mut tuple = t[..slot].to_vec();
                    tuple.extend_from_slice(s);
                    tuple.extend_from_slice(&t[slot + 1..]);
                    for (o, c_out) in outer_val {
                        out.add_entry(&tuple, *o, &c_out.mul_ref(c_in))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Dense matrix of an arity-1 tensor restricted to one input degree.
    pub fn block(&self, in_degree: i32) -> Matrix {
        let rows = self.output.indices_in(in_degree + self.degree);
        let cols = self.inputs[0].indices_in(in_degree);
        let mut m = Matrix::zero(rows.len(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            if let Some(v) = self.entries.get(&vec![c]) {
                for (i, &r) in rows.iter().enumerate() {
                    if let Some(x) = v.get(&r) {
                        m.set(i, j, x.clone());
                    }
                }
            }
        }
        m
    }
}

/// Rank together with the certification flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOutcome {
    pub rank: usize,
    pub certified: bool,
}

/// Dense matrix over the Novikov field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Option<Novikov>>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![None; rows * cols] }
    }

    pub fn identity(n: usize, cutoff: &Rat) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Novikov::one(cutoff.clone()));
        }
        m
    }

    pub fn from_integers(rows: &[Vec<i64>], cutoff: &Rat) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, Novikov::constant(x, cutoff.clone()));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Novikov> {
        self.data[i * self.cols + j].as_ref()
    }

    pub fn set(&mut self, i: usize, j: usize, x: Novikov) {
        self.data[i * self.cols + j] = if x.is_zero() && !x.is_truncated() { None } else { Some(x) };
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(String::from("matrix shapes")));
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let Some(a) = self.get(i, k) else { continue };
                for j in 0..other.cols {
                    let Some(b) = other.get(k, j) else { continue };
                    let prod = a.mul_ref(b);
                    let cur = match out.get(i, j) {
                        Some(c) => c.add_ref(&prod),
                        None => prod,
                    };
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    fn sparse_rows(&self) -> Vec<SparseVec> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter_map(|j| self.get(i, j).map(|x| (j, x.clone())))
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> Result<RankOutcome> {
        rank_of_rows(self.sparse_rows())
    }

    /// Basis of the null space `{v : self · v = 0}`, exact field elimination.
    pub fn kernel(&self) -> Result<Vec<Vec<Novikov>>> {
        let (rref, pivots, _) = self.reduce(true)?;
        Ok(self.kernel_from(&rref, &pivots))
    }

    /// Kernel treating entries known only to vanish below the cutoff as zero;
    /// the flag is false when that happened.
    pub fn kernel_lenient(&self) -> Result<(Vec<Vec<Novikov>>, bool)> {
        let (rref, pivots, certified) = self.reduce(false)?;
        Ok((self.kernel_from(&rref, &pivots), certified))
    }

    fn kernel_from(&self, rref: &Matrix, pivots: &[usize]) -> Vec<Vec<Novikov>> {
        let cutoff = self.max_cutoff();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Novikov::zero(cutoff.clone()); self.cols];
            v[free] = Novikov::one(cutoff.clone());
            for (r, &p) in pivots.iter().enumerate() {
                if let Some(x) = rref.get(r, free) {
                    v[p] = x.neg_ref();
                }
            }
            basis.push(v);
        }
        basis
    }

    fn max_cutoff(&self) -> Rat {
        self.data
            .iter()
            .flatten()
            .map(|x| x.cutoff().clone())
            .max()
            .unwrap_or_else(|| crate::novikov::int(crate::novikov::DEFAULT_TRUNCATION))
    }

    /// Reduced row echelon form and the pivot columns, using field division.
    pub fn rref(&self) -> Result<(Matrix, Vec<usize>)> {
        let (m, p, _) = self.reduce(true)?;
        Ok((m, p))
    }

    fn reduce(&self, strict: bool) -> Result<(Matrix, Vec<usize>, bool)> {
        let mut certified = true;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut best: Option<(Valuation, usize)> = None;
            for i in r..m.rows {
                if let Some(x) = m.get(i, c) {
                    if x.is_zero() {
                        continue;
                    }
                    let v = x.valuation();
                    if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                        best = Some((v, i));
                    }
                }
            }
            let Some((_, pi)) = best else {
                if (r..m.rows).any(|i| m.get(i, c).is_some()) {
                    if strict {
                        return Err(precision_error("row reduction"));
                    }
                    certified = false;
                    for i in r..m.rows {
                        m.data[i * m.cols + c] = None;
                    }
                }
                continue;
            };
            m.swap_rows(r, pi);
            let inv = m.get(r, c).unwrap().inv()?;
            for j in 0..m.cols {
                if let Some(x) = m.get(r, j) {
                    let y = x.mul_ref(&inv);
                    m.set(r, j, y);
                }
            }
            m.set(r, c, Novikov::one(inv.cutoff().clone()));
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let Some(f) = m.get(i, c).cloned() else { continue };
                for j in 0..m.cols {
                    if let Some(x) = m.get(r, j) {
                        let cur = m.get(i, j).cloned().unwrap_or_else(|| Novikov::zero(x.cutoff().clone()));
                        m.set(i, j, cur.sub_ref(&f.mul_ref(x)));
                    }
                }
                m.data[i * m.cols + c] = None;
            }
            pivots.push(c);
            r += 1;
        }
        Ok((m, pivots, certified))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Solves `self · x = b` for one particular solution, if any.
    pub fn solve(&self, b: &[Novikov]) -> Result<Option<Vec<Novikov>>> {
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if let Some(x) = self.get(i, j) {
                    aug.set(i, j, x.clone());
                }
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (rref, pivots) = aug.rref()?;
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let cutoff = aug.max_cutoff();
        let mut x = vec![Novikov::zero(cutoff); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            if let Some(v) = rref.get(r, self.cols) {
                x[p] = v.clone();
            }
        }
        Ok(Some(x))
    }
}

fn precision_error(context: &str) -> Error {
    Error::Precision {
        context: context.to_string(),
        suggested_truncation: String::from("twice the current truncation"),
    }
}

/// Rank by fraction-free elimination with minimal-valuation pivots.
///
/// Ties are broken by row index then column index. An entry with no stored
/// terms but a truncation flag cannot be ruled out as a pivot; if only such
/// entries remain the rank is undecidable and a precision error is returned.
pub fn rank_of_rows(rows: Vec<SparseVec>) -> Result<RankOutcome> {
    rank_rows(rows, true)
}

/// As [`rank_of_rows`], but entries known only to vanish below the cutoff
/// count as zero and clear the certification flag instead of failing.
pub fn rank_of_rows_lenient(rows: Vec<SparseVec>) -> Result<RankOutcome> {
    rank_rows(rows, false)
}

fn rank_rows(mut rows: Vec<SparseVec>, strict: bool) -> Result<RankOutcome> {
    let mut rank = 0;
    let mut certified = true;
    loop {
        let mut best: Option<(Valuation, usize, usize)> = None;
        let mut unresolved_floor: Option<Rat> = None;
        for (i, row) in rows.iter().enumerate() {
            for (&j, x) in row {
                if x.is_zero() {
                    let c = x.cutoff().clone();
                    unresolved_floor = Some(unresolved_floor.map_or(c.clone(), |u| core::cmp::min(u, c)));
                    continue;
                }
                let key = (x.valuation(), i, j);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            if unresolved_floor.is_some() {
                if strict {
                    return Err(precision_error("rank computation"));
                }
                certified = false;
            }
            return Ok(RankOutcome { rank, certified });
        };
        if let (Some(floor), Valuation::Finite(pv)) = (&unresolved_floor, &v) {
            if pv >= floor {
                certified = false;
            }
        }
        let pivot_row = rows.swap_remove(pi);
        let p = pivot_row[&pj].clone();
        for row in rows.iter_mut() {
            let Some(a) = row.get(&pj).cloned() else { continue };
            let mut next = SparseVec::new();
            for (&j, x) in row.iter() {
                if j != pj {
                    add_into(&mut next, j, &x.mul_ref(&p));
                }
            }
            for (&j, y) in &pivot_row {
                if j != pj {
                    add_into(&mut next, j, &y.mul_ref(&a).neg_ref());
                }
            }
            normalize_row(&mut next);
            *row = next;
        }
        rows.retain(|r| !r.is_empty());
        rank += 1;
    }
}

/// Divides a row by the leading coefficient of its first minimal-valuation entry.
fn normalize_row(row: &mut SparseVec) {
    let lead = row
        .values()
        .filter(|x| !x.is_zero())
        .min_by(|a, b| a.valuation().cmp(&b.valuation()))
        .and_then(|x| x.leading_coefficient().cloned());
    if let Some(c) = lead {
        if !c.is_one() && !c.is_zero() {
            let inv = c.recip();
            for x in row.values_mut() {
                *x = x.scale(&inv);
            }
        }
    }
}

/// Cohomology ranks per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub ranks: BTreeMap<i32, usize>,
    pub certified: bool,
}

impl CohomologyReport {
    pub fn total(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn euler(&self) -> i64 {
        self.ranks
            .iter()
            .map(|(d, r)| if d.rem_euclid(2) == 0 { *r as i64 } else { -(*r as i64) })
            .sum()
    }

    pub fn rank_in(&self, degree: i32) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }
}

/// A cochain complex on one graded space.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    space: Arc<GradedSpace>,
    differential: GradedTensor,
}

impl ChainComplex {
    /// Validates shape, degree and `d ∘ d = 0`.
    pub fn new(space: Arc<GradedSpace>, differential: GradedTensor) -> Result<Self> {
        if differential.arity() != 1
            || differential.degree() != 1
            || *differential.inputs()[0] != *space
            || **differential.output() != *space
        {
            return Err(Error::Mismatch(String::from("differential must be a degree-1 endomorphism")));
        }
        let square = GradedTensor::compose(&differential, &differential, 0)?;
        if !square.is_zero() {
            return Err(Error::Invalid(String::from("differential does not square to zero")));
        }
        Ok(ChainComplex { space, differential })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn differential(&self) -> &GradedTensor {
        &self.differential
    }

    pub fn cohomology(&self) -> Result<CohomologyReport> {
        let dims = self.space.dims();
        let mut ranks_d: BTreeMap<i32, usize> = BTreeMap::new();
        let mut certified = true;
        for &deg in dims.keys() {
            let r = self.differential.block(deg).rank()?;
            certified &= r.certified;
            ranks_d.insert(deg, r.rank);
        }
        let mut ranks = BTreeMap::new();
        for (&deg, &n) in &dims {
            let out = ranks_d.get(&deg).copied().unwrap_or(0);
            let inc = ranks_d.get(&(deg - 1)).copied().unwrap_or(0);
            ranks.insert(deg, n - out - inc);
        }
        Ok(CohomologyReport { ranks, certified })
    }

    /// A strong deformation retract onto chosen cohomology representatives.
    pub fn splitting(&self) -> Result<Splitting> {
        Splitting::compute(self)
    }
}

/// Inclusion, projection and homotopy with `id − i∘p = d∘h + h∘d`,
/// `p∘i = id`, `h∘h = 0`, `h∘i = 0`, `p∘h = 0`.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub cohomology: Arc<GradedSpace>,
    pub inclusion: GradedTensor,
    pub projection: GradedTensor,
    pub homotopy: GradedTensor,
}

impl Splitting {
    pub fn compute(c: &ChainComplex) -> Result<Self> {
        let space = c.space.clone();
        let n = space.dim();
        let d = &c.differential;
        let cutoff = d
            .entries()
            .values()
            .flat_map(|v| v.values())
            .map(|x| x.cutoff().clone())
            .max()
            .unwrap_or_else(|| crate::novikov::int(crate::novikov::DEFAULT_TRUNCATION));
        let mut h_basis: Vec<(Vec<Novikov>, i32)> = Vec::new();
        // Complement W of Z in each degree, and the images d(W) spanning B.
        let mut w_vectors: Vec<Vec<Novikov>> = Vec::new();
        let mut b_vectors: Vec<Vec<Novikov>> = Vec::new();
        let degrees: Vec<i32> = space.dims().keys().copied().collect();
        for &deg in &degrees {
            let idx = space.indices_in(deg);
            let block = d.block(deg);
            let (_, pivots) = block.rref()?;
            for &p in &pivots {
                let mut w = vec![Novikov::zero(cutoff.clone()); n];
                w[idx[p]] = Novikov::one(cutoff.clone());
                let mut image = vec![Novikov::zero(cutoff.clone()); n];
                for (o, x) in d.get(&[idx[p]]).into_iter().flatten() {
                    image[*o] = x.clone();
                }
                w_vectors.push(w);
                b_vectors.push(image);
            }
            // cycles of this degree, then extend the boundaries to a basis of them
            let kernel = block.kernel()?;
            let b_here: Vec<Vec<Novikov>> =
                b_vectors.iter().filter(|v| vec_degree(&space, v) == Some(deg)).cloned().collect();
            let mut chosen: Vec<Vec<Novikov>> = b_here.clone();
            for k in kernel {
                let mut full = vec![Novikov::zero(cutoff.clone()); n];
                for (local, x) in k.into_iter().enumerate() {
                    full[idx[local]] = x;
                }
                let mut trial = chosen.clone();
                trial.push(full.clone());
                if columns_rank(&trial)? > chosen.len() {
                    chosen.push(full.clone());
                    h_basis.push((full, deg));
                }
            }
        }
        let cohomology = Arc::new(GradedSpace::new(
            h_basis.iter().enumerate().map(|(i, (_, deg))| (alloc::format!("h{i}"), *deg)),
        )?);
        // Basis change: columns [H | B | W] in C.
        let mut cols: Vec<Vec<Novikov>> = h_basis.iter().map(|(v, _)| v.clone()).collect();
        cols.extend(b_vectors.iter().cloned());
        cols.extend(w_vectors.iter().cloned());
        if cols.len() != n {
            return Err(Error::Invalid(String::from("splitting basis has wrong size")));
        }
        let mut change = Matrix::zero(n, n);
        for (j, v) in cols.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                change.set(i, j, x.clone());
            }
        }
        let nh = h_basis.len();
        let nb = b_vectors.len();
        let single = vec![space.clone()];
        let mut inclusion = GradedTensor::new(vec![cohomology.clone()], space.clone(), 0);
        let mut projection = GradedTensor::new(single.clone(), cohomology.clone(), 0);
        let mut homotopy = GradedTensor::new(single, space.clone(), -1);
        for (k, (v, _)) in h_basis.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    inclusion.add_entry(&[k], i, x)?;
                }
            }
        }
        // coordinates of each standard basis vector in the [H | B | W] basis
        for e in 0..n {
            let mut rhs = vec![Novikov::zero(cutoff.clone()); n];
            rhs[e] = Novikov::one(cutoff.clone());
            let coords = change
                .solve(&rhs)?
                .ok_or_else(|| Error::Invalid(String::from("splitting basis is singular")))?;
            for k in 0..nh {
                if !coords[k].is_zero() {
                    projection.add_entry(&[e], k, &coords[k])?;
                }
            }
            for bi in 0..nb {
                let c = &coords[nh + bi];
                if c.is_zero() {
                    continue;
                }
                for (i, x) in w_vectors[bi].iter().enumerate() {
                    if !x.is_zero() {
                        homotopy.add_entry(&[e], i, &c.mul_ref(x))?;
                    }
                }
            }
        }
        Ok(Splitting { cohomology, inclusion, projection, homotopy })
    }

    /// Checks the deformation-retract identities exactly.
    pub fn validate(&self, c: &ChainComplex) -> Result<()> {
        let d = c.differential();
        let space = c.space().clone();
        let pi = GradedTensor::compose(&self.projection, &self.inclusion, 0)?;
        let id_h = GradedTensor::identity(self.cohomology.clone());
        if !tensors_equal(&pi, &id_h) {
            return Err(Error::Invalid(String::from("projection after inclusion is not the identity")));
        }
        let ip = GradedTensor::compose(&self.inclusion, &self.projection, 0)?;
        let dh = GradedTensor::compose(d, &self.homotopy, 0)?;
        let hd = GradedTensor::compose(&self.homotopy, d, 0)?;
        let mut lhs = GradedTensor::identity(space.clone());
        for (t, v) in ip.entries() {
            for (o, x) in v {
                lhs.add_entry(t, *o, &x.neg_ref())?;
            }
        }
        let mut rhs = dh;
        for (t, v) in hd.entries() {
            for (o, x) in v {
                rhs.add_entry(t, *o, x)?;
            }
        }
        if !tensors_equal(&lhs, &rhs) {
            return Err(Error::Invalid(String::from("homotopy relation fails")));
        }
        for (name, t) in [
            ("h∘h", GradedTensor::compose(&self.homotopy, &self.homotopy, 0)?),
            ("h∘i", GradedTensor::compose(&self.homotopy, &self.inclusion, 0)?),
            ("p∘h", GradedTensor::compose(&self.projection, &self.homotopy, 0)?),
        ] {
            if !t.is_zero() {
                return Err(Error::Invalid(alloc::format!("side condition {name} = 0 fails")));
            }
        }
        Ok(())
    }
}

fn vec_degree(space: &GradedSpace, v: &[Novikov]) -> Option<i32> {
    v.iter().position(|x| !x.is_zero()).map(|i| space.degree(i))
}

fn columns_rank(cols: &[Vec<Novikov>]) -> Result<usize> {
    let rows: Vec<SparseVec> = cols
        .iter()
        .map(|v| v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect())
        .collect();
    Ok(rank_of_rows(rows)?.rank)
}

/// Entrywise equality of two tensors with the same shape.
pub fn tensors_equal(a: &GradedTensor, b: &GradedTensor) -> bool {
    let keys: alloc::collections::BTreeSet<&Vec<usize>> = a.entries().keys().chain(b.entries().keys()).collect();
    let empty = SparseVec::new();
    keys.into_iter().all(|k| {
        let va = a.get(k).unwrap_or(&empty);
        let vb = b.get(k).unwrap_or(&empty);
        let outs: alloc::collections::BTreeSet<&usize> = va.keys().chain(vb.keys()).collect();
        outs.into_iter().all(|o| {
            let x = va.get(o).map(|x| x.terms().to_vec()).unwrap_or_default();
            let y = vb.get(o).map(|x| x.terms().to_vec()).unwrap_or_default();
            x == y
        })
    })
}

/// Integer-entry helper used by tests and examples.
pub fn int_matrix(rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_integers(rows, &crate::novikov::int(crate::novikov::DEFAULT_TRUNCATION))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::int;

    fn space(dims: &[(i32, usize)]) -> Arc<GradedSpace> {
        let mut basis = Vec::new();
        for &(deg, n) in dims {
            for i in 0..n {
                basis.push((alloc::format!("v{deg}_{i}"), deg));
            }
        }
        Arc::new(GradedSpace::new(basis).unwrap())
    }

    fn one() -> Novikov {
        Novikov::one(int(20))
    }

    #[test]
    fn zero_differential_keeps_ranks() {
        let s = space(&[(0, 2), (1, 1)]);
        let d = GradedTensor::new(vec![s.clone()], s.clone(), 1);
        let c = ChainComplex::new(s, d).unwrap();
        let h = c.cohomology().unwrap();
        assert_eq!(h.ranks, BTreeMap::from([(0, 2), (1, 1)]));
        assert!(h.certified);
    }

    #[test]
    fn identity_differential_is_acyclic() {
        let s = space(&[(0, 1), (1, 1)]);
        let mut d = GradedTensor::new(vec![s.clone()], s.clone(), 1);
        d.add_entry(&[0], 1, &one()).unwrap();
        let c = ChainComplex::new(s, d).unwrap();
        assert_eq!(c.cohomology().unwrap().total(), 0);
        let split = c.splitting().unwrap();
        split.validate(&c).unwrap();
        assert_eq!(split.cohomology.dim(), 0);
    }

    #[test]
    fn degree_is_enforced() {
        let s = space(&[(0, 1), (1, 1)]);
        let mut d = GradedTensor::new(vec![s.clone()], s.clone(), 1);
        assert!(d.add_entry(&[0], 0, &one()).is_err());
    }

    #[test]
    fn compose_with_identity() {
        let s = space(&[(0, 2)]);
        let mut f = GradedTensor::new(vec![s.clone()], s.clone(), 0);
        f.add_entry(&[0], 1, &one()).unwrap();
        f.add_entry(&[1], 1, &Novikov::constant(3, int(20))).unwrap();
        let id = GradedTensor::identity(s);
        assert!(tensors_equal(&GradedTensor::compose(&id, &f, 0).unwrap(), &f));
        assert!(tensors_equal(&GradedTensor::compose(&f, &id, 0).unwrap(), &f));
    }

    #[test]
    fn flagged_zero_blocks_rank() {
        let flagged = Novikov::monomial(int(1), int(30), int(20));
        let rows = vec![SparseVec::from([(0, flagged)])];
        assert!(matches!(rank_of_rows(rows), Err(Error::Precision { .. })));
    }

    #[test]
    fn small_ranks() {
        assert_eq!(int_matrix(&[vec![1, 2], vec![2, 4]]).rank().unwrap().rank, 1);
        assert_eq!(int_matrix(&[vec![0, 0], vec![0, 0]]).rank().unwrap().rank, 0);
        assert_eq!(Matrix::identity(5, &int(20)).rank().unwrap().rank, 5);
    }
}
