use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::glinalg::{add_into, GradedSpace, GradedTensor, SparseVec};
use crate::novikov::{Novikov, Rat};

/// Read access to an A∞-category with finitely many objects.
pub trait AInfty {
    fn object_count(&self) -> usize;
    fn object_name(&self, x: usize) -> String;
    fn hom(&self, x: usize, y: usize) -> Arc<GradedSpace>;
    /// Largest d for which μᵈ is available.
    fn arity_cap(&self) -> usize;
    /// μᵈ on basis elements: `chain = [X_0, …, X_d]`, `inputs[i-1] ∈ hom(X_{i-1}, X_i)`.
    fn mu(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec>;
    /// Truncation every structure constant respects.
    fn cutoff(&self) -> Rat;
    /// Basis index of the strict unit in hom(x, x), when one exists.
    fn unit(&self, _x: usize) -> Option<usize> {
        None
    }
    /// True when μ¹ vanishes identically, letting checkers skip μᵈ beyond
    /// the cap whenever it only meets μ¹.
    fn differential_vanishes(&self) -> bool {
        false
    }
}

impl<T: AInfty + ?Sized> AInfty for &T {
    fn object_count(&self) -> usize {
        (**self).object_count()
    }
    fn object_name(&self, x: usize) -> String {
        (**self).object_name(x)
    }
    fn hom(&self, x: usize, y: usize) -> Arc<GradedSpace> {
        (**self).hom(x, y)
    }
    fn arity_cap(&self) -> usize {
        (**self).arity_cap()
    }
    fn mu(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        (**self).mu(chain, inputs)
    }
    fn cutoff(&self) -> Rat {
        (**self).cutoff()
    }
    fn unit(&self, x: usize) -> Option<usize> {
        (**self).unit(x)
    }
    fn differential_vanishes(&self) -> bool {
        (**self).differential_vanishes()
    }
}

/// μᵈ applied to linear combinations in each slot.
pub fn mu_linear(cat: &dyn AInfty, chain: &[usize], inputs: &[SparseVec]) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    let mut err = None;
    for_each_tuple(inputs, &mut |tuple, coeff| {
        if err.is_some() {
            return;
        }
        match cat.mu(chain, tuple) {
            Ok(v) => {
                for (o, c) in v {
                    add_into(&mut out, o, &c.mul_ref(coeff));
                }
            }
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Visits every basis tuple of a product of combinations with its coefficient.
pub fn for_each_tuple(inputs: &[SparseVec], f: &mut dyn FnMut(&[usize], &Novikov)) {
    fn rec(inputs: &[SparseVec], tuple: &mut Vec<usize>, coeff: Option<Novikov>, f: &mut dyn FnMut(&[usize], &Novikov)) {
        if tuple.len() == inputs.len() {
            if let Some(c) = coeff {
                f(tuple, &c);
            }
            return;
        }
        for (i, c) in &inputs[tuple.len()] {
            let next = match &coeff {
                Some(prev) => prev.mul_ref(c),
                None => c.clone(),
            };
            tuple.push(*i);
            rec(inputs, tuple, Some(next), f);
            tuple.pop();
        }
    }
    if inputs.is_empty() {
        return;
    }
    rec(inputs, &mut Vec::new(), None, f);
}

/// Iterator over composable object chains of a fixed length with nonzero homs.
pub struct ChainIter {
    n: usize,
    len: usize,
    allowed: Vec<Vec<bool>>,
    stack: Vec<usize>,
    started: bool,
}

/// All chains `[X_0, …, X_d]` whose consecutive homs are nonzero.
pub fn chains(cat: &dyn AInfty, d: usize) -> ChainIter {
    let n = cat.object_count();
    let allowed = (0..n).map(|x| (0..n).map(|y| cat.hom(x, y).dim() > 0).collect()).collect();
    ChainIter { n, len: d + 1, allowed, stack: Vec::new(), started: false }
}

impl ChainIter {
    fn ok(&self, i: usize) -> bool {
        i == 0 || self.allowed[self.stack[i - 1]][self.stack[i]]
    }

    /// Fills the stack from position `from` with the smallest valid tail.
    fn fill(&mut self, from: usize) -> bool {
        let mut i = from;
        while i < self.len {
            if self.stack.len() == i {
                self.stack.push(0);
            }
            loop {
                if self.stack[i] >= self.n {
                    // backtrack
                    self.stack.truncate(i);
                    if i == 0 {
                        return false;
                    }
                    i -= 1;
                    self.stack[i] += 1;
                    continue;
                }
                if self.ok(i) {
                    break;
                }
                self.stack[i] += 1;
            }
            i += 1;
        }
        true
    }
}

impl Iterator for ChainIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.n == 0 {
            return None;
        }
        if !self.started {
            self.started = true;
            return if self.fill(0) { Some(self.stack.clone()) } else { None };
        }
        let last = self.len - 1;
        self.stack[last] += 1;
        if self.fill(last) {
            Some(self.stack.clone())
        } else {
            None
        }
    }
}

/// Calls `f` on every basis tuple for a chain.
pub fn for_each_basis_tuple(cat: &dyn AInfty, chain: &[usize], f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    let dims: Vec<usize> = chain.windows(2).map(|w| cat.hom(w[0], w[1]).dim()).collect();
    if dims.contains(&0) {
        return Ok(());
    }
    let mut tuple = vec![0usize; dims.len()];
    loop {
        f(&tuple)?;
        let mut k = 0;
        loop {
            if k == dims.len() {
                return Ok(());
            }
            tuple[k] += 1;
            if tuple[k] < dims[k] {
                break;
            }
            tuple[k] = 0;
            k += 1;
        }
    }
}

/// An A∞-category stored as explicit μ tables, one tensor per object chain.
#[derive(Clone, Debug)]
pub struct TableCategory {
    names: Vec<String>,
    homs: BTreeMap<(usize, usize), Arc<GradedSpace>>,
    mu: BTreeMap<Vec<usize>, GradedTensor>,
    arity_cap: usize,
    units: BTreeMap<usize, usize>,
    cutoff: Rat,
}

impl TableCategory {
    pub fn new(names: Vec<String>, arity_cap: usize, cutoff: Rat) -> Self {
        TableCategory { names, homs: BTreeMap::new(), mu: BTreeMap::new(), arity_cap, units: BTreeMap::new(), cutoff }
    }

    pub fn set_hom(&mut self, x: usize, y: usize, space: GradedSpace) {
        self.homs.insert((x, y), Arc::new(space));
    }

    pub fn set_unit(&mut self, x: usize, basis_index: usize) {
        self.units.insert(x, basis_index);
    }

    pub fn set_arity_cap(&mut self, cap: usize) {
        self.arity_cap = cap;
    }

    fn tensor_mut(&mut self, chain: &[usize]) -> &mut GradedTensor {
        if !self.mu.contains_key(chain) {
            let inputs = chain.windows(2).map(|w| self.hom(w[0], w[1])).collect();
            let output = self.hom(chain[0], chain[chain.len() - 1]);
            let degree = 2 - (chain.len() as i32 - 1);
            self.mu.insert(chain.to_vec(), GradedTensor::new(inputs, output, degree));
        }
        self.mu.get_mut(chain).unwrap()
    }

    /// Adds `c · out` to μᵈ(inputs) on the chain.
    pub fn add_mu(&mut self, chain: &[usize], inputs: &[usize], out: usize, c: &Novikov) -> Result<()> {
        if chain.len() != inputs.len() + 1 || inputs.is_empty() {
            return Err(Error::Mismatch(String::from("chain length must be arity + 1")));
        }
        self.tensor_mut(chain).add_entry(inputs, out, c)
    }

    /// Stored μ tables keyed by object chain.
    pub fn tables(&self) -> &BTreeMap<Vec<usize>, GradedTensor> {
        &self.mu
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn set_cutoff(&mut self, cutoff: Rat) {
        self.cutoff = cutoff;
    }

    /// Copies every μᵈ with d ≤ `cap` out of another category.
    pub fn snapshot(cat: &dyn AInfty, cap: usize) -> Result<Self> {
        let n = cat.object_count();
        let mut t = TableCategory::new((0..n).map(|x| cat.object_name(x)).collect(), cap, cat.cutoff());
        for x in 0..n {
            for y in 0..n {
                t.set_hom(x, y, (*cat.hom(x, y)).clone());
            }
            if let Some(u) = cat.unit(x) {
                t.set_unit(x, u);
            }
        }
        for d in 1..=cap {
            for chain in chains(cat, d) {
                let mut entries = Vec::new();
                for_each_basis_tuple(cat, &chain, &mut |tuple| {
                    for (o, c) in cat.mu(&chain, tuple)? {
                        entries.push((tuple.to_vec(), o, c));
                    }
                    Ok(())
                })?;
                for (tuple, o, c) in entries {
                    t.add_mu(&chain, &tuple, o, &c)?;
                }
            }
        }
        Ok(t)
    }

    /// Flips the sign of one stored structure constant.
    pub fn negate_entry(&mut self, chain: &[usize], inputs: &[usize], out: usize) -> Result<()> {
        let current = self
            .mu
            .get(chain)
            .and_then(|t| t.get(inputs))
            .and_then(|v| v.get(&out))
            .cloned()
            .ok_or_else(|| Error::Invalid(String::from("no such structure constant")))?;
        self.add_mu(chain, inputs, out, &current.neg_ref().scale(&crate::novikov::int(2)))
    }

    /// Every stored structure constant as (chain, inputs, output).
    pub fn entry_keys(&self) -> Vec<(Vec<usize>, Vec<usize>, usize)> {
        let mut out = Vec::new();
        for (chain, t) in &self.mu {
            for (tuple, v) in t.entries() {
                for o in v.keys() {
                    out.push((chain.clone(), tuple.clone(), *o));
                }
            }
        }
        out
    }
}

impl AInfty for TableCategory {
    fn object_count(&self) -> usize {
        self.names.len()
    }

    fn object_name(&self, x: usize) -> String {
        self.names[x].clone()
    }

    fn hom(&self, x: usize, y: usize) -> Arc<GradedSpace> {
        self.homs.get(&(x, y)).cloned().unwrap_or_else(|| Arc::new(GradedSpace::zero()))
    }

    fn arity_cap(&self) -> usize {
        self.arity_cap
    }

    fn mu(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        let d = inputs.len();
        if d > self.arity_cap {
            return Err(Error::MissingArity(d));
        }
        Ok(self
            .mu
            .get(chain)
            .and_then(|t| t.get(inputs))
            .cloned()
            .unwrap_or_default())
    }

    fn cutoff(&self) -> Rat {
        self.cutoff.clone()
    }

    fn unit(&self, x: usize) -> Option<usize> {
        self.units.get(&x).copied()
    }

    fn differential_vanishes(&self) -> bool {
        self.mu.iter().all(|(chain, t)| chain.len() != 2 || t.is_zero())
    }
}
