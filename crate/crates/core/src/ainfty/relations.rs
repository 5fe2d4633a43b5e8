use alloc::string::String;
use alloc::vec::Vec;

use super::category::{chains, for_each_basis_tuple, mu_linear, AInfty};
use super::functor::AInftyFunctor;
use crate::error::{Error, Result};
use crate::glinalg::{add_into, SparseVec};
use crate::novikov::Novikov;

/// One nonzero entry of a relation residual.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub chain: Vec<usize>,
    pub inputs: Vec<usize>,
    pub output: usize,
    pub value: Novikov,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub arity_cap: usize,
    pub tuples_checked: usize,
    pub residuals: Vec<Residual>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// ✠ₙ = Σ_{j≤n} |a_j| − n for the first `n` inputs of a tuple on `chain`.
pub fn dagger(cat: &dyn AInfty, chain: &[usize], inputs: &[usize], n: usize) -> i32 {
    (0..n).map(|j| cat.hom(chain[j], chain[j + 1]).degree(inputs[j]) - 1).sum()
}

pub(crate) fn sign_of(exp: i32) -> bool {
    exp.rem_euclid(2) == 1
}

/// A term μ^{d−m+1}(…, μᵐ(…), …) of the arity-d relation; the inner
/// operation eats inputs n+1, …, n+m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RelationTerm {
    pub m: usize,
    pub n: usize,
}

/// The terms summed by the relation checker in arity d.
pub fn relation_terms(d: usize) -> Vec<RelationTerm> {
    let mut out = Vec::new();
    for m in 1..=d {
        for n in 0..=d - m {
            out.push(RelationTerm { m, n });
        }
    }
    out
}

/// Terms of the functor equation in arity d.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FunctorTerm {
    /// μ_B^r(F^{s_r}, …, F^{s_1}) with block sizes `parts = [s_1, …, s_r]`.
    Composition { parts: Vec<usize> },
    /// F^{d−m+1}(…, μ_A^m(…), …) with the inner operation after n inputs.
    Insertion { m: usize, n: usize },
}

pub fn functor_terms(d: usize) -> Vec<FunctorTerm> {
    let mut out = Vec::new();
    for parts in compositions(d) {
        out.push(FunctorTerm::Composition { parts });
    }
    for t in relation_terms(d) {
        out.push(FunctorTerm::Insertion { m: t.m, n: t.n });
    }
    out
}

/// Ordered compositions of d into positive parts.
pub(crate) fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=d {
        for mut rest in compositions(d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The full signed relation sum on one basis tuple.
pub fn relation_residual(cat: &dyn AInfty, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
    let d = inputs.len();
    let vanishing = cat.differential_vanishes();
    let mut acc = SparseVec::new();
    for RelationTerm { m, n } in relation_terms(d) {
        let outer_arity = d - m + 1;
        if vanishing && (m == 1 || outer_arity == 1) {
            continue;
        }
        if m > cat.arity_cap() || outer_arity > cat.arity_cap() {
            return Err(Error::MissingArity(m.max(outer_arity)));
        }
        let inner = cat.mu(&chain[n..=n + m], &inputs[n..n + m])?;
        if inner.is_empty() {
            continue;
        }
        let negative = sign_of(dagger(cat, chain, inputs, n));
        let mut outer_chain = chain[..=n].to_vec();
        outer_chain.extend_from_slice(&chain[n + m..]);
        for (b, c) in inner {
            let mut outer_inputs = inputs[..n].to_vec();
            outer_inputs.push(b);
            outer_inputs.extend_from_slice(&inputs[n + m..]);
            let c = if negative { c.neg_ref() } else { c };
            for (o, x) in cat.mu(&outer_chain, &outer_inputs)? {
                add_into(&mut acc, o, &x.mul_ref(&c));
            }
        }
    }
    Ok(acc)
}

/// Assembles every relation of arity ≤ `arity_cap` and lists nonzero residuals.
pub fn check_ainfty_relations(cat: &dyn AInfty, arity_cap: usize) -> Result<RelationReport> {
    let mut report = RelationReport { arity_cap, tuples_checked: 0, residuals: Vec::new() };
    for d in 1..=arity_cap {
        for chain in chains(cat, d) {
            for_each_basis_tuple(cat, &chain, &mut |tuple| {
                report.tuples_checked += 1;
                for (o, v) in relation_residual(cat, &chain, tuple)? {
                    report.residuals.push(Residual { chain: chain.clone(), inputs: tuple.to_vec(), output: o, value: v });
                }
                Ok(())
            })?;
        }
    }
    Ok(report)
}

/// Signed difference of the two sides of the functor equation on one tuple.
pub fn functor_residual(f: &dyn AInftyFunctor, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
    let a = f.source();
    let b = f.target();
    let d = inputs.len();
    let mut acc = SparseVec::new();
    for term in functor_terms(d) {
        match term {
            FunctorTerm::Composition { parts } => {
                let r = parts.len();
                if r == 1 && b.differential_vanishes() {
                    continue;
                }
                if r > b.arity_cap() {
                    return Err(Error::MissingArity(r));
                }
                let mut blocks = Vec::with_capacity(r);
                let mut target_chain = alloc::vec![f.map_object(chain[0])];
                let mut start = 0;
                let mut empty = false;
                for &s in &parts {
                    let v = f.term(&chain[start..=start + s], &inputs[start..start + s])?;
                    empty |= v.is_empty();
                    blocks.push(v);
                    start += s;
                    target_chain.push(f.map_object(chain[start]));
                }
                if empty {
                    continue;
                }
                for (o, x) in mu_linear(b, &target_chain, &blocks)? {
                    add_into(&mut acc, o, &x);
                }
            }
            FunctorTerm::Insertion { m, n } => {
                if m == 1 && a.differential_vanishes() {
                    continue;
                }
                let inner = a.mu(&chain[n..=n + m], &inputs[n..n + m])?;
                if inner.is_empty() {
                    continue;
                }
                let negative = sign_of(dagger(a, chain, inputs, n));
                let mut outer_chain = chain[..=n].to_vec();
                outer_chain.extend_from_slice(&chain[n + m..]);
                for (bi, c) in inner {
                    let mut outer_inputs = inputs[..n].to_vec();
                    outer_inputs.push(bi);
                    outer_inputs.extend_from_slice(&inputs[n + m..]);
                    let c = if negative { c } else { c.neg_ref() };
                    for (o, x) in f.term(&outer_chain, &outer_inputs)? {
                        add_into(&mut acc, o, &x.mul_ref(&c));
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// Checks the functor equations through `arity_cap`.
pub fn check_functor_equations(f: &dyn AInftyFunctor, arity_cap: usize) -> Result<RelationReport> {
    let mut report = RelationReport { arity_cap, tuples_checked: 0, residuals: Vec::new() };
    let a = f.source();
    for d in 1..=arity_cap {
        for chain in chains(a, d) {
            for_each_basis_tuple(a, &chain, &mut |tuple| {
                report.tuples_checked += 1;
                for (o, v) in functor_residual(f, &chain, tuple)? {
                    report.residuals.push(Residual { chain: chain.clone(), inputs: tuple.to_vec(), output: o, value: v });
                }
                Ok(())
            })?;
        }
    }
    Ok(report)
}

/// Human-readable description of a residual, naming objects and basis labels.
pub fn describe_residual(cat: &dyn AInfty, r: &Residual) -> String {
    let names: Vec<String> = r.chain.iter().map(|&x| cat.object_name(x)).collect();
    let labels: Vec<String> = r
        .inputs
        .iter()
        .enumerate()
        .map(|(i, &k)| String::from(cat.hom(r.chain[i], r.chain[i + 1]).label(k)))
        .collect();
    let out_space = cat.hom(r.chain[0], r.chain[r.chain.len() - 1]);
    let out_label = if r.output < out_space.dim() { String::from(out_space.label(r.output)) } else { String::from("?") };
    alloc::format!("[{}] ({}) -> {}: {}", names.join(", "), labels.join(", "), out_label, r.value)
}
