//! Face lattices of the associahedra and multiplihedra as trees, and their
//! facet bijections with the terms of the A∞ relations and functor equations.
//!
//! A face of the associahedron Kₐ is a planar tree with d leaves whose
//! internal vertices have at least two children. A face of the multiplihedron
//! Jₐ is a painted tree: painted vertices (target operations, at least two
//! children) near the root, one functor vertex (at least one child) on every
//! root-to-leaf path, and unpainted planar trees above it. The dimension of a
//! face is Σ(children − 2) over operation vertices plus Σ(children − 1) over
//! functor vertices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ainfty::{functor_terms, relation_terms, FunctorTerm, RelationTerm};
use crate::error::{Error, Result};

/// Planar rooted tree; `Node` has at least two children.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(c) => c.iter().map(PlanarTree::leaves).sum(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(c) => c.len() - 2 + c.iter().map(PlanarTree::dim).sum::<usize>(),
        }
    }

    pub fn internal_vertices(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(c) => 1 + c.iter().map(PlanarTree::internal_vertices).sum::<usize>(),
        }
    }

    /// Trees obtained by contracting one internal edge.
    pub fn contractions(&self) -> Vec<PlanarTree> {
        let PlanarTree::Node(c) = self else { return Vec::new() };
        let mut out = Vec::new();
        for (i, child) in c.iter().enumerate() {
            if let PlanarTree::Node(grand) = child {
                let mut merged = c[..i].to_vec();
                merged.extend(grand.iter().cloned());
                merged.extend(c[i + 1..].iter().cloned());
                out.push(PlanarTree::Node(merged));
            }
            for sub in child.contractions() {
                let mut next = c.clone();
                next[i] = sub;
                out.push(PlanarTree::Node(next));
            }
        }
        out
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => f.write_str("x"),
            PlanarTree::Node(c) => {
                f.write_str("m(")?;
                write_list(f, c)?;
                f.write_str(")")
            }
        }
    }
}

/// Two-coloured tree; `Painted` has at least two children, `Functor` at least one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PaintedTree {
    Painted(Vec<PaintedTree>),
    Functor(Vec<PlanarTree>),
}

impl PaintedTree {
    pub fn leaves(&self) -> usize {
        match self {
            PaintedTree::Painted(c) => c.iter().map(PaintedTree::leaves).sum(),
            PaintedTree::Functor(c) => c.iter().map(PlanarTree::leaves).sum(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PaintedTree::Painted(c) => c.len() - 2 + c.iter().map(PaintedTree::dim).sum::<usize>(),
            PaintedTree::Functor(c) => c.len() - 1 + c.iter().map(PlanarTree::dim).sum::<usize>(),
        }
    }

    /// Trees obtained by contracting one edge or one painted vertex into its functor children.
    pub fn contractions(&self) -> Vec<PaintedTree> {
        let mut out = Vec::new();
        match self {
            PaintedTree::Painted(c) => {
                if c.iter().all(|x| matches!(x, PaintedTree::Functor(_))) {
                    let merged = c
                        .iter()
                        .flat_map(|x| match x {
                            PaintedTree::Functor(g) => g.clone(),
                            PaintedTree::Painted(_) => Vec::new(),
                        })
                        .collect();
                    out.push(PaintedTree::Functor(merged));
                }
                for (i, child) in c.iter().enumerate() {
                    if let PaintedTree::Painted(grand) = child {
                        let mut merged = c[..i].to_vec();
                        merged.extend(grand.iter().cloned());
                        merged.extend(c[i + 1..].iter().cloned());
                        out.push(PaintedTree::Painted(merged));
                    }
                    for sub in child.contractions() {
                        let mut next = c.clone();
                        next[i] = sub;
                        out.push(PaintedTree::Painted(next));
                    }
                }
            }
            PaintedTree::Functor(c) => {
                for (i, child) in c.iter().enumerate() {
                    if let PlanarTree::Node(grand) = child {
                        let mut merged = c[..i].to_vec();
                        merged.extend(grand.iter().cloned());
                        merged.extend(c[i + 1..].iter().cloned());
                        out.push(PaintedTree::Functor(merged));
                    }
                    for sub in child.contractions() {
                        let mut next = c.clone();
                        next[i] = sub;
                        out.push(PaintedTree::Functor(next));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for PaintedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PaintedTree::Painted(c) => {
                f.write_str("b(")?;
                write_list(f, c)?;
                f.write_str(")")
            }
            PaintedTree::Functor(c) => {
                f.write_str("f(")?;
                write_list(f, c)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Ordered compositions of n into at least `min_parts` positive parts.
fn compositions(n: usize, min_parts: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for first in 1..=n {
            prefix.push(first);
            go(n - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out.retain(|p| p.len() >= min_parts);
    out
}

/// All products choosing one item from each list.
fn product<T: Clone>(lists: &[&[T]]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for x in list.iter() {
                let mut v = prefix.clone();
                v.push(x.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Planar trees indexed by leaf count 0..=d.
fn planar_table(d: usize) -> Vec<Vec<PlanarTree>> {
    let mut table: Vec<Vec<PlanarTree>> = vec![Vec::new(), vec![PlanarTree::Leaf]];
    for n in 2..=d {
        let mut here = Vec::new();
        for parts in compositions(n, 2) {
            let lists: Vec<&[PlanarTree]> = parts.iter().map(|&p| table[p].as_slice()).collect();
            here.extend(product(&lists).into_iter().map(PlanarTree::Node));
        }
        table.push(here);
    }
    table.truncate(d + 1);
    table
}

fn painted_table(d: usize) -> Vec<Vec<PaintedTree>> {
    let planar = planar_table(d);
    let mut table: Vec<Vec<PaintedTree>> = vec![Vec::new()];
    for n in 1..=d {
        let mut here = Vec::new();
        for parts in compositions(n, 1) {
            let lists: Vec<&[PlanarTree]> = parts.iter().map(|&p| planar[p].as_slice()).collect();
            here.extend(product(&lists).into_iter().map(PaintedTree::Functor));
        }
        for parts in compositions(n, 2) {
            let lists: Vec<&[PaintedTree]> = parts.iter().map(|&p| table[p].as_slice()).collect();
            here.extend(product(&lists).into_iter().map(PaintedTree::Painted));
        }
        table.push(here);
    }
    table
}

/// Every face of Kₐ, as planar trees with d leaves.
pub fn associahedron_all_faces(d: usize) -> Result<Vec<PlanarTree>> {
    if d < 2 {
        return Err(Error::Invalid(String::from("the associahedron needs d ≥ 2")));
    }
    Ok(planar_table(d).swap_remove(d))
}

/// Faces of Kₐ of the given codimension (dimension d − 2 − codim).
pub fn associahedron_faces(d: usize, codim: usize) -> Result<Vec<PlanarTree>> {
    Ok(associahedron_all_faces(d)?.into_iter().filter(|t| t.dim() + codim == d - 2).collect())
}

/// Every face of Jₐ, as painted trees with d leaves.
pub fn multiplihedron_all_faces(d: usize) -> Result<Vec<PaintedTree>> {
    if d < 1 {
        return Err(Error::Invalid(String::from("the multiplihedron needs d ≥ 1")));
    }
    Ok(painted_table(d).swap_remove(d))
}

/// Faces of Jₐ of the given codimension (dimension d − 1 − codim).
pub fn multiplihedron_faces(d: usize, codim: usize) -> Result<Vec<PaintedTree>> {
    Ok(multiplihedron_all_faces(d)?.into_iter().filter(|t| t.dim() + codim == d - 1).collect())
}

/// Number of faces in each dimension, starting at vertices.
pub fn f_vector(dims: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = Vec::new();
    for k in dims {
        if out.len() <= k {
            out.resize(k + 1, 0);
        }
        out[k] += 1;
    }
    out
}

/// Σ (−1)^k f_k, which is 1 for the face lattice of a ball.
pub fn alternating_sum(f: &[usize]) -> i64 {
    f.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
}

/// Relation terms that label boundary facets: both operations have arity ≥ 2.
pub fn boundary_relation_terms(d: usize) -> Vec<RelationTerm> {
    relation_terms(d).into_iter().filter(|t| t.m >= 2 && d - t.m + 1 >= 2).collect()
}

/// Functor-equation terms that label boundary facets: no μ¹ on either side.
pub fn boundary_functor_terms(d: usize) -> Vec<FunctorTerm> {
    functor_terms(d)
        .into_iter()
        .filter(|t| match t {
            FunctorTerm::Composition { parts } => parts.len() >= 2,
            FunctorTerm::Insertion { m, .. } => *m >= 2,
        })
        .collect()
}

/// Reads off (m, n) from a codimension-one planar tree: one inner vertex with
/// m leaves after n root inputs.
pub fn associahedron_facet_term(t: &PlanarTree) -> Option<RelationTerm> {
    let PlanarTree::Node(c) = t else { return None };
    let mut found = None;
    for (n, child) in c.iter().enumerate() {
        if let PlanarTree::Node(g) = child {
            if found.is_some() || g.iter().any(|x| *x != PlanarTree::Leaf) {
                return None;
            }
            found = Some(RelationTerm { m: g.len(), n });
        }
    }
    found
}

/// Reads off the functor term of a codimension-one painted tree.
pub fn multiplihedron_facet_term(t: &PaintedTree) -> Option<FunctorTerm> {
    match t {
        PaintedTree::Painted(c) => {
            let mut parts = Vec::with_capacity(c.len());
            for child in c {
                match child {
                    PaintedTree::Functor(g) if g.iter().all(|x| *x == PlanarTree::Leaf) => parts.push(g.len()),
                    _ => return None,
                }
            }
            Some(FunctorTerm::Composition { parts })
        }
        PaintedTree::Functor(c) => {
            let mut found = None;
            for (n, child) in c.iter().enumerate() {
                if let PlanarTree::Node(g) = child {
                    if found.is_some() || g.iter().any(|x| *x != PlanarTree::Leaf) {
                        return None;
                    }
                    found = Some(FunctorTerm::Insertion { m: g.len(), n });
                }
            }
            found
        }
    }
}

/// Facet-to-term pairs plus whether they form a bijection with the checker's boundary terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetCertificate<F, T> {
    pub pairs: Vec<(F, T)>,
    pub facet_count: usize,
    pub term_count: usize,
    pub bijective: bool,
}

pub fn associahedron_certificate(d: usize) -> Result<FacetCertificate<PlanarTree, RelationTerm>> {
    let facets = associahedron_faces(d, 1)?;
    let terms = boundary_relation_terms(d);
    let pairs: Vec<_> = facets.iter().filter_map(|f| associahedron_facet_term(f).map(|t| (f.clone(), t))).collect();
    let image: BTreeSet<(usize, usize)> = pairs.iter().map(|(_, t)| (t.m, t.n)).collect();
    let wanted: BTreeSet<(usize, usize)> = terms.iter().map(|t| (t.m, t.n)).collect();
    let bijective = pairs.len() == facets.len() && image.len() == pairs.len() && image == wanted;
    Ok(FacetCertificate { pairs, facet_count: facets.len(), term_count: terms.len(), bijective })
}

pub fn multiplihedron_certificate(d: usize) -> Result<FacetCertificate<PaintedTree, FunctorTerm>> {
    let facets = multiplihedron_faces(d, 1)?;
    let terms = boundary_functor_terms(d);
    let pairs: Vec<_> = facets.iter().filter_map(|f| multiplihedron_facet_term(f).map(|t| (f.clone(), t))).collect();
    let image: BTreeSet<FunctorTerm> = pairs.iter().map(|(_, t)| t.clone()).collect();
    let wanted: BTreeSet<FunctorTerm> = terms.into_iter().collect();
    let bijective = pairs.len() == facets.len() && image.len() == pairs.len() && image == wanted;
    Ok(FacetCertificate { pairs, facet_count: facets.len(), term_count: wanted.len(), bijective })
}

/// Factor shape of a multiplihedron facet: K_r × J_{s₁} × … × J_{s_r} for a
/// composition, J_{d−m+1} × K_m for an insertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetShape {
    pub associahedra: Vec<usize>,
    pub multiplihedra: Vec<usize>,
}

pub fn facet_shape(d: usize, term: &FunctorTerm) -> FacetShape {
    match term {
        FunctorTerm::Composition { parts } => FacetShape { associahedra: vec![parts.len()], multiplihedra: parts.clone() },
        FunctorTerm::Insertion { m, .. } => FacetShape { associahedra: vec![*m], multiplihedra: vec![d - m + 1] },
    }
}

/// Upward closure of every face under contraction.
fn upsets<T: Clone + Ord>(faces: &[T], contract: impl Fn(&T) -> Vec<T>) -> BTreeMap<T, BTreeSet<T>> {
    let mut memo: BTreeMap<T, BTreeSet<T>> = BTreeMap::new();
    fn visit<T: Clone + Ord>(t: &T, contract: &dyn Fn(&T) -> Vec<T>, memo: &mut BTreeMap<T, BTreeSet<T>>) -> BTreeSet<T> {
        if let Some(s) = memo.get(t) {
            return s.clone();
        }
        let mut s = BTreeSet::new();
        s.insert(t.clone());
        for up in contract(t) {
            s.extend(visit(&up, contract, memo));
        }
        memo.insert(t.clone(), s.clone());
        s
    }
    for t in faces {
        visit(t, &contract, &mut memo);
    }
    memo
}

/// Per-facet check that the faces of Jₐ inside the facet number exactly the
/// product of the total face counts of its factors. Returns the failing facets.
pub fn check_facet_products(d: usize) -> Result<Vec<(PaintedTree, usize, usize)>> {
    let faces = multiplihedron_all_faces(d)?;
    let up = upsets(&faces, PaintedTree::contractions);
    let k_total: Vec<usize> = (0..=d).map(|n| if n < 2 { 1 } else { planar_table(n)[n].len() }).collect();
    let j_total: Vec<usize> = (0..=d).map(|n| if n < 1 { 1 } else { painted_table(n)[n].len() }).collect();
    let mut failures = Vec::new();
    for facet in multiplihedron_faces(d, 1)? {
        let term = multiplihedron_facet_term(&facet).ok_or_else(|| Error::Invalid(alloc::format!("untagged facet {facet}")))?;
        let shape = facet_shape(d, &term);
        let expected: usize =
            shape.associahedra.iter().map(|&n| k_total[n]).product::<usize>() * shape.multiplihedra.iter().map(|&n| j_total[n]).product::<usize>();
        let found = faces.iter().filter(|g| up[*g].contains(&facet)).count();
        if found != expected {
            failures.push((facet, found, expected));
        }
    }
    Ok(failures)
}
