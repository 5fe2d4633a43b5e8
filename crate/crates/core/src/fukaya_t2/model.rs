//! μᵈ on collections of lines: transverse corners are intersection points,
//! self-homs use the rank-two Morse model ⟨e, θ⟩ with e a strict unit and θ
//! inserted as a marked point ★ on the boundary.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use num_traits::{One, Signed, Zero};

use super::eps::{Eps, Pt};
use super::geometry::{enumerate_polygons, intersection_points, marker_crossings, Enumeration, Frame};
use super::lines::LagrangianLine;
use crate::ainfty::AInfty;
use crate::error::{Error, Result};
use crate::glinalg::{GradedSpace, SparseVec};
use crate::novikov::{int, rat, Novikov, Rat};

/// Which edge at an odd-degree input corner is compared with the boundary orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CornerEdge {
    Incoming,
    Outgoing,
}

/// Orientation sign at the output corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputSign {
    None,
    IncomingIfOdd,
    OutgoingIfOdd,
    IncomingIfEven,
    OutgoingIfEven,
}

/// Coefficient of θ in μ²(y, x) when x and y are the same point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BigonSign {
    Plus,
    Minus,
    FirstDegree,
    SecondDegree,
    Crossing,
    CrossingFirstDegree,
    /// From the corner rules applied to the thin strip from p to ★.
    Geometric,
}

/// Side on which a later copy of a line in a chain sits relative to an earlier one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CopyShift {
    /// Left of the canonical direction.
    Left,
    Right,
    /// Left of the oriented direction.
    OrientedLeft,
    OrientedRight,
    /// Against the descent from ★′ to ★ at the spike.
    Flow,
}

/// Weight of r markers placed in order on an edge meeting ★ N times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    /// C(N, r).
    Binomial,
    /// s^r · C(N, r) with s = ±1 the edge direction against the line's orientation.
    SignedMarkers,
    /// C(s·N, r) as a generalized binomial.
    SignedBinomial,
    /// (s·N)^r / r!.
    Exponential,
    /// Copies cross near ★ in a fan: any number of markers per crossing when
    /// travelling forward (or backward), at most one the other way.
    Fan { forward: bool, signed: bool },
}

/// Position of the output marker ★′ relative to ★.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputMarker {
    After,
    Before,
    Independent,
}

/// The sign and marker conventions of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conventions {
    pub corner: CornerEdge,
    pub output: OutputSign,
    pub spin: bool,
    pub bigon: BigonSign,
    pub multiplicity: Multiplicity,
    pub output_marker: OutputMarker,
    pub output_marker_sign: bool,
    pub shift: CopyShift,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            corner: CornerEdge::Incoming,
            output: OutputSign::IncomingIfOdd,
            spin: false,
            bigon: BigonSign::Geometric,
            multiplicity: Multiplicity::Fan { forward: true, signed: true },
            output_marker: OutputMarker::Independent,
            output_marker_sign: false,
            shift: CopyShift::Flow,
        }
    }
}

/// Morphism basis between two lines.
#[derive(Clone, Debug, PartialEq)]
pub enum HomSpace {
    /// Intersection points in [0,1)² with their degrees.
    Points(Vec<((Rat, Rat), i32)>),
    /// The rank-two model of a self-hom: unit in degree 0, θ in degree 1.
    Morse,
}

impl HomSpace {
    pub fn ranks(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        match self {
            HomSpace::Points(ps) => {
                for (_, d) in ps {
                    *out.entry(*d).or_insert(0) += 1;
                }
            }
            HomSpace::Morse => {
                out.insert(0, 1);
                out.insert(1, 1);
            }
        }
        out
    }
}

/// Basis of hom(l1, l2); distinct parallel lines are rejected.
pub fn hom_space(l1: &LagrangianLine, l2: &LagrangianLine) -> Result<HomSpace> {
    if l1.same_curve(l2) {
        return Ok(HomSpace::Morse);
    }
    if l1.is_parallel(l2) {
        return Err(Error::ParallelLines);
    }
    let f1 = Frame::new(l1, Rat::zero());
    let f2 = Frame::new(l2, Rat::zero());
    let deg = l1.degree_to(l2)?;
    let pts = intersection_points(&f1, &f2)?;
    Ok(HomSpace::Points(pts.into_iter().map(|p| ((p.x.std(), p.y.std()), deg)).collect()))
}

const UNIT: usize = 0;
const THETA: usize = 1;

type PolygonKey = (Vec<usize>, Vec<(usize, usize, usize)>);

/// A finite collection of pairwise transverse (or identical) lines as an A∞-category.
pub struct TorusCategory {
    names: Vec<String>,
    lines: Vec<LagrangianLine>,
    frames: Vec<Frame>,
    points: BTreeMap<(usize, usize), Vec<Pt>>,
    homs: Vec<Vec<Arc<GradedSpace>>>,
    markers: Vec<Eps>,
    output_markers: Vec<Eps>,
    spin_points: Vec<Eps>,
    conv: Conventions,
    area: Rat,
    cutoff: Rat,
    arity_cap: usize,
    mu_memo: RefCell<BTreeMap<(Vec<usize>, Vec<usize>), SparseVec>>,
    polygon_memo: RefCell<BTreeMap<PolygonKey, Rc<Enumeration>>>,
}

fn eps3(a: Rat, b: Rat) -> Eps {
    Eps::new(vec![a, Rat::zero(), Rat::zero(), b])
}

impl TorusCategory {
    /// Builds the category; offsets are perturbed by distinct infinitesimals
    /// so no three lines meet at a point.
    pub fn new(names: Vec<String>, lines: Vec<LagrangianLine>, conv: Conventions, cutoff: Rat, arity_cap: usize) -> Result<Self> {
        let n = lines.len();
        if names.len() != n || n == 0 {
            return Err(Error::Invalid(String::from("need one name per line")));
        }
        let area = lines[0].torus_area().clone();
        if lines.iter().any(|l| *l.torus_area() != area) {
            return Err(Error::Invalid(String::from("lines live on tori of different areas")));
        }
        for i in 0..n {
            for j in 0..i {
                if lines[i].same_curve(&lines[j]) {
                    return Err(Error::Invalid(alloc::format!("objects {} and {} are the same line", names[j], names[i])));
                }
                if lines[i].is_parallel(&lines[j]) {
                    return Err(Error::ParallelLines);
                }
            }
        }
        let mut weight = Rat::one();
        let mut frames = Vec::with_capacity(n);
        for l in &lines {
            frames.push(Frame::new(l, weight.clone()));
            weight *= int(97);
        }
        let mut points = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let pts = intersection_points(&frames[i], &frames[j])?;
                points.insert((j, i), pts.clone());
                points.insert((i, j), pts);
            }
        }
        // no intersection point of two lines lies on a third
        for (&(i, j), pts) in &points {
            if i > j {
                continue;
            }
            for (k, f) in frames.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                if pts.iter().any(|p| {
                    let lv = f.level(p);
                    lv.std().is_integer() && (1..4).all(|e| lv.coeff(e).is_zero())
                }) {
                    return Err(Error::Degenerate(String::from("three lines meet at a point after perturbation")));
                }
            }
        }
        let mut homs = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let space = if i == j {
                    GradedSpace::new([("e", 0), ("theta", 1)])?
                } else {
                    let deg = lines[i].degree_to(&lines[j])?;
                    let pts = &points[&(i, j)];
                    GradedSpace::new((0..pts.len()).map(|k| (alloc::format!("x{k}"), deg)))?
                };
                row.push(Arc::new(space));
            }
            homs.push(row);
        }
        let markers: Vec<Eps> = (0..n).map(|i| Eps::constant(rat(2 * i as i64 + 1, 1013))).collect();
        let output_markers = (0..n)
            .map(|i| match conv.output_marker {
                OutputMarker::After => eps3(markers[i].std(), int(1)),
                OutputMarker::Before => eps3(markers[i].std(), int(-1)),
                OutputMarker::Independent => Eps::constant(rat(2 * i as i64 + 1, 1021) + rat(1, 4)),
            })
            .collect();
        let spin_points = (0..n).map(|i| Eps::constant(rat(2 * i as i64 + 1, 1019) + rat(1, 2))).collect();
        Ok(TorusCategory {
            names,
            lines,
            frames,
            points,
            homs,
            markers,
            output_markers,
            spin_points,
            conv,
            area,
            cutoff,
            arity_cap,
            mu_memo: RefCell::new(BTreeMap::new()),
            polygon_memo: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn lines(&self) -> &[LagrangianLine] {
        &self.lines
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn conventions(&self) -> Conventions {
        self.conv
    }

    pub fn torus_area(&self) -> &Rat {
        &self.area
    }

    /// Standard part of the intersection points of objects i ≠ j.
    pub fn intersection(&self, i: usize, j: usize) -> Vec<(Rat, Rat)> {
        self.points.get(&(i, j)).map(|v| v.iter().map(|p| (p.x.std(), p.y.std())).collect()).unwrap_or_default()
    }

    fn polygons(&self, lines: &[usize], corners: &[(usize, usize, usize)]) -> Result<Rc<Enumeration>> {
        let key = (lines.to_vec(), corners.to_vec());
        if let Some(e) = self.polygon_memo.borrow().get(&key) {
            return Ok(e.clone());
        }
        let frames: Vec<Frame> = lines.iter().map(|&l| self.frames[l].clone()).collect();
        let pts: Vec<Pt> = corners.iter().map(|&(a, b, k)| self.points[&(a, b)][k].clone()).collect();
        let bound = &self.cutoff / &self.area;
        let e = Rc::new(enumerate_polygons(&frames, &pts, &bound)?);
        self.polygon_memo.borrow_mut().insert(key, e.clone());
        Ok(e)
    }

    /// +1 when travelling by `t` along `line` follows its orientation.
    fn direction(&self, line: usize, t: &Eps) -> i64 {
        (t.signum() as i64) * (self.lines[line].orientation() as i64)
    }

    /// Canonical-direction sign of travel along `line` that keeps later copies on the left.
    fn later_side(&self, line: usize, spike: &Pt) -> i64 {
        let o = self.lines[line].orientation() as i64;
        match self.conv.shift {
            CopyShift::Left => 1,
            CopyShift::Right => -1,
            CopyShift::OrientedLeft => o,
            CopyShift::OrientedRight => -o,
            CopyShift::Flow => {
                // descent runs forward on the arc from ★′ forward to ★
                let f = &self.frames[line];
                let p = f.position(spike);
                let to_star = (&self.markers[line] - &p).frac();
                let to_top = (&self.output_markers[line] - &p).frac();
                if to_star < to_top {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Canonical sign of travel along `to` that turns left off `from` travelled with sign `s`.
    fn left_of(&self, from: usize, s: i64, to: usize) -> i64 {
        s * super::lines::cross(self.lines[from].direction(), self.lines[to].direction()).signum()
    }

    /// Sign of a polygon from its edge lines, traversal signs against orientation,
    /// input corner degrees and output degree.
    fn boundary_sign(&self, dirs: &[i64], degrees: &[i32], out_degree: i32) -> i64 {
        let k = degrees.len();
        let mut sign = 1i64;
        for j in 1..=k {
            if degrees[j - 1].rem_euclid(2) == 1 {
                sign *= match self.conv.corner {
                    CornerEdge::Incoming => dirs[j - 1],
                    CornerEdge::Outgoing => dirs[j],
                };
            }
        }
        let (incoming, outgoing) = (dirs[k], dirs[0]);
        let odd = out_degree.rem_euclid(2) == 1;
        sign * match self.conv.output {
            OutputSign::None => 1,
            OutputSign::IncomingIfOdd if odd => incoming,
            OutputSign::OutgoingIfOdd if odd => outgoing,
            OutputSign::IncomingIfEven if !odd => incoming,
            OutputSign::OutgoingIfEven if !odd => outgoing,
            _ => 1,
        }
    }

    /// Strip along `line` from point `from` to point `to`, travelled with canonical sign `s`:
    /// true when its length lies in (0, 1) and it avoids ★.
    fn strip_clear(&self, line: usize, from: &Pt, to: &Pt, s: i64) -> bool {
        let f = &self.frames[line];
        let a = f.position(from);
        let b = f.position(to);
        let len = (&b - &a).scale(&int(s)).frac();
        if len.is_zero() {
            return false;
        }
        let t = len.scale(&int(s));
        marker_crossings(&a, &t, &self.markers[line]) == 0 && marker_crossings(&a, &t, &self.output_markers[line]) == 0
    }

    /// Zero-area discs of μ³ with a θ input, a same-point pair and θ output,
    /// closing up in the fan of crossings near ★.
    fn fan_output(&self, chain: &[usize], inputs: &[usize]) -> i64 {
        let forward = match self.conv.multiplicity {
            Multiplicity::Fan { forward, .. } => forward,
            _ => return 0,
        };
        let degs: Vec<i32> = (0..3).map(|i| self.homs[chain[i]][chain[i + 1]].degree(inputs[i])).collect();
        let o = |x: usize| self.lines[x].orientation() as i64;
        let l = chain[0];
        if chain[1] == l && chain[3] == l && chain[2] != l && inputs[0] == THETA && inputs[1] == inputs[2] {
            let k = chain[2];
            let sg = self.later_side(l, &self.points[&(l, k)][inputs[1]]);
            if (sg > 0) != forward {
                let dirs = [sg * o(l), sg * o(l), self.left_of(l, sg, k) * o(k), -sg * o(l)];
                return self.boundary_sign(&dirs, &degs, 1);
            }
        }
        if chain[2] == l && chain[3] == l && chain[1] != l && inputs[2] == THETA && inputs[0] == inputs[1] {
            let k = chain[1];
            let sg = self.later_side(l, &self.points[&(l, k)][inputs[0]]);
            if (sg > 0) == forward {
                let dirs = [sg * o(l), self.left_of(l, sg, k) * o(k), -sg * o(l), -sg * o(l)];
                return self.boundary_sign(&dirs, &degs, 1);
            }
        }
        0
    }

    /// Zero-area discs of μ³ bounded by two copies of one line joined at
    /// two same-point corner pairs.
    fn thin_output(&self, chain: &[usize], inputs: &[usize], out: usize, out_degree: i32) -> i64 {
        let pt = |a: usize, b: usize, i: usize| self.points[&(a, b)][i].clone();
        let degs: Vec<i32> = (0..3).map(|i| self.homs[chain[i]][chain[i + 1]].degree(inputs[i])).collect();
        let mut total = 0;
        let o = |l: usize| self.lines[l].orientation() as i64;
        if chain[0] == chain[2] && chain[1] == chain[3] && inputs.iter().all(|&i| i == out) {
            // four copies through one point bound a small parallelogram
            let (l, k) = (chain[0], chain[1]);
            let p = pt(l, k, out);
            let (u, v) = (self.later_side(l, &p), self.later_side(k, &p));
            if self.left_of(l, u, k) == v {
                let dirs = [u * o(l), v * o(k), -u * o(l), -v * o(k)];
                total += self.boundary_sign(&dirs, &degs, out_degree);
            }
            return total;
        }
        if chain[0] == chain[2] && chain[1] != chain[0] && chain[3] != chain[0] && inputs[0] == inputs[1] && out == inputs[2] {
            let (l, k, k2) = (chain[0], chain[1], chain[3]);
            let u = self.later_side(l, &pt(l, k, inputs[0]));
            if self.strip_clear(l, &pt(l, k2, inputs[2]), &pt(l, k, inputs[0]), u) {
                let dirs = [u * o(l), self.left_of(l, u, k) * o(k), -u * o(l), self.left_of(l, -u, k2) * o(k2)];
                total += self.boundary_sign(&dirs, &degs, out_degree);
            }
        }
        if chain[1] == chain[3] && chain[0] != chain[1] && chain[2] != chain[1] && inputs[1] == inputs[2] && out == inputs[0] {
            let (k, l, k2) = (chain[0], chain[1], chain[2]);
            let v = self.later_side(l, &pt(l, k2, inputs[1]));
            if self.strip_clear(l, &pt(k, l, inputs[0]), &pt(l, k2, inputs[1]), v) {
                let dirs = [self.left_of(l, -v, k) * o(k), v * o(l), self.left_of(l, v, k2) * o(k2), -v * o(l)];
                total += self.boundary_sign(&dirs, &degs, out_degree);
            }
        }
        total
    }

    fn spin_crossings(&self, line: usize, start: &Eps, t: &Eps) -> usize {
        if self.conv.spin {
            marker_crossings(start, t, &self.spin_points[line])
        } else {
            0
        }
    }

    fn multiplicity(&self, crossings: usize, r: usize, line: usize, t: &Eps) -> Rat {
        if r == 0 {
            return Rat::one();
        }
        let s = self.direction(line, t);
        let n = crossings as i64;
        match self.conv.multiplicity {
            Multiplicity::Fan { forward, signed } => {
                let ahead = (t.signum() > 0) == forward;
                let count = if ahead { binomial(&int(n + r as i64 - 1), r) } else { binomial(&int(n), r) };
                count * int(if signed && r % 2 == 1 { s } else { 1 })
            }
            Multiplicity::Binomial => binomial(&int(n), r),
            Multiplicity::SignedMarkers => binomial(&int(n), r) * int(if r % 2 == 1 { s } else { 1 }),
            Multiplicity::SignedBinomial => binomial(&int(s * n), r),
            Multiplicity::Exponential => {
                let mut x = Rat::one();
                for k in 1..=r as i64 {
                    x = x * int(s * n) / int(k);
                }
                x
            }
        }
    }

    fn compute(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        let d = inputs.len();
        let cutoff = self.cutoff.clone();
        let unit_at = (0..d).find(|&i| chain[i] == chain[i + 1] && inputs[i] == UNIT);
        if let Some(i) = unit_at {
            if d != 2 {
                return Ok(SparseVec::new());
            }
            // μ²(e, a) = (−1)^{|a|} a, μ²(a, e) = a
            let mut out = SparseVec::new();
            if i == 1 {
                let deg = self.homs[chain[0]][chain[1]].degree(inputs[0]);
                let c = if deg.rem_euclid(2) == 1 { -1 } else { 1 };
                out.insert(inputs[0], Novikov::constant(c, cutoff));
            } else {
                out.insert(inputs[1], Novikov::constant(1, cutoff));
            }
            return Ok(out);
        }
        if d < 2 {
            return Ok(SparseVec::new());
        }
        // collapse θ runs: reduced chain ys, transverse corners, θ count per reduced edge
        let mut ys = vec![chain[0]];
        let mut corners: Vec<(usize, usize, usize)> = Vec::new();
        let mut runs = vec![0usize];
        let mut in_degree = 0i32;
        for i in 0..d {
            in_degree += self.homs[chain[i]][chain[i + 1]].degree(inputs[i]);
            if chain[i] == chain[i + 1] {
                *runs.last_mut().unwrap() += 1;
            } else {
                corners.push((chain[i], chain[i + 1], inputs[i]));
                ys.push(chain[i + 1]);
                runs.push(0);
            }
        }
        let out_degree = in_degree + 2 - d as i32;
        let k = corners.len();
        let first = ys[0];
        let last = ys[k];
        if first != last {
            if k < 2 {
                return Ok(SparseVec::new());
            }
            return self.polygon_output(&ys, &corners, &runs, out_degree);
        }
        if k == 0 {
            return Ok(SparseVec::new());
        }
        if k == 2 {
            // constant bigon
            if d == 2 && corners[0].2 == corners[1].2 && out_degree == 1 {
                let dx = self.homs[corners[0].0][corners[0].1].degree(corners[0].2);
                let dy = self.homs[corners[1].0][corners[1].1].degree(corners[1].2);
                let l = self.lines[corners[0].0].oriented_direction();
                let m = self.lines[corners[0].1].oriented_direction();
                let crossing = if super::lines::cross(l, m) > 0 { 1 } else { -1 };
                let c = match self.conv.bigon {
                    BigonSign::Plus => 1,
                    BigonSign::Minus => -1,
                    BigonSign::FirstDegree => parity_sign(dx),
                    BigonSign::SecondDegree => parity_sign(dy),
                    BigonSign::Crossing => crossing,
                    BigonSign::CrossingFirstDegree => crossing * parity_sign(dx),
                    BigonSign::Geometric => {
                        let (l, m) = (corners[0].0, corners[0].1);
                        let u = self.later_side(l, &self.points[&(l, m)][corners[0].2]);
                        let o = |x: usize| self.lines[x].orientation() as i64;
                        let dirs = [u * o(l), self.left_of(l, u, m) * o(m), -u * o(l)];
                        self.boundary_sign(&dirs, &[dx, dy], 1)
                    }
                };
                let mut out = SparseVec::new();
                out.insert(THETA, Novikov::constant(c, cutoff));
                return Ok(out);
            }
            if d == 3 && out_degree == 1 {
                let c = self.fan_output(chain, inputs);
                if c != 0 {
                    return Ok(SparseVec::from([(THETA, Novikov::constant(c, cutoff))]));
                }
            }
            return Ok(SparseVec::new());
        }
        if out_degree != 0 {
            return Ok(SparseVec::new());
        }
        self.unit_output(&ys, &corners, &runs)
    }

    /// Case of an output intersection point: (k+1)-gons with corners y, b_1, …, b_k.
    fn polygon_output(&self, ys: &[usize], corners: &[(usize, usize, usize)], runs: &[usize], out_degree: i32) -> Result<SparseVec> {
        let k = corners.len();
        let (y0, yk) = (ys[0], ys[k]);
        let space = self.homs[y0][yk].clone();
        let mut out = SparseVec::new();
        if space.dim() == 0 || space.degree(0) != out_degree {
            return Ok(out);
        }
        let mut truncated = false;
        let degrees: Vec<i32> = corners.iter().map(|&(a, b, idx)| self.homs[a][b].degree(idx)).collect();
        let thin = k == 3 && runs.iter().all(|&r| r == 0);
        for o in 0..space.dim() {
            let mut all = vec![(y0, yk, o)];
            all.extend_from_slice(corners);
            let en = self.polygons(ys, &all)?;
            truncated |= en.dropped;
            let mut terms = Vec::new();
            for poly in &en.polygons {
                let mut sign = 1i64;
                let mut weight = Rat::one();
                let mut spins = 0usize;
                for e in 0..=k {
                    let line = ys[e];
                    let start = self.frames[line].position(&poly.vertices[e]);
                    let t = &poly.params[e];
                    spins += self.spin_crossings(line, &start, t);
                    if runs[e] > 0 {
                        let n = marker_crossings(&start, t, &self.markers[line]);
                        weight *= self.multiplicity(n, runs[e], line, t);
                    }
                }
                let dirs: Vec<i64> = (0..=k).map(|e| self.direction(ys[e], &poly.params[e])).collect();
                sign *= self.boundary_sign(&dirs, &degrees, out_degree);
                if spins % 2 == 1 {
                    sign = -sign;
                }
                if weight.is_zero() {
                    continue;
                }
                terms.push((&poly.area.std() * &self.area, weight * int(sign)));
            }
            if thin {
                let inputs: Vec<usize> = corners.iter().map(|c| c.2).collect();
                let c = self.thin_output(ys, &inputs, o, out_degree);
                if c != 0 {
                    terms.push((Rat::zero(), int(c)));
                }
            }
            let mut c = Novikov::from_terms(terms, self.cutoff.clone());
            if truncated {
                c = flag(c);
            }
            if !c.is_zero() || c.is_truncated() {
                out.insert(o, c);
            }
        }
        Ok(out)
    }

    /// Case of an output in hom(L, L): k-gons with corners b_1, …, b_k whose
    /// merged L-edge carries the output marker ★′.
    fn unit_output(&self, ys: &[usize], corners: &[(usize, usize, usize)], runs: &[usize]) -> Result<SparseVec> {
        let k = corners.len();
        let lines: Vec<usize> = ys[1..].to_vec();
        let en = self.polygons(&lines, corners)?;
        let l = ys[k];
        let mut terms = Vec::new();
        for poly in &en.polygons {
            let mut sign = 1i64;
            let mut weight = Rat::one();
            let mut spins = 0usize;
            for e in 0..k {
                let line = lines[e];
                let start = self.frames[line].position(&poly.vertices[e]);
                spins += self.spin_crossings(line, &start, &poly.params[e]);
                if e + 1 < k && runs[e + 1] > 0 {
                    let n = marker_crossings(&start, &poly.params[e], &self.markers[line]);
                    weight *= self.multiplicity(n, runs[e + 1], line, &poly.params[e]);
                }
            }
            for j in 0..k {
                let (a, b, idx) = corners[j];
                let deg = self.homs[a][b].degree(idx);
                let prev = (j + k - 1) % k;
                if deg.rem_euclid(2) == 1 {
                    sign *= match self.conv.corner {
                        CornerEdge::Incoming => self.direction(lines[prev], &poly.params[prev]),
                        CornerEdge::Outgoing => self.direction(lines[j], &poly.params[j]),
                    };
                }
            }
            if spins % 2 == 1 {
                sign = -sign;
            }
            // merged edge: end run, then ★′, then start run
            let start = self.frames[l].position(&poly.vertices[k - 1]);
            let t = &poly.params[k - 1];
            let mut edge_weight = Rat::zero();
            for u in crossing_positions(&start, t, &self.output_markers[l]) {
                let before = &u - &start;
                let after = &(&start + t) - &u;
                let n_end = marker_crossings(&start, &before, &self.markers[l]);
                let n_start = marker_crossings(&u, &after, &self.markers[l]);
                edge_weight += self.multiplicity(n_end, runs[k], l, t) * self.multiplicity(n_start, runs[0], l, t);
            }
            if self.conv.output_marker_sign {
                edge_weight *= int(self.direction(l, t));
            }
            let w = weight * edge_weight * int(sign);
            if w.is_zero() {
                continue;
            }
            terms.push((&poly.area.std() * &self.area, w));
        }
        let mut c = Novikov::from_terms(terms, self.cutoff.clone());
        if en.dropped {
            c = flag(c);
        }
        let mut out = SparseVec::new();
        if !c.is_zero() || c.is_truncated() {
            out.insert(UNIT, c);
        }
        Ok(out)
    }
}

fn flag(c: Novikov) -> Novikov {
    // mark as incomplete beyond the cutoff
    let cutoff = c.cutoff().clone();
    let mut terms: Vec<(Rat, Rat)> = c.terms().to_vec();
    terms.push((cutoff.clone(), Rat::one()));
    Novikov::from_terms(terms, cutoff)
}

fn parity_sign(d: i32) -> i64 {
    if d.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// Generalized binomial coefficient x(x−1)…(x−r+1)/r!.
fn binomial(x: &Rat, r: usize) -> Rat {
    let mut out = Rat::one();
    for k in 0..r as i64 {
        out = out * (x - int(k)) / int(k + 1);
    }
    out
}

/// Positions ≡ `marker` (mod 1) strictly inside the walk from `start` by `t`,
/// in the order they are met.
fn crossing_positions(start: &Eps, t: &Eps, marker: &Eps) -> Vec<Eps> {
    let end = start + t;
    let mut out = Vec::new();
    let base = start - marker;
    if t.signum() >= 0 {
        let mut n = base.floor() + int(1);
        loop {
            let u = marker + &Eps::constant(n.clone());
            if u >= end {
                break;
            }
            out.push(u);
            n += int(1);
        }
    } else {
        let mut n = -((-&base).floor()) - int(1);
        loop {
            let u = marker + &Eps::constant(n.clone());
            if u <= end {
                break;
            }
            out.push(u);
            n -= int(1);
        }
    }
    out
}

impl AInfty for TorusCategory {
    fn object_count(&self) -> usize {
        self.lines.len()
    }

    fn object_name(&self, x: usize) -> String {
        self.names[x].clone()
    }

    fn hom(&self, x: usize, y: usize) -> Arc<GradedSpace> {
        self.homs[x][y].clone()
    }

    fn arity_cap(&self) -> usize {
        self.arity_cap
    }

    fn mu(&self, chain: &[usize], inputs: &[usize]) -> Result<SparseVec> {
        if inputs.len() > self.arity_cap {
            return Err(Error::MissingArity(inputs.len()));
        }
        let key = (chain.to_vec(), inputs.to_vec());
        if let Some(v) = self.mu_memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let mut v = self.compute(chain, inputs)?;
        // exact cancellations are dropped; truncated zeros keep their flag
        v.retain(|_, c| !c.is_zero() || c.is_truncated());
        self.mu_memo.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn cutoff(&self) -> Rat {
        self.cutoff.clone()
    }

    fn unit(&self, _x: usize) -> Option<usize> {
        Some(UNIT)
    }

    fn differential_vanishes(&self) -> bool {
        true
    }
}

/// Objects L_f, L_s, τL_s, …, τᵃL_s with τ the twist along L_f.
pub fn build_gamma_category(max_twist: usize, area: Rat, cutoff: Rat, conv: Conventions, arity_cap: usize) -> Result<TorusCategory> {
    if max_twist < 2 {
        return Err(Error::Invalid(String::from("max twist must be at least 2")));
    }
    if !area.is_positive() || !cutoff.is_positive() {
        return Err(Error::Invalid(String::from("area and truncation must be positive")));
    }
    let lf = LagrangianLine::fibre(Rat::zero(), area.clone());
    let ls = LagrangianLine::section(Rat::zero(), area);
    let mut names = vec![String::from("L_f"), String::from("L_s")];
    let mut lines = vec![lf.clone(), ls.clone()];
    let mut cur = ls;
    for k in 1..=max_twist {
        cur = cur.twisted_along(&lf);
        names.push(if k == 1 { String::from("tL_s") } else { alloc::format!("t{k}L_s") });
        lines.push(cur.clone());
    }
    TorusCategory::new(names, lines, conv, cutoff, arity_cap)
}

/// The two-object category on L_s and L_f.
pub fn build_pair_category(area: Rat, cutoff: Rat, conv: Conventions, arity_cap: usize) -> Result<TorusCategory> {
    let ls = LagrangianLine::section(Rat::zero(), area.clone());
    let lf = LagrangianLine::fibre(Rat::zero(), area);
    TorusCategory::new(vec![String::from("L_s"), String::from("L_f")], vec![ls, lf], conv, cutoff, arity_cap)
}
