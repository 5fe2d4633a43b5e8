//! Intersection points and convex polygons in the universal cover.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::eps::{Eps, Pt};
use super::lines::{cross, LagrangianLine};
use crate::error::{Error, Result};
use crate::novikov::{int, Rat};

/// A line with perturbed offset `c + c'ε`, plus an integral frame (w, d)
/// with ⟨d, w⟩ = 1 used for positions along it.
#[derive(Clone, Debug)]
pub struct Frame {
    pub d: (i64, i64),
    pub w: (i64, i64),
    pub offset: Eps,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

fn ipt(v: (i64, i64)) -> Pt {
    Pt::new(Eps::constant(int(v.0)), Eps::constant(int(v.1)))
}

impl Frame {
    pub fn new(line: &LagrangianLine, perturbation: Rat) -> Self {
        let d = line.direction();
        // p·w_y − q·w_x = 1
        let (g, a, b) = ext_gcd(d.0, -d.1);
        let (wy, wx) = (a / g, b / g);
        debug_assert_eq!(cross(d, (wx, wy)), 1);
        Frame { d, w: (wx, wy), offset: Eps::linear(line.offset().clone(), perturbation) }
    }

    pub fn dir(&self) -> Pt {
        ipt(self.d)
    }

    /// Position along the line: the d-coordinate in the basis (w, d).
    pub fn position(&self, v: &Pt) -> Eps {
        v.cross(&ipt(self.w))
    }

    /// ⟨d, v⟩ − offset; an integer exactly when v lies on a lift.
    pub fn level(&self, v: &Pt) -> Eps {
        &ipt(self.d).cross(v) - &self.offset
    }
}

fn is_integer(e: &Eps) -> bool {
    e.std().is_integer() && (1..4).all(|k| e.coeff(k).is_zero())
}

/// Intersection points of two transverse lines, as representatives in [0,1)².
pub fn intersection_points(a: &Frame, b: &Frame) -> Result<Vec<Pt>> {
    let det = cross(a.d, b.d);
    if det == 0 {
        return Err(Error::ParallelLines);
    }
    let n = det.abs();
    let mut pts: Vec<Pt> = Vec::new();
    let inv = Rat::new(BigInt::from(1), BigInt::from(det));
    for n1 in 0..n {
        for n2 in 0..n {
            let b1 = &a.offset + &Eps::constant(int(n1));
            let b2 = &b.offset + &Eps::constant(int(n2));
            // rows (−q, p) · (x, y) = b
            let (a11, a12, a21, a22) = (-a.d.1, a.d.0, -b.d.1, b.d.0);
            let x = (&b1.scale(&int(a22)) - &b2.scale(&int(a12))).scale(&inv);
            let y = (&b2.scale(&int(a11)) - &b1.scale(&int(a21))).scale(&inv);
            let (p, _) = Pt::new(x, y).reduce();
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    pts.sort();
    if pts.len() as i64 != n {
        return Err(Error::Degenerate(alloc::format!("found {} intersection points, expected {n}", pts.len())));
    }
    Ok(pts)
}

/// A convex polygon found by the enumerator: vertex lifts, edge parameters
/// `t_i` with `z_{i+1} = z_i + t_i·d_i`, and its Euclidean area.
#[derive(Clone, Debug)]
pub struct Polygon {
    pub vertices: Vec<Pt>,
    pub params: Vec<Eps>,
    pub area: Eps,
}

/// Result of an enumeration: polygons below the area bound and whether any
/// polygon was dropped because its area reached the bound.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    pub polygons: Vec<Polygon>,
    pub dropped: bool,
}

/// Residue of `t` modulo 1 that places a corner at `target`, given the edge
/// starts at a point with position `from` on the frame.
fn residue(frame: &Frame, from: &Pt, target: &Pt) -> Eps {
    (&frame.position(target) - &frame.position(from)).frac()
}

fn min_positive_std(r: &Eps) -> Rat {
    let s = r.std();
    let f = &s - s.floor();
    if f.is_zero() {
        int(1)
    } else {
        core::cmp::min(f.clone(), int(1) - f)
    }
}

/// Integers n with lo ≤ base + n ≤ hi in standard part, widened by one.
fn candidate_range(base: &Eps, lo: &Rat, hi: &Rat) -> core::ops::RangeInclusive<i64> {
    let b = base.std();
    let start = (lo - &b).floor().to_integer().to_i64().unwrap_or(i64::MIN / 4) - 1;
    let end = (hi - &b).ceil().to_integer().to_i64().unwrap_or(i64::MAX / 4) + 1;
    start..=end
}

/// Enumerates convex counterclockwise polygons whose i-th edge runs along a
/// lift of `frames[i]` from a lift of `corners[i]` to a lift of
/// `corners[i+1]`, with the first vertex at the representative of
/// `corners[0]`. Areas must be strictly below `max_area`.
///
/// The search runs on standard parts: two intersection points of the same
/// pair of lines already differ there, so the infinitesimal parts of an
/// accepted polygon are recovered from the residues.
pub fn enumerate_polygons(frames: &[Frame], corners: &[Pt], max_area: &Rat) -> Result<Enumeration> {
    let k = frames.len();
    if k < 3 || corners.len() != k {
        return Err(Error::Invalid(alloc::string::String::from("polygon needs at least three corners")));
    }
    for i in 0..k {
        if cross(frames[i].d, frames[(i + 1) % k].d) == 0 {
            return Err(Error::ParallelLines);
        }
    }
    // residues of every edge parameter modulo 1 (independent of the lift)
    let residues: Vec<Eps> = (0..k).map(|i| residue(&frames[i], &corners[i], &corners[(i + 1) % k])).collect();
    let mut search = Search {
        frames,
        residues: &residues,
        std_residues: residues.iter().map(|r| r.std()).collect(),
        max_area,
        z0: corners[0].clone(),
        stack: vec![(corners[0].x.std(), corners[0].y.std())],
        shifts: Vec::new(),
        out: Enumeration::default(),
    };
    let two_s = max_area * int(2);
    let mut bound0 = int(0);
    for j in 1..k {
        let c = cross(frames[0].d, frames[j].d).abs();
        if c == 0 {
            continue;
        }
        let b = &two_s / (min_positive_std(&residues[j]) * int(c));
        if b > bound0 {
            bound0 = b;
        }
    }
    let neg = -bound0.clone();
    for n in candidate_range(&residues[0], &neg, &bound0) {
        search.descend(n, &int(0));
    }
    let mut out = search.out;
    out.polygons.sort_by(|a, b| a.area.cmp(&b.area).then_with(|| cmp_pts(&a.vertices, &b.vertices)));
    Ok(out)
}

fn cmp_pts(a: &[Pt], b: &[Pt]) -> Ordering {
    a.iter().cmp(b.iter())
}

/// Left turns everywhere and one full rotation, for edges `t_i·d_i` given
/// by the sign of `t_i` and the integral direction `d_i`.
fn convex_ccw(signs: &[i32], dirs: &[(i64, i64)]) -> bool {
    let k = dirs.len();
    let v: Vec<(i64, i64)> = (0..k).map(|i| (signs[i] as i64 * dirs[i].0, signs[i] as i64 * dirs[i].1)).collect();
    let half = |a: (i64, i64)| if a.1 > 0 || (a.1 == 0 && a.0 > 0) { 0 } else { 1 };
    let mut wraps = 0;
    for i in 0..k {
        let (a, b) = (v[i], v[(i + 1) % k]);
        if cross(a, b) <= 0 {
            return false;
        }
        // b turns left from a; the angle wraps past 0 when b lies in an earlier half
        if half(b) < half(a) {
            wraps += 1;
        }
    }
    wraps == 1
}

type StdPt = (Rat, Rat);

struct Search<'a> {
    frames: &'a [Frame],
    residues: &'a [Eps],
    std_residues: Vec<Rat>,
    max_area: &'a Rat,
    z0: Pt,
    /// Standard parts of z_0, …, z_i.
    stack: Vec<StdPt>,
    /// Integer n_j with t_j = residue_j + n_j.
    shifts: Vec<i64>,
    out: Enumeration,
}

impl Search<'_> {
    fn param(&self, j: usize, n: i64) -> Eps {
        &self.residues[j] + &Eps::constant(int(n))
    }

    /// Sign of t_j = residue_j + n.
    fn sign(&self, j: usize, n: i64) -> i32 {
        let s = &self.std_residues[j] + int(n);
        if s.is_zero() {
            self.param(j, n).signum()
        } else if s.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Takes edge i = shifts.len() with t_i = residue_i + n; `partial` is the
    /// area of z_0, …, z_i.
    fn descend(&mut self, n: i64, partial: &Rat) {
        let k = self.frames.len();
        let i = self.shifts.len();
        let si = self.sign(i, n);
        if si == 0 {
            return;
        }
        if i >= 1 {
            let sp = self.sign(i - 1, self.shifts[i - 1]);
            if (sp as i64) * (si as i64) * cross(self.frames[i - 1].d, self.frames[i].d) <= 0 {
                return;
            }
        }
        let d = self.frames[i].d;
        let t = &self.std_residues[i] + int(n);
        let zi = self.stack[i].clone();
        let (x0, y0) = self.stack[0].clone();
        let half = Rat::new(1.into(), 2.into());
        let coef = (cross_std(&(&zi.0 - &x0, &zi.1 - &y0), d)) * &half;
        let next_area = partial + &(&coef * &t);
        let next = (&zi.0 + &t * int(d.0), &zi.1 + &t * int(d.1));
        self.shifts.push(n);
        self.stack.push(next);
        if i + 1 == k - 2 {
            self.close(&next_area);
        } else {
            self.branch(&next_area);
        }
        self.shifts.pop();
        self.stack.pop();
    }

    /// Chooses the free edge i = shifts.len() < k − 2.
    fn branch(&mut self, partial: &Rat) {
        let k = self.frames.len();
        let i = self.shifts.len();
        let room = self.max_area - partial;
        if room.is_negative() {
            return;
        }
        let (x0, y0) = self.stack[0].clone();
        let zi = &self.stack[i];
        let coef = cross_std(&(&zi.0 - &x0, &zi.1 - &y0), self.frames[i].d) * Rat::new(1.into(), 2.into());
        let (lo, hi) = if coef.is_zero() {
            let mut b = int(0);
            for j in 0..k {
                let c = cross(self.frames[i].d, self.frames[j].d).abs();
                if j == i || c == 0 {
                    continue;
                }
                let cand = self.max_area * int(2) / (min_positive_std(&self.residues[j]) * int(c));
                if cand > b {
                    b = cand;
                }
            }
            (-b.clone(), b)
        } else {
            let lim = &room / coef.abs();
            if coef.is_positive() { (int(0), lim) } else { (-lim, int(0)) }
        };
        for n in candidate_range(&self.residues[i], &lo, &hi) {
            self.descend(n, partial);
        }
    }

    /// z_{k-2} is fixed: the last two edges close the polygon through z_0.
    fn close(&mut self, partial: &Rat) {
        let k = self.frames.len();
        let (dp, dl) = (self.frames[k - 2].d, self.frames[k - 1].d);
        let (x0, y0) = self.stack[0].clone();
        let zi = self.stack[k - 2].clone();
        let rel = (&zi.0 - &x0, &zi.1 - &y0);
        let t = -cross_std(&rel, dl) / int(cross(dp, dl));
        let np = &t - &self.std_residues[k - 2];
        if !np.is_integer() {
            return;
        }
        let np = np.to_integer().to_i64().unwrap_or(i64::MAX);
        let zl = (&zi.0 + &t * int(dp.0), &zi.1 + &t * int(dp.1));
        let closing = (&x0 - &zl.0, &y0 - &zl.1);
        let tl = if dl.0 != 0 { closing.0 / int(dl.0) } else { closing.1 / int(dl.1) };
        let nl = &tl - &self.std_residues[k - 1];
        if !nl.is_integer() {
            return;
        }
        let nl = nl.to_integer().to_i64().unwrap_or(i64::MAX);
        let mut signs: Vec<i32> = (0..k - 2).map(|j| self.sign(j, self.shifts[j])).collect();
        signs.push(self.sign(k - 2, np));
        signs.push(self.sign(k - 1, nl));
        let ds: Vec<(i64, i64)> = self.frames.iter().map(|f| f.d).collect();
        if signs.contains(&0) || !convex_ccw(&signs, &ds) {
            return;
        }
        let area = partial + &(cross_std(&rel, dp) * &t * Rat::new(1.into(), 2.into()));
        if area >= *self.max_area {
            self.out.dropped = true;
            return;
        }
        let mut params: Vec<Eps> = (0..k - 2).map(|j| self.param(j, self.shifts[j])).collect();
        params.push(self.param(k - 2, np));
        params.push(self.param(k - 1, nl));
        let mut vertices = vec![self.z0.clone()];
        for j in 0..k - 1 {
            let next = vertices[j].add_along(&params[j], self.frames[j].d);
            vertices.push(next);
        }
        self.out.polygons.push(Polygon { vertices, params, area: Eps::constant(area) });
    }
}

fn cross_std(v: &StdPt, d: (i64, i64)) -> Rat {
    &v.0 * int(d.1) - &v.1 * int(d.0)
}

/// ★-crossings strictly inside an edge: positions ≡ `marker` (mod 1) met
/// when moving from position `start` by `t`, listed in traversal order.
pub fn marker_crossings(start: &Eps, t: &Eps, marker: &Eps) -> usize {
    let end = start + t;
    let (lo, hi) = if t.signum() >= 0 { (start.clone(), end) } else { (end, start.clone()) };
    // count n with lo < marker + n < hi
    let first = (&lo - marker).floor() + int(1);
    let last_excl = &hi - marker;
    let mut last = last_excl.floor();
    if is_integer(&last_excl) {
        last -= int(1);
    }
    let c = last - first + int(1);
    if c.is_negative() {
        0
    } else {
        c.to_integer().to_usize().unwrap_or(0)
    }
}
