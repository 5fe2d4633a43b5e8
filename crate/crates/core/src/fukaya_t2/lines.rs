//! Affine lines of rational slope on the torus R²/Z², with orientation and
//! grading, and the action of Dehn twists on them.

use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::novikov::{gcd_i64, int, Rat};

/// An oriented, graded line {v : p·v_y − q·v_x ≡ offset mod 1}.
///
/// `direction` is the canonical representative of the unoriented slope (its
/// argument lies in [0, π)); `orientation` says whether the oriented line
/// runs along it (+1) or against it (−1). The grading lift is the real
/// number `grading_branch + arg(direction)/π`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LagrangianLine {
    direction: (i64, i64),
    offset: Rat,
    grading_branch: i64,
    orientation: i8,
    torus_area: Rat,
}

fn canonical(p: i64, q: i64) -> bool {
    q > 0 || (q == 0 && p > 0)
}

fn reduce_offset(c: &Rat) -> Rat {
    c - c.floor()
}

impl LagrangianLine {
    /// Line through the oriented direction (p, q); the grading branch defaults
    /// to the lift in (−1/2, 1/2].
    pub fn new(p: i64, q: i64, offset: Rat, grading_branch: Option<i64>, torus_area: Rat) -> Result<Self> {
        if (p, q) == (0, 0) || gcd_i64(p, q) != 1 {
            return Err(Error::Invalid(alloc::format!("direction ({p},{q}) is not primitive")));
        }
        if !torus_area.is_positive() {
            return Err(Error::Invalid(String::from("torus area must be positive")));
        }
        let (dir, orientation, offset) = if canonical(p, q) { ((p, q), 1, offset) } else { ((-p, -q), -1, -offset) };
        let default_branch = if dir.0 < 0 { -1 } else { 0 };
        Ok(LagrangianLine {
            direction: dir,
            offset: reduce_offset(&offset),
            grading_branch: grading_branch.unwrap_or(default_branch),
            orientation,
            torus_area,
        })
    }

    /// Horizontal line of slope (1, 0) through height `offset`.
    pub fn section(offset: Rat, area: Rat) -> Self {
        LagrangianLine::new(1, 0, offset, None, area).expect("valid section")
    }

    /// Vertical line of slope (0, 1).
    pub fn fibre(offset: Rat, area: Rat) -> Self {
        LagrangianLine::new(0, 1, -offset, None, area).expect("valid fibre")
    }

    pub fn direction(&self) -> (i64, i64) {
        self.direction
    }

    /// The oriented direction vector.
    pub fn oriented_direction(&self) -> (i64, i64) {
        let o = self.orientation as i64;
        (o * self.direction.0, o * self.direction.1)
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn grading_branch(&self) -> i64 {
        self.grading_branch
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn torus_area(&self) -> &Rat {
        &self.torus_area
    }

    /// Same line, moved to another offset (a Hamiltonian translation).
    pub fn with_offset(&self, offset: Rat) -> Self {
        let mut out = self.clone();
        out.offset = reduce_offset(&offset);
        out
    }

    /// Same line with grading lift raised by `k` (the shift `[k]`).
    pub fn shifted(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.grading_branch -= k;
        out
    }

    pub fn is_parallel(&self, other: &LagrangianLine) -> bool {
        self.direction == other.direction
    }

    /// Same underlying line and orientation, ignoring grading.
    pub fn same_curve(&self, other: &LagrangianLine) -> bool {
        self.direction == other.direction && self.offset == other.offset
    }

    /// Determinant of the two directions; its absolute value counts intersections.
    pub fn intersection_number(&self, other: &LagrangianLine) -> i64 {
        cross(self.direction, other.direction)
    }

    /// Degree of every intersection point viewed as a morphism self → other.
    pub fn degree_to(&self, other: &LagrangianLine) -> Result<i32> {
        let c = cross(self.direction, other.direction);
        if c == 0 {
            return Err(Error::ParallelLines);
        }
        let base = other.grading_branch - self.grading_branch;
        Ok((if c > 0 { base + 1 } else { base }) as i32)
    }

    /// Image under the Dehn twist along `core`: x ↦ x + (⟨v, x⟩ − c)·v with v
    /// the core's canonical direction and c its offset.
    pub fn twisted_along(&self, core: &LagrangianLine) -> Self {
        let v = core.direction;
        let u = self.direction;
        let m = SlopeMatrix::twist(v);
        let mu = m.apply(u);
        // offset: ⟨Md, y⟩ = ⟨d, x⟩ − c_V ⟨Md, v⟩
        let new_offset = &self.offset - &core.offset * int(cross(mu, v));
        let turn = cross(u, mu);
        let upper = canonical(mu.0, mu.1);
        let branch = if turn > 0 {
            if upper { self.grading_branch } else { self.grading_branch + 1 }
        } else if turn < 0 {
            if upper { self.grading_branch } else { self.grading_branch - 1 }
        } else {
            self.grading_branch
        };
        let (dir, flip, off) = if upper { (mu, 1, new_offset) } else { ((-mu.0, -mu.1), -1, -new_offset) };
        LagrangianLine {
            direction: dir,
            offset: reduce_offset(&off),
            grading_branch: branch,
            orientation: self.orientation * flip,
            torus_area: self.torus_area.clone(),
        }
    }

    /// `k`-fold twist along `core` (negative `k` is rejected).
    pub fn twisted_times(&self, core: &LagrangianLine, k: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.twisted_along(core);
        }
        out
    }

    /// Text form `p,q,offset,grading_branch` using the oriented direction.
    pub fn spec_string(&self) -> String {
        let (p, q) = self.oriented_direction();
        let off = if self.orientation > 0 { self.offset.clone() } else { reduce_offset(&-self.offset.clone()) };
        let off_s = if off.denom().is_one() { alloc::format!("{}", off.numer()) } else { alloc::format!("{}/{}", off.numer(), off.denom()) };
        alloc::format!("{p},{q},{off_s},{}", self.grading_branch)
    }

    /// Whether the standard part of `(x, y)` lies on the line.
    pub fn contains(&self, x: &Rat, y: &Rat) -> bool {
        let (p, q) = self.direction;
        let v = int(p) * y - int(q) * x - &self.offset;
        v.is_integer()
    }
}

impl fmt::Display for LagrangianLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

pub fn cross(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Integral 2×2 matrix acting on slope vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlopeMatrix(pub [[i64; 2]; 2]);

impl SlopeMatrix {
    pub const IDENTITY: SlopeMatrix = SlopeMatrix([[1, 0], [0, 1]]);

    /// Linear part of the Dehn twist along a curve of direction v.
    pub fn twist(v: (i64, i64)) -> Self {
        // x ↦ x + ⟨v, x⟩ v with ⟨v, x⟩ = v.0 x.1 − v.1 x.0
        SlopeMatrix([[1 - v.0 * v.1, v.0 * v.0], [-v.1 * v.1, 1 + v.0 * v.1]])
    }

    pub fn apply(&self, x: (i64, i64)) -> (i64, i64) {
        let m = self.0;
        (m[0][0] * x.0 + m[0][1] * x.1, m[1][0] * x.0 + m[1][1] * x.1)
    }

    pub fn mul(&self, o: &SlopeMatrix) -> SlopeMatrix {
        let (a, b) = (self.0, o.0);
        let mut c = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        SlopeMatrix(c)
    }

    pub fn pow(&self, k: u32) -> SlopeMatrix {
        (0..k).fold(SlopeMatrix::IDENTITY, |acc, _| acc.mul(self))
    }

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }
}

/// The twist `core` applied to `line`.
pub fn dehn_twist(line: &LagrangianLine, core: &LagrangianLine) -> LagrangianLine {
    line.twisted_along(core)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Rat {
        int(1)
    }

    #[test]
    fn twist_matrices_have_order_six() {
        let tf = SlopeMatrix::twist((0, 1));
        let ts = SlopeMatrix::twist((1, 0));
        assert_eq!(tf.apply((1, 0)), (1, -1));
        assert_eq!(ts.apply((0, 1)), (1, 1));
        let prod = tf.mul(&ts);
        assert_eq!(prod.pow(6), SlopeMatrix::IDENTITY);
        assert_ne!(prod.pow(3), SlopeMatrix::IDENTITY);
    }

    #[test]
    fn twist_fixes_its_core() {
        let lf = LagrangianLine::fibre(int(0), a());
        assert_eq!(lf.twisted_along(&lf), lf);
    }

    #[test]
    fn section_fibre_degrees() {
        let ls = LagrangianLine::section(int(0), a());
        let lf = LagrangianLine::fibre(int(0), a());
        assert_eq!(ls.degree_to(&lf).unwrap(), 1);
        assert_eq!(lf.degree_to(&ls).unwrap(), 0);
    }

    #[test]
    fn twisted_sections_have_expected_degrees() {
        let ls = LagrangianLine::section(int(0), a());
        let lf = LagrangianLine::fibre(int(0), a());
        let t: alloc::vec::Vec<_> = (0..5).map(|k| ls.twisted_times(&lf, k)).collect();
        for i in 0..5 {
            for j in 0..5 {
                if i == j {
                    continue;
                }
                let expected = if j > i { 0 } else { 1 };
                assert_eq!(t[i].degree_to(&t[j]).unwrap(), expected, "{i} -> {j}");
                assert_eq!(t[i].intersection_number(&t[j]).abs(), (j as i64 - i as i64).abs());
            }
            assert_eq!(t[i].degree_to(&lf).unwrap(), 1);
        }
    }
}
