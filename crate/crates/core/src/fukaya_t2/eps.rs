//! Polynomials in an infinitesimal ε > 0, ordered lexicographically.
//!
//! Offsets are perturbed by multiples of ε so that concurrent lines become
//! generic while every standard-part quantity stays exact.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::novikov::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Eps {
    c: Vec<Rat>,
}

impl Eps {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Eps { c }
    }

    pub fn zero() -> Self {
        Eps { c: Vec::new() }
    }

    pub fn constant(r: Rat) -> Self {
        Eps::new(vec![r])
    }

    /// `a + b·ε`.
    pub fn linear(a: Rat, b: Rat) -> Self {
        Eps::new(vec![a, b])
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.c.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// The standard part.
    pub fn std(&self) -> Rat {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn signum(&self) -> i32 {
        match self.c.iter().find(|x| !x.is_zero()) {
            None => 0,
            Some(x) if x.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Eps::new(self.c.iter().map(|x| x * r).collect())
    }

    /// Largest integer n with n ≤ self.
    pub fn floor(&self) -> Rat {
        let s = self.std();
        let f = s.floor();
        if f == s && self.c.iter().skip(1).find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            f - Rat::from_integer(1.into())
        } else {
            f
        }
    }

    /// self − floor(self), lying in [0, 1).
    pub fn frac(&self) -> Self {
        self - &Eps::constant(self.floor())
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

impl Ord for Eps {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }
}

impl PartialOrd for Eps {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Eps> for &'a Eps {
    type Output = Eps;
    fn add(self, rhs: &Eps) -> Eps {
        let n = self.c.len().max(rhs.c.len());
        Eps::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Eps> for &'a Eps {
    type Output = Eps;
    fn sub(self, rhs: &Eps) -> Eps {
        let n = self.c.len().max(rhs.c.len());
        Eps::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Eps> for &'a Eps {
    type Output = Eps;
    fn mul(self, rhs: &Eps) -> Eps {
        if self.is_zero() || rhs.is_zero() {
            return Eps::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Eps::new(c)
    }
}

impl Neg for &Eps {
    type Output = Eps;
    fn neg(self) -> Eps {
        Eps::new(self.c.iter().map(|x| -x).collect())
    }
}

impl Neg for Eps {
    type Output = Eps;
    fn neg(self) -> Eps {
        -&self
    }
}

/// A point of the plane with ε-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pt {
    pub x: Eps,
    pub y: Eps,
}

impl Pt {
    pub fn new(x: Eps, y: Eps) -> Self {
        Pt { x, y }
    }

    pub fn add(&self, o: &Pt) -> Pt {
        Pt::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Pt) -> Pt {
        Pt::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, t: &Eps) -> Pt {
        Pt::new(&self.x * t, &self.y * t)
    }

    pub fn cross(&self, o: &Pt) -> Eps {
        &(&self.x * &o.y) - &(&self.y * &o.x)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `self + t·d` for an integral direction d.
    pub fn add_along(&self, t: &Eps, d: (i64, i64)) -> Pt {
        Pt::new(&self.x + &t.scale(&Rat::from_integer(d.0.into())), &self.y + &t.scale(&Rat::from_integer(d.1.into())))
    }

    /// `self × d` for an integral direction d.
    pub fn cross_int(&self, d: (i64, i64)) -> Eps {
        &self.x.scale(&Rat::from_integer(d.1.into())) - &self.y.scale(&Rat::from_integer(d.0.into()))
    }

    /// Representative in [0, 1)² and the integer translation removed.
    pub fn reduce(&self) -> (Pt, (Rat, Rat)) {
        let fx = self.x.floor();
        let fy = self.y.floor();
        (Pt::new(&self.x - &Eps::constant(fx.clone()), &self.y - &Eps::constant(fy.clone())), (fx, fy))
    }
}

impl Ord for Pt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.x.std(), self.y.std(), &self.x, &self.y).cmp(&(other.x.std(), other.y.std(), &other.x, &other.y))
    }
}

impl PartialOrd for Pt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Half-plane index used to order directions by angle in [0, 2π).
fn half(v: &Pt) -> u8 {
    let sy = v.y.signum();
    let sx = v.x.signum();
    if sy > 0 || (sy == 0 && sx > 0) {
        0
    } else {
        1
    }
}

/// Compares arguments of two nonzero vectors in [0, 2π).
pub fn angle_cmp(a: &Pt, b: &Pt) -> Ordering {
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    match a.cross(b).signum() {
        0 => Ordering::Equal,
        s if s > 0 => Ordering::Less,
        _ => Ordering::Greater,
    }
}
