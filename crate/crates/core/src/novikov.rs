//! Truncated Novikov series Σ aᵢ q^{tᵢ} with rational exponents and coefficients.
//!
//! A value carries a cutoff: every exponent below it is exact, nothing at or
//! above it is stored. The `truncated` flag records whether anything was ever
//! dropped, so a flag-free value is the exact element of the field.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Truncation used when nothing else is configured.
pub const DEFAULT_TRUNCATION: i64 = 20;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Valuation of a Novikov element; zero has valuation `Infinite`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Rat),
    Infinite,
}

#[derive(Clone, Debug)]
pub struct Novikov {
    terms: Vec<(Rat, Rat)>,
    cutoff: Rat,
    truncated: bool,
}

impl PartialEq for Novikov {
    /// Equality of the stored terms; the cutoff is bookkeeping, not value.
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Novikov {}

impl Novikov {
    pub fn zero(cutoff: Rat) -> Self {
        Novikov { terms: Vec::new(), cutoff, truncated: false }
    }

    pub fn one(cutoff: Rat) -> Self {
        Self::monomial(Rat::one(), Rat::zero(), cutoff)
    }

    /// `coeff · q^exp`, flagged if the exponent is already past the cutoff.
    pub fn monomial(coeff: Rat, exp: Rat, cutoff: Rat) -> Self {
        Self::from_terms(core::iter::once((exp, coeff)), cutoff)
    }

    /// Integer constant with exponent 0.
    pub fn constant(c: i64, cutoff: Rat) -> Self {
        Self::monomial(int(c), Rat::zero(), cutoff)
    }

    /// Builds a normalized value from arbitrary (exponent, coefficient) pairs.
    pub fn from_terms<I: IntoIterator<Item = (Rat, Rat)>>(terms: I, cutoff: Rat) -> Self {
        let mut acc: BTreeMap<Rat, Rat> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_insert_with(Rat::zero) += c;
        }
        let mut out = Novikov { terms: Vec::new(), cutoff, truncated: false };
        for (e, c) in acc {
            if c.is_zero() {
                continue;
            }
            if e >= out.cutoff {
                out.truncated = true;
            } else {
                out.terms.push((e, c));
            }
        }
        out
    }

    pub fn terms(&self) -> &[(Rat, Rat)] {
        &self.terms
    }

    pub fn cutoff(&self) -> &Rat {
        &self.cutoff
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => Valuation::Infinite,
        }
    }

    pub fn leading_coefficient(&self) -> Option<&Rat> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Coefficient of `q^exp`, zero when absent.
    pub fn coefficient(&self, exp: &Rat) -> Rat {
        self.terms
            .iter()
            .find(|(e, _)| e == exp)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Drops terms at or above `cutoff` and lowers the cutoff accordingly.
    pub fn truncate_to(&self, cutoff: &Rat) -> Self {
        if *cutoff >= self.cutoff {
            return self.clone();
        }
        let mut out = Novikov { terms: Vec::new(), cutoff: cutoff.clone(), truncated: self.truncated };
        for (e, c) in &self.terms {
            if e < cutoff {
                out.terms.push((e.clone(), c.clone()));
            } else {
                out.truncated = true;
            }
        }
        out
    }

    /// Same value with a new cutoff; raising the cutoff of a flagged value
    /// keeps the flag.
    pub fn with_cutoff(&self, cutoff: Rat) -> Self {
        if cutoff < self.cutoff {
            self.truncate_to(&cutoff)
        } else {
            Novikov { terms: self.terms.clone(), cutoff, truncated: self.truncated }
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Novikov { terms: Vec::new(), cutoff: self.cutoff.clone(), truncated: self.truncated };
        }
        Novikov {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
            cutoff: self.cutoff.clone(),
            truncated: self.truncated,
        }
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: &Rat) -> Self {
        let cutoff = if self.truncated {
            core::cmp::min(self.cutoff.clone(), &self.cutoff + shift)
        } else {
            self.cutoff.clone()
        };
        Novikov::from_terms(self.terms.iter().map(|(e, a)| (e + shift, a.clone())), cutoff)
            .flagged(self.truncated)
    }

    /// q·d/dq, multiplying each coefficient by its exponent.
    pub fn euler_derivative(&self) -> Self {
        Novikov::from_terms(self.terms.iter().map(|(e, a)| (e.clone(), e * a)), self.cutoff.clone()).flagged(self.truncated)
    }

    fn flagged(mut self, flag: bool) -> Self {
        self.truncated |= flag;
        self
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let cutoff = core::cmp::min(&self.cutoff, &other.cutoff).clone();
        let mut out = Novikov { terms: Vec::with_capacity(self.terms.len() + other.terms.len()), cutoff, truncated: self.truncated || other.truncated };
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let (e, c) = match (a.get(i), b.get(j)) {
                (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(eb) {
                    Ordering::Less => {
                        i += 1;
                        (ea.clone(), ca.clone())
                    }
                    Ordering::Greater => {
                        j += 1;
                        (eb.clone(), cb.clone())
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (ea.clone(), ca + cb)
                    }
                },
                (Some((ea, ca)), None) => {
                    i += 1;
                    (ea.clone(), ca.clone())
                }
                (None, Some((eb, cb))) => {
                    j += 1;
                    (eb.clone(), cb.clone())
                }
                (None, None) => unreachable!(),
            };
            if c.is_zero() {
                continue;
            }
            if e >= out.cutoff {
                out.truncated = true;
            } else {
                out.terms.push((e, c));
            }
        }
        out
    }

    pub fn neg_ref(&self) -> Self {
        Novikov {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            cutoff: self.cutoff.clone(),
            truncated: self.truncated,
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    /// Cauchy product. A flagged factor limits the product's cutoff by the
    /// other factor's valuation.
    pub fn mul_ref(&self, other: &Self) -> Self {
        let mut cutoff = core::cmp::min(&self.cutoff, &other.cutoff).clone();
        if self.truncated {
            if let Valuation::Finite(v) = other.valuation() {
                cutoff = core::cmp::min(cutoff, &self.cutoff + v);
            }
        }
        if other.truncated {
            if let Valuation::Finite(v) = self.valuation() {
                cutoff = core::cmp::min(cutoff, &other.cutoff + v);
            }
        }
        let mut acc: BTreeMap<Rat, Rat> = BTreeMap::new();
        let mut dropped = false;
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e >= cutoff {
                    dropped = true;
                    continue;
                }
                *acc.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        Novikov {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            cutoff,
            truncated: self.truncated || other.truncated || dropped,
        }
    }

    /// Multiplicative inverse via a geometric series in the normalized tail.
    pub fn inv(&self) -> Result<Self> {
        let (v, a) = match self.terms.first() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let cap = self.cutoff.clone();
        let result_cutoff = if self.truncated {
            core::cmp::min(cap.clone(), &cap - &v - &v)
        } else {
            cap.clone()
        };
        if result_cutoff <= -v.clone() {
            return Err(Error::OutOfWindow);
        }
        let rel_cutoff = &result_cutoff + &v;
        let a_inv = a.recip();
        // u = x / (a q^v) - 1, every exponent strictly positive
        let u = Novikov::from_terms(
            self.terms.iter().skip(1).map(|(e, c)| (e - &v, -(c * &a_inv))),
            rel_cutoff.clone(),
        );
        let mut sum = Novikov::one(rel_cutoff.clone());
        if !u.is_zero() {
            let mut power = Novikov::one(rel_cutoff.clone());
            loop {
                power = power.mul_ref(&u);
                if power.is_zero() {
                    break;
                }
                sum = sum.add_ref(&power);
            }
            sum.truncated = true;
        }
        let mut out = sum.scale(&a_inv);
        out.terms.iter_mut().for_each(|(e, _)| *e -= &v);
        out.cutoff = result_cutoff;
        out.truncated = self.truncated || sum.truncated;
        Ok(out)
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// True when all stored coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Order used for deterministic tie-breaking between pivots.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

impl Add for Novikov {
    type Output = Novikov;
    fn add(self, rhs: Novikov) -> Novikov {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a Novikov> for &'a Novikov {
    type Output = Novikov;
    fn add(self, rhs: &Novikov) -> Novikov {
        self.add_ref(rhs)
    }
}

impl Sub for Novikov {
    type Output = Novikov;
    fn sub(self, rhs: Novikov) -> Novikov {
        self.sub_ref(&rhs)
    }
}

impl<'a> Sub<&'a Novikov> for &'a Novikov {
    type Output = Novikov;
    fn sub(self, rhs: &Novikov) -> Novikov {
        self.sub_ref(rhs)
    }
}

impl Mul for Novikov {
    type Output = Novikov;
    fn mul(self, rhs: Novikov) -> Novikov {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a Novikov> for &'a Novikov {
    type Output = Novikov;
    fn mul(self, rhs: &Novikov) -> Novikov {
        self.mul_ref(rhs)
    }
}

impl Neg for Novikov {
    type Output = Novikov;
    fn neg(self) -> Novikov {
        self.neg_ref()
    }
}

impl Neg for &Novikov {
    type Output = Novikov;
    fn neg(self) -> Novikov {
        self.neg_ref()
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        alloc::format!("{}", r.numer())
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Novikov {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let unit = mag.is_one();
            if e.is_zero() {
                f.write_str(&fmt_rat(&mag))?;
                continue;
            }
            if !unit {
                f.write_str(&fmt_rat(&mag))?;
            }
            if e.is_one() {
                f.write_str("q")?;
            } else if e.is_integer() {
                write!(f, "q^{}", e.numer())?;
            } else {
                write!(f, "q^({})", fmt_rat(e))?;
            }
        }
        if self.truncated {
            write!(f, " + O(q^{})", fmt_rat(&self.cutoff))?;
        }
        Ok(())
    }
}

/// The Tate-curve series tabulated by [`tate_series`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SeriesName {
    S3,
    S5,
    A4,
    A6,
}

impl SeriesName {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "s3" => Some(SeriesName::S3),
            "s5" => Some(SeriesName::S5),
            "a4" => Some(SeriesName::A4),
            "a6" => Some(SeriesName::A6),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesName::S3 => "s3",
            SeriesName::S5 => "s5",
            SeriesName::A4 => "a4",
            SeriesName::A6 => "a6",
        }
    }
}

/// Coefficients of qⁿ for 1 ≤ n ≤ order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTable {
    pub name: SeriesName,
    pub coefficients: BTreeMap<u32, Rat>,
    pub order: u32,
}

/// Σ_{m≥1} m^k q^m / (1 − q^m), accumulated with Novikov inverses.
fn lambert_series(k: u32, order: u32) -> Result<Novikov> {
    let cutoff = int(order as i64 + 1);
    let mut total = Novikov::zero(cutoff.clone());
    for m in 1..=order {
        let qm = int(m as i64);
        let denom = Novikov::one(cutoff.clone()).sub_ref(&Novikov::monomial(Rat::one(), qm.clone(), cutoff.clone()));
        let weight = Rat::from_integer(BigInt::from(m).pow(k));
        let term = Novikov::monomial(weight, qm, cutoff.clone()).mul_ref(&denom.inv()?);
        total = total.add_ref(&term);
    }
    Ok(total)
}

fn to_table(name: SeriesName, series: &Novikov, order: u32) -> Result<SeriesTable> {
    let mut coefficients = BTreeMap::new();
    for n in 1..=order {
        let c = series.coefficient(&int(n as i64));
        if matches!(name, SeriesName::A4 | SeriesName::A6) && !c.is_integer() {
            return Err(Error::NonIntegral { series: String::from(name.as_str()), power: n });
        }
        coefficients.insert(n, c);
    }
    Ok(SeriesTable { name, coefficients, order })
}

/// The Tate series s₃, s₅, a₄ = −5s₃ and a₆ = (−5s₃ − 7s₅)/12 up to qᴺ.
pub fn tate_series(name: SeriesName, order: u32) -> Result<SeriesTable> {
    if order == 0 {
        return Err(Error::Invalid(String::from("series order must be at least 1")));
    }
    let series = match name {
        SeriesName::S3 => lambert_series(3, order)?,
        SeriesName::S5 => lambert_series(5, order)?,
        SeriesName::A4 => lambert_series(3, order)?.scale(&int(-5)),
        SeriesName::A6 => {
            let s3 = lambert_series(3, order)?;
            let s5 = lambert_series(5, order)?;
            s3.scale(&int(-5)).add_ref(&s5.scale(&int(-7))).scale(&rat(1, 12))
        }
    };
    to_table(name, &series, order)
}

/// Smallest integer ≥ r.
pub fn ceil_int(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

/// Smallest i64 ≥ r; panics only on values far outside any enumeration range.
pub fn ceil_i64(r: &Rat) -> i64 {
    r.ceil().to_integer().to_i64().expect("value within i64")
}

pub fn floor_i64(r: &Rat) -> i64 {
    r.floor().to_integer().to_i64().expect("value within i64")
}

/// gcd of two integers, non-negative.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i64) -> Novikov {
        Novikov::monomial(int(1), int(e), int(20))
    }

    #[test]
    fn additive_inverse_is_zero() {
        let x = q(1);
        assert!(x.add_ref(&x.neg_ref()).is_zero());
    }

    #[test]
    fn like_terms_merge() {
        let half = Novikov::monomial(int(1), rat(1, 2), int(20));
        let x = Novikov::one(int(20)).add_ref(&half).add_ref(&half);
        assert_eq!(x.terms(), &[(int(0), int(1)), (rat(1, 2), int(2))]);
    }

    #[test]
    fn terms_past_cutoff_set_flag() {
        let x = Novikov::one(int(20)).add_ref(&Novikov::monomial(int(1), int(25), int(20)));
        assert_eq!(x, Novikov::one(int(20)));
        assert!(x.is_truncated());
    }

    #[test]
    fn monomial_inverse_is_exact() {
        let inv = q(2).inv().unwrap();
        assert_eq!(inv.terms(), &[(int(-2), int(1))]);
        assert!(!inv.is_truncated());
    }

    #[test]
    fn geometric_series() {
        let one_minus_q = Novikov::one(int(20)).sub_ref(&q(1));
        let inv = one_minus_q.inv().unwrap();
        assert_eq!(inv.terms().len(), 20);
        assert!(inv.terms().iter().all(|(_, c)| c.is_one()));
        assert!(one_minus_q.mul_ref(&inv) == Novikov::one(int(20)));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(Novikov::zero(int(20)).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn display_reads_naturally() {
        let x = Novikov::from_terms([(int(0), int(1)), (rat(1, 2), int(-2)), (int(3), int(1))], int(20));
        assert_eq!(alloc::format!("{x}"), "1 - 2q^(1/2) + q^3");
    }
}
