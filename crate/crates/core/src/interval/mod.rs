//! Outward-rounded interval arithmetic over binary64.

mod inverse;
mod matrix;
pub mod round;
mod vector;

pub use inverse::verified_inverse;
pub use matrix::IntervalMatrix;
pub use vector::IntervalVector;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use round::*;

/// A closed interval `[lo, hi]` of reals.
///
/// Every operation returns an interval containing all pointwise results.
/// Endpoints are finite except for the unbounded interval produced by
/// overflow, which is represented with infinite endpoints.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Builds `[lo, hi]`, failing on reversed or NaN endpoints.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInput(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    #[inline]
    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: f64) -> Self {
        let r = r.abs();
        Interval { lo: -r, hi: r }
    }

    pub fn entire() -> Self {
        Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Midpoint; always a member of the interval.
    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        if !self.is_finite() {
            return match (self.lo.is_finite(), self.hi.is_finite()) {
                (false, false) => 0.0,
                (true, false) => f64::MAX,
                (false, true) => f64::MIN,
                _ => unreachable!(),
            };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on `hi - lo`.
    pub fn diam(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// Upper bound on the radius about `mid()`.
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        sub_up(self.hi, m).max(sub_up(m, self.lo))
    }

    /// Largest absolute value of a member.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value of a member.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn interior_subset_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(&self, other: &Interval) -> Result<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            Err(Error::EmptyIntersection)
        } else {
            Ok(Interval { lo, hi })
        }
    }

    /// `1 / self`; fails when the interval contains zero.
    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.checked_div(self)
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DomainError);
        }
        let (a, b) = (self, rhs);
        let c = [
            (a.lo, b.lo),
            (a.lo, b.hi),
            (a.hi, b.lo),
            (a.hi, b.hi),
        ];
        let lo = c.iter().map(|&(x, y)| div_down(x, y)).fold(f64::INFINITY, f64::min);
        let hi = c.iter().map(|&(x, y)| div_up(x, y)).fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval { lo, hi })
    }

    /// Division by a nonzero integer, as used by Taylor recurrences.
    #[inline]
    pub fn div_usize(self, k: usize) -> Interval {
        let d = k as f64;
        Interval { lo: div_down(self.lo, d), hi: div_up(self.hi, d) }
    }

    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Interval { lo: mul_down(self.lo, self.lo), hi: mul_up(self.hi, self.hi) }
        } else if self.hi <= 0.0 {
            Interval { lo: mul_down(self.hi, self.hi), hi: mul_up(self.lo, self.lo) }
        } else {
            let m = self.mag();
            Interval { lo: 0.0, hi: mul_up(m, m) }
        }
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, n: u32) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        if self.lo >= 0.0 {
            // monotone on the nonnegative axis; products of nonnegative endpoints
            let mut lo = 1.0;
            let mut hi = 1.0;
            for _ in 0..n {
                lo = mul_down(lo, self.lo);
                hi = mul_up(hi, self.hi);
            }
            return Interval { lo, hi };
        }
        let mut result = Interval::ONE;
        let mut base = self;
        let mut e = n;
        let even = n % 2 == 0;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if even && result.lo < 0.0 {
            result.lo = 0.0;
        }
        result
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::DomainError);
        }
        Ok(Interval { lo: sqrt_down(self.lo), hi: sqrt_up(self.hi) })
    }

    /// Exponential. The platform `exp` is faithful but not guaranteed to be
    /// correctly rounded, so both endpoints are moved two ulps outward.
    pub fn exp(self) -> Interval {
        let lo = self.lo.exp().next_down().next_down().max(0.0);
        let hi = self.hi.exp().next_up().next_up();
        Interval { lo, hi }
    }

    pub fn abs(self) -> Interval {
        Interval { lo: self.mig(), hi: self.mag() }
    }

    /// Scales the radius about the midpoint by `factor` (outward).
    pub fn inflate(self, factor: f64, absolute: f64) -> Interval {
        let m = self.mid();
        let r = add_up(mul_up(self.rad(), factor), absolute);
        Interval { lo: sub_down(m, r), hi: add_up(m, r) }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_down(self.lo, rhs.lo), hi: add_up(self.hi, rhs.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: sub_down(self.lo, rhs.hi), hi: sub_up(self.hi, rhs.lo) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        if a.lo == a.hi {
            return scale(b, a.lo);
        }
        if b.lo == b.hi {
            return scale(a, b.lo);
        }
        if a.lo >= 0.0 {
            if b.lo >= 0.0 {
                Interval { lo: mul_down(a.lo, b.lo), hi: mul_up(a.hi, b.hi) }
            } else if b.hi <= 0.0 {
                Interval { lo: mul_down(a.hi, b.lo), hi: mul_up(a.lo, b.hi) }
            } else {
                Interval { lo: mul_down(a.hi, b.lo), hi: mul_up(a.hi, b.hi) }
            }
        } else if a.hi <= 0.0 {
            if b.lo >= 0.0 {
                Interval { lo: mul_down(a.lo, b.hi), hi: mul_up(a.hi, b.lo) }
            } else if b.hi <= 0.0 {
                Interval { lo: mul_down(a.hi, b.hi), hi: mul_up(a.lo, b.lo) }
            } else {
                Interval { lo: mul_down(a.lo, b.hi), hi: mul_up(a.lo, b.lo) }
            }
        } else if b.lo >= 0.0 {
            Interval { lo: mul_down(a.lo, b.hi), hi: mul_up(a.hi, b.hi) }
        } else if b.hi <= 0.0 {
            Interval { lo: mul_down(a.hi, b.lo), hi: mul_up(a.lo, b.lo) }
        } else {
            Interval {
                lo: mul_down(a.lo, b.hi).min(mul_down(a.hi, b.lo)),
                hi: mul_up(a.lo, b.lo).max(mul_up(a.hi, b.hi)),
            }
        }
    }
}

#[inline]
fn scale(a: Interval, c: f64) -> Interval {
    if c >= 0.0 {
        Interval { lo: mul_down(a.lo, c), hi: mul_up(a.hi, c) }
    } else {
        Interval { lo: mul_down(a.hi, c), hi: mul_up(a.lo, c) }
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        scale(self, rhs)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl AddAssign for Interval {
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl SubAssign for Interval {
    fn sub_assign(&mut self, rhs: Interval) {
        *self = *self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn endpoint_products() {
        assert_eq!(iv(1.0, 2.0) * iv(-3.0, 4.0), iv(-6.0, 8.0));
        assert_eq!(iv(-2.0, -1.0) * iv(-3.0, 4.0), iv(-8.0, 6.0));
        assert_eq!(iv(-2.0, 3.0) * iv(-5.0, 4.0), iv(-15.0, 12.0));
    }

    #[test]
    fn endpoint_sums() {
        assert_eq!(iv(0.0, 2.0) + iv(-1.0, 1.0), iv(-1.0, 3.0));
        assert_eq!(iv(0.0, 2.0) - iv(-1.0, 1.0), iv(-1.0, 3.0));
    }

    #[test]
    fn third_is_enclosed_within_two_ulp() {
        let t = Interval::ONE.checked_div(Interval::point(3.0)).unwrap();
        assert!(t.lo() * 3.0 <= 1.0 && t.hi() * 3.0 >= 1.0);
        assert!(t.hi() <= t.lo().next_up().next_up());
    }

    #[test]
    fn division_by_zero_interval_fails() {
        assert_eq!(iv(1.0, 2.0).checked_div(iv(-1.0, 1.0)), Err(Error::DomainError));
        assert_eq!(iv(1.0, 2.0).checked_div(iv(0.0, 1.0)), Err(Error::DomainError));
    }

    #[test]
    fn set_operations() {
        assert_eq!(iv(0.0, 2.0).intersect(&iv(1.0, 3.0)).unwrap(), iv(1.0, 2.0));
        assert_eq!(iv(0.0, 1.0).hull(&iv(2.0, 3.0)), iv(0.0, 3.0));
        assert_eq!(iv(-1.0, 3.0).mid(), 1.0);
        assert_eq!(iv(0.0, 1.0).intersect(&iv(2.0, 3.0)), Err(Error::EmptyIntersection));
    }

    #[test]
    fn mid_stays_inside_for_huge_endpoints() {
        let a = iv(-f64::MAX, f64::MAX);
        assert!(a.contains(a.mid()));
        let b = iv(f64::MAX / 2.0, f64::MAX);
        assert!(b.contains(b.mid()));
    }

    #[test]
    fn powers_and_squares() {
        assert_eq!(iv(-2.0, 1.0).sqr(), iv(0.0, 4.0));
        assert_eq!(iv(-2.0, 1.0).powi(3), iv(-8.0, 4.0));
        assert_eq!(iv(-2.0, 1.0).powi(2), iv(0.0, 4.0));
        assert_eq!(iv(0.0, 0.5).powi(4), iv(0.0, 0.0625));
    }

    #[test]
    fn sqrt_and_exp_enclose() {
        let s = iv(2.0, 2.0).sqrt().unwrap();
        assert!(s.contains(std::f64::consts::SQRT_2));
        assert!(iv(-1.0, 1.0).sqrt().is_err());
        let e = iv(1.0, 1.0).exp();
        assert!(e.contains(std::f64::consts::E));
    }

    #[test]
    fn overflow_gives_unbounded_endpoint() {
        let big = Interval::point(f64::MAX);
        let s = big + big;
        assert_eq!(s.hi(), f64::INFINITY);
        assert_eq!(s.lo(), f64::MAX);
        assert!(!s.is_finite());
    }
}
