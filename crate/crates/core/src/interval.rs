//! Outward-rounded `f64` intervals.
//!
//! Used for log-space magnitudes and estimator values, where the quantities
//! are far too large for exact arithmetic. Every operation widens its result
//! by a couple of ulps so that the true value stays inside even after the
//! rounding of the underlying libm call.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down().next_down()
    }
}

fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up().next_up()
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Widens a single approximate value by a few ulps.
    pub fn around(x: f64) -> Self {
        Interval { lo: down(x), hi: up(x) }
    }

    pub fn ln2() -> Self {
        Self::around(std::f64::consts::LN_2)
    }

    pub fn pi() -> Self {
        Self::around(std::f64::consts::PI)
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            self.lo / 2.0 + self.hi / 2.0
        } else {
            self.lo
        }
    }

    pub fn radius(&self) -> f64 {
        let m = self.mid();
        (m - self.lo).max(self.hi - m).next_up()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::new(lo, hi))
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    pub fn ln(&self) -> Interval {
        let lo = if self.lo <= 0.0 { f64::NEG_INFINITY } else { down(self.lo.ln()) };
        Interval::new(lo, up(self.hi.ln()))
    }

    pub fn exp(&self) -> Interval {
        Interval::new(down(self.lo.exp()).max(0.0), up(self.hi.exp()))
    }

    pub fn ln_1p(&self) -> Interval {
        let lo = if self.lo <= -1.0 { f64::NEG_INFINITY } else { down(self.lo.ln_1p()) };
        Interval::new(lo, up(self.hi.ln_1p()))
    }

    pub fn sqrt(&self) -> Interval {
        Interval::new(down(self.lo.max(0.0).sqrt()).max(0.0), up(self.hi.sqrt()))
    }

    /// `ln(e^a + e^b)`, monotone in both arguments.
    pub fn log_add_exp(&self, other: &Interval) -> Interval {
        fn lae(a: f64, b: f64) -> f64 {
            let (m, n) = if a >= b { (a, b) } else { (b, a) };
            if n == f64::NEG_INFINITY {
                m
            } else {
                m + (n - m).exp().ln_1p()
            }
        }
        Interval::new(down(down(lae(self.lo, other.lo))), up(up(lae(self.hi, other.hi))))
    }

    /// Enclosure of a non-negative big integer.
    pub fn from_biguint(n: &BigUint) -> Interval {
        let bits = n.bits();
        if bits <= 53 {
            return Interval::point(n.to_f64().unwrap());
        }
        let shift = bits - 53;
        let top = (n >> shift).to_f64().unwrap();
        let scale = 2f64.powi(shift.min(2000) as i32);
        if shift > 1100 {
            return Interval::new(f64::MAX, f64::INFINITY);
        }
        Interval::new(top * scale, up((top + 1.0) * scale))
    }

    /// Enclosure of a rational number.
    pub fn from_rational(r: &BigRational) -> Interval {
        let approx = r.to_f64().unwrap_or(f64::NAN);
        if !approx.is_finite() {
            return if r.is_zero() {
                Interval::point(0.0)
            } else if r.numer().sign() == Sign::Minus {
                Interval::new(f64::NEG_INFINITY, -f64::MAX)
            } else {
                Interval::new(f64::MAX, f64::INFINITY)
            };
        }
        let mut lo = approx;
        let mut hi = approx;
        while BigRational::from_float(lo).is_some_and(|l| &l > r) {
            lo = lo.next_down();
        }
        while BigRational::from_float(hi).is_some_and(|h| &h < r) {
            hi = hi.next_up();
        }
        Interval::new(lo, hi)
    }

    /// Natural logarithm of a positive big integer.
    pub fn ln_biguint(n: &BigUint) -> Interval {
        assert!(!n.is_zero(), "ln of zero");
        let bits = n.bits();
        if bits <= 53 {
            return Interval::point(n.to_f64().unwrap()).ln();
        }
        let shift = bits - 53;
        let top = (n >> shift).to_f64().unwrap();
        let head = Interval::new(top, top + 1.0).ln();
        head + Interval::ln2() * Interval::point(shift as f64)
    }

    pub fn ln_bigint(n: &BigInt) -> Interval {
        Self::ln_biguint(n.magnitude())
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new(down(self.lo + o.lo), up(self.hi + o.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::new(down(self.lo - o.hi), up(self.hi - o.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let finite = |x: f64| if x.is_nan() { 0.0 } else { x };
        let lo = c.iter().copied().map(finite).fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().map(finite).fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, o: Interval) -> Interval {
        assert!(o.lo > 0.0 || o.hi < 0.0, "interval division by a range containing zero");
        let inv = Interval::new(down(1.0 / o.hi), up(1.0 / o.lo));
        self * inv
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_big_power_of_ten() {
        let n = BigUint::from(10u32).pow(400);
        let l = Interval::ln_biguint(&n);
        let exact = 400.0 * std::f64::consts::LN_10;
        assert!(l.contains(exact) || (l.lo - exact).abs() < 1e-12);
        assert!(l.width() < 1e-14 * exact, "{}", l.width());
    }

    #[test]
    fn rational_enclosure_brackets() {
        let r = BigRational::new(1.into(), 3.into());
        let i = Interval::from_rational(&r);
        assert!(BigRational::from_float(i.lo).unwrap() <= r);
        assert!(BigRational::from_float(i.hi).unwrap() >= r);
    }

    #[test]
    fn log_add_exp_matches_direct() {
        let a = Interval::point(1.0);
        let b = Interval::point(2.0);
        let s = a.log_add_exp(&b);
        assert!(s.contains((1f64.exp() + 2f64.exp()).ln()));
    }
}
