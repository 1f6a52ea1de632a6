//! Integer polynomials, stored highest degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds from coefficients, highest degree first, constant term last.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let first = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len().saturating_sub(1));
        let mut coeffs = coeffs[first..].to_vec();
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^q - a_1 x^{q-1} - ... - a_q`, whose positive root is `β` with
    /// `1 = Σ a_n β^{-n}`.
    pub fn parry(digits: &[u32]) -> Self {
        let mut c = Vec::with_capacity(digits.len() + 1);
        c.push(BigInt::one());
        c.extend(digits.iter().map(|&d| -BigInt::from(d)));
        Self::new(c)
    }

    /// `x^{q+1} - w_1 x^q - ... - w_q x - x + 1` for the digit string `w`.
    pub fn right_limit(word: &[u32]) -> Self {
        let mut c = Vec::with_capacity(word.len() + 2);
        c.push(BigInt::one());
        c.extend(word.iter().map(|&d| -BigInt::from(d)));
        *c.last_mut().unwrap() -= 1;
        c.push(BigInt::one());
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn derivative(&self) -> IntPoly {
        let d = self.degree();
        if d == 0 {
            return IntPoly::new(vec![BigInt::zero()]);
        }
        IntPoly::new(self.coeffs[..d].iter().enumerate().map(|(i, c)| c * BigInt::from(d - i)).collect())
    }

    /// Sign changes in the coefficient sequence (Descartes' bound on
    /// positive roots).
    pub fn sign_changes(&self) -> usize {
        let signs: Vec<bool> = self.coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// `2^{k·deg} · P(m / 2^k)`, exactly.
    pub fn eval_dyadic_scaled(&self, m: &BigInt, k: u64) -> BigInt {
        let d = self.degree();
        if d > 32 && self.nonzero_count() * 4 < d {
            let mut acc = BigInt::zero();
            for (i, c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = c * num_traits::pow(m.clone(), d - i);
                acc += term << (k as usize * i);
            }
            return acc;
        }
        let mut acc = self.coeffs[0].clone();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            acc = acc * m + (c << (k as usize * i));
        }
        acc
    }

    pub fn sign_at_dyadic(&self, m: &BigInt, k: u64) -> Ordering {
        self.eval_dyadic_scaled(m, k).sign_ordering()
    }

    /// `v^{deg} · P(u / v)` for `v > 0`, exactly.
    pub fn eval_fraction_scaled(&self, u: &BigInt, v: &BigInt) -> BigInt {
        let mut acc = self.coeffs[0].clone();
        let mut vp = BigInt::one();
        for c in self.coeffs.iter().skip(1) {
            vp *= v;
            acc = acc * u + c * &vp;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let d = self.degree() as i32;
        let scaled = self.eval_fraction_scaled(x.numer(), x.denom());
        BigRational::new(scaled, num_traits::pow(x.denom().clone(), d as usize))
    }

    pub fn sign_at_rational(&self, x: &BigRational) -> Ordering {
        self.eval_fraction_scaled(x.numer(), x.denom()).sign_ordering()
    }

    /// Monic greatest common divisor over the rationals.
    pub fn gcd_rational(&self, other: &IntPoly) -> RatPoly {
        let mut a = RatPoly::from_int(self);
        let mut b = RatPoly::from_int(other);
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Remainder of `self` modulo `other` over the rationals is zero.
    pub fn divisible_by(&self, other: &IntPoly) -> bool {
        RatPoly::from_int(self).rem(&RatPoly::from_int(other)).is_zero()
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && !(d == 0) {
                continue;
            }
            let e = d - i;
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = !mag.is_one() || e == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

/// Rational polynomial, highest degree first; used for exact gcds.
#[derive(Debug, Clone, PartialEq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    fn from_int(p: &IntPoly) -> Self {
        RatPoly { coeffs: p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect() }.trim()
    }

    fn trim(mut self) -> Self {
        let first = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..first);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        (!self.coeffs.is_empty()).then(|| self.coeffs.len() - 1)
    }

    fn monic(self) -> Self {
        match self.coeffs.first() {
            None => self,
            Some(lead) => {
                let lead = lead.clone();
                RatPoly { coeffs: self.coeffs.into_iter().map(|c| c / &lead).collect() }
            }
        }
    }

    fn rem(&self, d: &RatPoly) -> RatPoly {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dl = d.coeffs.len();
        let lead = &d.coeffs[0];
        while r.len() >= dl {
            if r[0].is_zero() {
                r.remove(0);
                continue;
            }
            let factor = &r[0] / lead;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[i] = &r[i] - &factor * c;
            }
            r.remove(0);
        }
        RatPoly { coeffs: r }.trim()
    }

    /// Clears denominators, giving a primitive-up-to-content integer polynomial.
    pub fn to_int(&self) -> IntPoly {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        IntPoly::new(self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect())
    }
}
