//! Exact dyadic rationals `m * 2^e`.
//!
//! Interval orbits and root refinement work with dyadics so that every
//! product stays a plain big-integer multiplication and precision can be
//! trimmed with a shift.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use std::cmp::Ordering;

#[derive(Debug, Clone)]
pub(crate) struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic { mant: n.into(), exp: 0 }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    fn align(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        (&self.mant << (self.exp - e) as usize, &other.mant << (other.exp - e) as usize, e)
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        let (a, b, e) = self.align(o);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        let (a, b, e) = self.align(o);
        Dyadic::new(a - b, e)
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &o.mant, self.exp + o.exp)
    }

    /// Largest dyadic with exponent at least `-prec` that is `<= self`.
    pub fn round_down(&self, prec: u64) -> Dyadic {
        let target = -(prec as i64);
        if self.exp >= target {
            return self.clone();
        }
        let shift = (target - self.exp) as usize;
        Dyadic::new(self.mant.div_floor(&(BigInt::one() << shift)), target)
    }

    pub fn round_up(&self, prec: u64) -> Dyadic {
        let target = -(prec as i64);
        if self.exp >= target {
            return self.clone();
        }
        let shift = (target - self.exp) as usize;
        Dyadic::new(self.mant.div_ceil(&(BigInt::one() << shift)), target)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Largest dyadic `<= r` with denominator `2^prec`.
    pub fn floor_of(r: &BigRational, prec: u64) -> Dyadic {
        let m = (r.numer() << prec as usize).div_floor(r.denom());
        Dyadic::new(m, -(prec as i64))
    }

    pub fn ceil_of(r: &BigRational, prec: u64) -> Dyadic {
        let m = (r.numer() << prec as usize).div_ceil(r.denom());
        Dyadic::new(m, -(prec as i64))
    }

    /// Exact conversion when `r` is dyadic.
    pub fn exact_of(r: &BigRational) -> Option<Dyadic> {
        let d = r.denom();
        let tz = d.trailing_zeros().unwrap_or(0);
        if (d >> tz as usize) != BigInt::one() {
            return None;
        }
        Some(Dyadic::new(r.numer().clone(), -(tz as i64)))
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, o: &Dyadic) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Dyadic) -> Ordering {
        let (a, b, _) = self.align(o);
        a.cmp(&b)
    }
}
