//! Isolated simple roots of integer polynomials, refined by exact sign
//! evaluation at dyadic points.

use super::poly::IntPoly;
use crate::dyadic::Dyadic;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// Largest refinement, in bits, that any root will attempt.
pub const MAX_ROOT_BITS: u64 = 1 << 20;

/// A root of `poly` isolated in `[lo, hi]`, where `poly` changes sign.
///
/// Endpoints are dyadic `m / 2^k`; a rational root found exactly collapses
/// the interval to a point.
#[derive(Debug, Clone)]
pub struct AlgebraicRoot {
    poly: IntPoly,
    lo: Dyadic,
    hi: Dyadic,
    sign_lo: Ordering,
    exact: Option<BigRational>,
}

/// Bits `k` with `2^{-k} <= tol`.
pub fn bits_for(tol: &BigRational) -> Result<u64> {
    if tol <= &BigRational::zero() {
        return Err(Error::pre("tolerance must be positive"));
    }
    let mut k = (tol.denom().bits() as i64 - tol.numer().bits() as i64).max(0) as u64;
    while BigRational::new(BigInt::one(), BigInt::one() << k as usize) > *tol {
        k += 1;
    }
    Ok(k)
}

impl AlgebraicRoot {
    /// Isolates the root in `[lo, hi]` (integers) after checking the sign
    /// change exactly.
    pub fn isolate(poly: IntPoly, lo: &BigInt, hi: &BigInt) -> Result<Self> {
        let slo = poly.sign_at_dyadic(lo, 0);
        let shi = poly.sign_at_dyadic(hi, 0);
        if slo == Ordering::Equal {
            return Ok(Self::exact_root(poly, BigRational::from_integer(lo.clone())));
        }
        if shi == Ordering::Equal {
            return Ok(Self::exact_root(poly, BigRational::from_integer(hi.clone())));
        }
        if slo == shi {
            return Err(Error::cert(format!("{poly} has no sign change on [{lo}, {hi}]")));
        }
        Ok(AlgebraicRoot {
            poly,
            lo: Dyadic::from_int(lo.clone()),
            hi: Dyadic::from_int(hi.clone()),
            sign_lo: slo,
            exact: None,
        })
    }

    fn exact_root(poly: IntPoly, r: BigRational) -> Self {
        let d = Dyadic::exact_of(&r).expect("exact roots found here are dyadic");
        AlgebraicRoot { poly, lo: d.clone(), hi: d, sign_lo: Ordering::Less, exact: Some(r) }
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn enclosure(&self) -> Enclosure {
        Enclosure::new(self.lo.to_rational(), self.hi.to_rational())
    }

    fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Current width is at most `2^{-bits}`.
    fn width_within(&self, bits: u64) -> bool {
        if self.exact.is_some() {
            return true;
        }
        self.width() <= Dyadic::new(BigInt::one(), -(bits as i64))
    }

    fn sign_at(&self, x: &Dyadic) -> Ordering {
        if x.exp >= 0 {
            self.poly.sign_at_dyadic(&(&x.mant << x.exp as usize), 0)
        } else {
            self.poly.sign_at_dyadic(&x.mant, (-x.exp) as u64)
        }
    }

    /// Narrows to `[lo, x]` or `[x, hi]` by the sign at `x`.
    fn split_at(&mut self, x: Dyadic) -> bool {
        match self.sign_at(&x) {
            Ordering::Equal => {
                let r = x.to_rational();
                self.lo = x.clone();
                self.hi = x;
                self.exact = Some(r);
                true
            }
            s if s == self.sign_lo => {
                self.lo = x;
                false
            }
            _ => {
                self.hi = x;
                false
            }
        }
    }

    fn bisect(&mut self) -> bool {
        let mid = self.lo.add(&self.hi);
        let mid = Dyadic::new(mid.mant, mid.exp - 1);
        self.split_at(mid)
    }

    /// One Newton step at `2^{-k2}` resolution, accepted only when the
    /// resulting bracket is verified by signs.
    fn newton(&mut self, k2: u64) -> bool {
        let k = (-self.lo.exp.min(self.hi.exp)).max(0) as u64;
        let mid = self.lo.add(&self.hi);
        let mid = Dyadic::new(mid.mant, mid.exp - 1);
        let kk = k + 1;
        let m = &mid.mant << ((mid.exp + kk as i64) as usize);
        let d = self.poly.degree();
        let s0 = self.poly.eval_dyadic_scaled(&m, kk);
        let dp = self.poly.derivative();
        let s1 = dp.eval_dyadic_scaled(&m, kk);
        if s1.is_zero() || d == 0 {
            return false;
        }
        // x' = (m·S1 - S0) / (S1·2^kk) ; scaled to 2^k2
        let num = (&m * &s1 - s0) << ((k2 as i64 - kk as i64).max(0) as usize);
        let num = if k2 < kk { num >> (kk - k2) as usize } else { num };
        let m2 = num.div_floor(&s1);
        let e = -(k2 as i64);
        let a = Dyadic::new(&m2 - 1, e).max(self.lo.clone());
        let b = Dyadic::new(&m2 + 2, e).min(self.hi.clone());
        if a >= b {
            return false;
        }
        let sa = self.sign_at(&a);
        let sb = self.sign_at(&b);
        if sa == Ordering::Equal {
            return self.split_at(a);
        }
        if sb == Ordering::Equal {
            return self.split_at(b);
        }
        if sa == self.sign_lo && sb != self.sign_lo {
            self.lo = a;
            self.hi = b;
        }
        false
    }

    /// Refines until the width is at most `2^{-bits}`.
    pub fn refine_bits(&mut self, bits: u64) -> Result<()> {
        if bits > MAX_ROOT_BITS {
            return Err(Error::cert(format!("root refinement beyond {MAX_ROOT_BITS} bits requested")));
        }
        while !self.width_within(bits.min(24)) {
            if self.bisect() {
                return Ok(());
            }
        }
        while !self.width_within(bits) {
            let k = (-self.lo.exp.min(self.hi.exp)).max(0) as u64;
            let before = self.width();
            let k2 = (2 * k).min(bits + 4).max(k + 2);
            if self.newton(k2) {
                return Ok(());
            }
            if self.width() >= before {
                for _ in 0..4 {
                    if self.bisect() {
                        return Ok(());
                    }
                }
            }
        }
        Ok(())
    }

    pub fn refine(&mut self, tol: &BigRational) -> Result<()> {
        self.refine_bits(bits_for(tol)?)
    }

    /// Exact test of whether this root is also a root of `q`.
    pub fn is_root_of(&self, q: &IntPoly) -> bool {
        if q.is_zero() {
            return true;
        }
        if let Some(r) = &self.exact {
            return q.sign_at_rational(r) == Ordering::Equal;
        }
        let g = self.poly.gcd_rational(q);
        match g.degree() {
            None | Some(0) => false,
            Some(_) => {
                let g = g.to_int();
                let a = sign_of(&g, &self.lo);
                let b = sign_of(&g, &self.hi);
                a != b && a != Ordering::Equal && b != Ordering::Equal
            }
        }
    }
}

fn sign_of(p: &IntPoly, x: &Dyadic) -> Ordering {
    if x.exp >= 0 {
        p.sign_at_dyadic(&(&x.mant << x.exp as usize), 0)
    } else {
        p.sign_at_dyadic(&x.mant, (-x.exp) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn golden_ratio_to_200_bits() {
        let mut root = AlgebraicRoot::isolate(IntPoly::from_i64(&[1, -1, -1]), &1.into(), &2.into()).unwrap();
        root.refine_bits(200).unwrap();
        let e = root.enclosure();
        assert!(e.width() <= BigRational::new(BigInt::one(), BigInt::one() << 200));
        // (2x - 1)^2 = 5 at φ
        let sq = |x: &BigRational| {
            let t = x * BigInt::from(2) - BigRational::one();
            &t * &t
        };
        assert!(sq(&e.lo) < r(5, 1) && r(5, 1) < sq(&e.hi));
    }

    #[test]
    fn exact_rational_root() {
        let mut root = AlgebraicRoot::isolate(IntPoly::from_i64(&[1, -2]), &1.into(), &3.into()).unwrap();
        root.refine_bits(50).unwrap();
        assert_eq!(root.exact_value(), Some(&r(2, 1)));
        let mut half = AlgebraicRoot::isolate(IntPoly::from_i64(&[4, -3]), &0.into(), &1.into()).unwrap();
        half.refine_bits(60).unwrap();
        assert_eq!(half.exact_value(), Some(&r(3, 4)));
    }

    #[test]
    fn refinement_nests() {
        let p = IntPoly::from_i64(&[1, -1, 0, -1, 0, -1]);
        let mut root = AlgebraicRoot::isolate(p, &1.into(), &2.into()).unwrap();
        root.refine_bits(40).unwrap();
        let coarse = root.enclosure();
        root.refine_bits(50).unwrap();
        assert!(coarse.contains_enclosure(&root.enclosure()));
    }

    #[test]
    fn root_membership_by_gcd() {
        let root = {
            let mut r = AlgebraicRoot::isolate(IntPoly::from_i64(&[1, -1, -1]), &1.into(), &2.into()).unwrap();
            r.refine_bits(10).unwrap();
            r
        };
        // x^3 - 2x^2 + 1 = (x - 1)(x^2 - x - 1)
        assert!(root.is_root_of(&IntPoly::from_i64(&[1, -2, 0, 1])));
        assert!(!root.is_root_of(&IntPoly::from_i64(&[1, 0, -3])));
    }

    #[test]
    fn bits_for_tolerance() {
        assert_eq!(bits_for(&r(1, 1024)).unwrap(), 10);
        assert_eq!(bits_for(&r(1, 1000)).unwrap(), 10);
        assert_eq!(bits_for(&r(1, 1025)).unwrap(), 11);
    }
}
