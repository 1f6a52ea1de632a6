//! Regular continued-fraction expansion, distance to the integers and
//! best-approximation checks.

use super::cf::{ContinuedFraction, Quotients};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;

/// Certified leading partial quotients of a real number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CfPrefix {
    #[serde(serialize_with = "crate::ser::display")]
    pub a0: BigInt,
    #[serde(serialize_with = "crate::ser::seq_display")]
    pub terms: Vec<BigInt>,
    /// The expansion ended: the number is exactly `[a0; terms]`.
    pub complete: bool,
}

impl CfPrefix {
    pub fn to_continued_fraction(&self) -> ContinuedFraction {
        let terms = self.terms.iter().map(|t| t.magnitude().clone()).collect::<Vec<BigUint>>();
        ContinuedFraction::new(self.a0.clone(), Quotients::Finite(terms))
    }
}

impl fmt::Display for CfPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "[{}; {}{}]", self.a0, t.join(", "), if self.complete { "" } else { ", ..." })
    }
}

/// Exact Euclid expansion of a rational, at most `n` terms after `a0`.
pub fn cf_expand_rational(x: &BigRational, n: usize) -> CfPrefix {
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let a0 = num.div_floor(&den);
    let mut terms = Vec::new();
    let mut r = num - &a0 * &den;
    num = den;
    den = r;
    while !den.is_zero() && terms.len() < n {
        let (a, rem) = num.div_mod_floor(&den);
        terms.push(a);
        r = rem;
        num = den;
        den = r;
    }
    CfPrefix { a0, terms, complete: den.is_zero() }
}

/// Partial quotients shared by every number in `x`, at most `n` after `a0`.
///
/// Fails only when not even `a0` is determined.
pub fn cf_expand_enclosure(x: &Enclosure, n: usize) -> Result<CfPrefix> {
    if x.is_exact() {
        return Ok(cf_expand_rational(&x.lo, n));
    }
    let floor = |r: &BigRational| r.floor().to_integer();
    let (mut lo, mut hi) = (x.lo.clone(), x.hi.clone());
    let a0 = floor(&lo);
    if floor(&hi) != a0 || hi.is_integer() {
        return Err(Error::cert(format!("integer part of {x} is not determined")));
    }
    let mut terms = Vec::new();
    let mut a = a0.clone();
    while terms.len() < n {
        let rlo = &lo - BigRational::from_integer(a.clone());
        let rhi = &hi - BigRational::from_integer(a.clone());
        if rlo.is_zero() {
            break;
        }
        // x ↦ 1/x reverses the interval
        lo = rhi.recip();
        hi = rlo.recip();
        a = floor(&lo);
        if floor(&hi) != a || (hi.is_integer() && hi != lo) {
            break;
        }
        terms.push(a.clone());
    }
    Ok(CfPrefix { a0, terms, complete: false })
}

/// Like [`cf_expand_enclosure`] but fails unless `n` quotients (or the whole
/// expansion of a rational) are certified.
pub fn cf_expand(x: &Enclosure, n: usize) -> Result<CfPrefix> {
    let p = cf_expand_enclosure(x, n)?;
    if p.terms.len() < n && !(x.is_exact() && p.complete) {
        return Err(Error::cert(format!("only {} of {n} partial quotients are determined by {x}", p.terms.len())));
    }
    Ok(p)
}

/// `‖x‖ = min({x}, 1 − {x})` over an enclosure.
pub fn dist_to_integers(x: &Enclosure) -> Enclosure {
    let half = BigRational::new(1.into(), 2.into());
    let dist = |r: &BigRational| {
        let f = r - r.floor();
        if f > half {
            BigRational::one() - f
        } else {
            f
        }
    };
    let (dl, dh) = (dist(&x.lo), dist(&x.hi));
    let (mut lo, mut hi) = if dl <= dh { (dl.clone(), dh.clone()) } else { (dh.clone(), dl.clone()) };
    let fl = x.lo.floor();
    let width = x.width();
    // an integer inside sends the minimum to 0
    if x.hi.floor() > fl || x.lo.is_integer() || width >= BigRational::one() {
        lo = BigRational::zero();
    }
    // a half-integer inside sends the maximum to 1/2
    let first_half = &fl + &half;
    if (x.lo <= first_half && first_half <= x.hi)
        || width >= BigRational::one()
        || (&first_half + BigRational::one()) <= x.hi
    {
        hi = half.clone();
    }
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    Enclosure::new(lo, hi)
}

/// Outcome of the exhaustive best-approximation test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BestApprox {
    /// `|qt − p| < |bt − a|` for every `a/b ≠ p/q` with `0 < b ≤ q`.
    pub second_kind: bool,
    /// `|t − p/q| < |t − a/b|` for the same range.
    pub first_kind: bool,
}

/// Largest denominator accepted by [`best_approx_check`].
pub const BEST_APPROX_MAX_Q: u64 = 10_000;

fn abs_affine(t: &Enclosure, b: &BigInt, a: &BigInt) -> Enclosure {
    // |b t − a| over the enclosure
    let bi = BigRational::from_integer(b.clone());
    let ai = BigRational::from_integer(a.clone());
    let lo = &t.lo * &bi - &ai;
    let hi = &t.hi * &bi - &ai;
    let abs = |e: BigRational| e.abs();
    if lo.is_negative() && hi.is_positive() {
        Enclosure::new(BigRational::zero(), abs(lo).max(abs(hi)))
    } else {
        let (x, y) = (abs(lo), abs(hi));
        if x <= y {
            Enclosure::new(x, y)
        } else {
            Enclosure::new(y, x)
        }
    }
}

/// `Some(true)` when `x < y` surely, `Some(false)` when `x ≥ y` surely.
fn strictly_less(x: &Enclosure, y: &Enclosure, exact: bool) -> Option<bool> {
    if x.hi < y.lo {
        Some(true)
    } else if x.lo >= y.hi || (exact && x.lo >= y.lo) {
        Some(false)
    } else {
        None
    }
}

/// Checks both best-approximation properties of `p/q` for `t` by exhausting
/// all `a/b` with `0 < b ≤ q`.
pub fn best_approx_check(t: &Enclosure, p: &BigInt, q: u64) -> Result<BestApprox> {
    if q == 0 || q > BEST_APPROX_MAX_Q {
        return Err(Error::pre(format!("q must lie in 1..={BEST_APPROX_MAX_Q}")));
    }
    let qb = BigInt::from(q);
    if !p.gcd(&qb).is_one() {
        return Err(Error::pre(format!("{p}/{q} is not reduced")));
    }
    let exact = t.is_exact();
    let d2 = abs_affine(t, &qb, p);
    let pq = BigRational::new(p.clone(), qb.clone());
    let tp = Enclosure::new(&t.lo - &pq, &t.hi - &pq);
    let d1 = abs_affine(&tp, &BigInt::one(), &BigInt::zero());
    let mut second = true;
    let mut first = true;
    let undecided = || Error::cert(format!("comparison against {p}/{q} undecided at the given enclosure width"));
    for b in 1..=q {
        let bb = BigInt::from(b);
        let bf = BigRational::from_integer(bb.clone());
        // every a outside this window is farther than both targets
        let reach = (&d2.hi + &d1.hi * &bf).ceil().to_integer() + 1;
        let lo = (&t.lo * &bf).floor().to_integer() - &reach;
        let hi = (&t.hi * &bf).ceil().to_integer() + &reach;
        let mut a = lo;
        while a <= hi {
            if &a * &qb != p * &bb {
                if second {
                    match strictly_less(&d2, &abs_affine(t, &bb, &a), exact) {
                        Some(v) => second = v,
                        None => return Err(undecided()),
                    }
                }
                if first {
                    let ab = BigRational::new(a.clone(), bb.clone());
                    let ta = Enclosure::new(&t.lo - &ab, &t.hi - &ab);
                    match strictly_less(&d1, &abs_affine(&ta, &BigInt::one(), &BigInt::zero()), exact) {
                        Some(v) => first = v,
                        None => return Err(undecided()),
                    }
                }
            }
            a += 1;
        }
        if !first && !second {
            break;
        }
    }
    Ok(BestApprox { second_kind: second, first_kind: first })
}

/// Brute-force list of reduced `p/q` with `|t − p/q| < 1/(2q²)`, `q ≤ max_q`.
pub fn close_fractions(t: &BigRational, max_q: u64) -> Vec<BigRational> {
    let mut out = Vec::new();
    for q in 1..=max_q {
        let qb = BigInt::from(q);
        let bound = BigRational::new(BigInt::one(), BigInt::from(2 * q * q));
        let centre = (t * BigRational::from_integer(qb.clone())).round().to_integer();
        for p in [&centre - 1, centre.clone(), &centre + 1] {
            if !p.gcd(&qb).is_one() {
                continue;
            }
            let x = BigRational::new(p, qb.clone());
            if (t - &x).abs() < bound {
                out.push(x);
            }
        }
    }
    out
}

/// Convergents `p_n/q_n` of a certified prefix, as exact fractions.
pub fn prefix_convergents(prefix: &CfPrefix) -> Vec<BigRational> {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (prefix.a0.clone(), BigInt::one());
    let mut out = vec![BigRational::new(p1.clone(), q1.clone())];
    for a in &prefix.terms {
        let p = a * &p1 + &p0;
        let q = a * &q1 + &q0;
        out.push(BigRational::new(p.clone(), q.clone()));
        p0 = std::mem::replace(&mut p1, p);
        q0 = std::mem::replace(&mut q1, q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn euclid() {
        let p = cf_expand_rational(&r(355, 113), 10);
        assert_eq!((p.a0.clone(), p.terms.clone(), p.complete), (3.into(), ints(&[7, 16]), true));
        let h = cf_expand_rational(&r(1, 2), 10);
        assert_eq!(h.to_string(), "[0; 2]");
        assert_eq!(cf_expand_rational(&r(-7, 3), 10).a0, BigInt::from(-3));
    }

    #[test]
    fn sqrt2_enclosure() {
        // 1.41421356237 ≤ √2 ≤ 1.41421356238
        let e = Enclosure::new(r(141421356237, 100000000000), r(141421356238, 100000000000));
        let p = cf_expand_enclosure(&e, 30).unwrap();
        assert_eq!(p.a0, BigInt::one());
        assert!(p.terms.len() >= 10 && p.terms.iter().all(|t| *t == BigInt::from(2)));
        assert!(cf_expand(&e, 40).is_err());
    }

    #[test]
    fn distance() {
        assert_eq!(dist_to_integers(&Enclosure::exact(r(2, 5))), Enclosure::exact(r(2, 5)));
        assert_eq!(dist_to_integers(&Enclosure::exact(r(27, 10))), Enclosure::exact(r(3, 10)));
        let s = dist_to_integers(&Enclosure::new(r(19, 10), r(21, 10)));
        assert_eq!(s, Enclosure::new(r(0, 1), r(1, 10)));
        let m = dist_to_integers(&Enclosure::new(r(4, 10), r(7, 10)));
        assert_eq!(m, Enclosure::new(r(3, 10), r(1, 2)));
    }

    #[test]
    fn best_approximations_of_sqrt2() {
        let e = Enclosure::new(r(141421356237, 100000000000), r(141421356238, 100000000000));
        assert!(best_approx_check(&e, &3.into(), 2).unwrap().second_kind);
        assert!(!best_approx_check(&e, &4.into(), 3).unwrap().second_kind);
        assert!(best_approx_check(&e, &7.into(), 5).unwrap().second_kind);
        let third = Enclosure::exact(r(1, 3));
        let b = best_approx_check(&third, &1.into(), 3).unwrap();
        assert!(b.second_kind && b.first_kind);
    }

    #[test]
    fn close_fractions_are_convergents() {
        let t = r(1_000_003, 707_107);
        let conv = prefix_convergents(&cf_expand_rational(&t, 100));
        for x in close_fractions(&t, 200) {
            assert!(conv.contains(&x), "{x}");
        }
    }
}
