//! Greedy β-expansions `x_i = ⌊β T^{i-1}(x)⌋` with certified digits.
//!
//! The orbit value `T^k(x)` is carried twice: as an interval evaluated over
//! the β enclosure, and as the exact integer polynomial `v·T^k(x)` in β,
//! where `x = u/v`. Ambiguous floors are settled by asking whether β is a
//! root of the polynomial, and otherwise by refining β.

use super::poly::IntPoly;
use super::root::AlgebraicRoot;
use super::series::SeriesRoot;
use crate::dyadic::Dyadic;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// A β that can be enclosed ever more tightly.
pub trait RefinableBeta {
    fn beta_enclosure(&self) -> Enclosure;
    fn refine_beta_bits(&mut self, bits: u64) -> Result<()>;
    /// Whether β is a root of `q`, when that can be decided exactly.
    fn exact_root_test(&self, q: &IntPoly) -> Option<bool>;
}

impl RefinableBeta for AlgebraicRoot {
    fn beta_enclosure(&self) -> Enclosure {
        self.enclosure()
    }

    fn refine_beta_bits(&mut self, bits: u64) -> Result<()> {
        self.refine_bits(bits)
    }

    fn exact_root_test(&self, q: &IntPoly) -> Option<bool> {
        Some(self.is_root_of(q))
    }
}

impl RefinableBeta for SeriesRoot {
    fn beta_enclosure(&self) -> Enclosure {
        self.beta()
    }

    fn refine_beta_bits(&mut self, bits: u64) -> Result<()> {
        SeriesRoot::refine_beta_bits(self, bits)
    }

    fn exact_root_test(&self, _q: &IntPoly) -> Option<bool> {
        None
    }
}

/// Largest β precision tried before a floor is declared undecidable.
pub const MAX_ORBIT_BITS: u64 = 1 << 16;

/// First digits of `d_β(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyExpansion {
    pub digits: Vec<u32>,
    /// Step `k` at which `T^k(x) = 0`, after which every digit is 0.
    pub terminated_at: Option<usize>,
}

pub(crate) struct OrbitRun {
    pub digits: Vec<u32>,
    /// Enclosures of `T^k(x)` for `k = 1..=n`.
    pub values: Vec<(Dyadic, Dyadic)>,
    /// `v·T^k(x)` as a polynomial in β, `k = 1..=n`.
    pub polys: Vec<IntPoly>,
    pub terminated_at: Option<usize>,
    pub beta: (Dyadic, Dyadic),
    pub scale: BigInt,
}

enum Attempt {
    Done(OrbitRun),
    NeedMore,
}

fn mul_interval(a: &(Dyadic, Dyadic), b: &(Dyadic, Dyadic), prec: u64) -> (Dyadic, Dyadic) {
    let c = [a.0.mul(&b.0), a.0.mul(&b.1), a.1.mul(&b.0), a.1.mul(&b.1)];
    let lo = c.iter().min().unwrap().round_down(prec);
    let hi = c.iter().max().unwrap().round_up(prec);
    (lo, hi)
}

fn times_beta(p: &[BigInt]) -> Vec<BigInt> {
    let mut out = p.to_vec();
    out.push(BigInt::zero());
    out
}

fn attempt(beta: &dyn RefinableBeta, x: &BigRational, n: usize, bits: u64) -> Attempt {
    let prec = bits + 8;
    let enc = beta.beta_enclosure();
    let b = (Dyadic::floor_of(&enc.lo, prec), Dyadic::ceil_of(&enc.hi, prec));
    let u = x.numer().clone();
    let v = x.denom().clone();
    let mut cur = (Dyadic::floor_of(x, prec), Dyadic::ceil_of(x, prec));
    let mut poly: Vec<BigInt> = vec![u.clone()];
    let mut run = OrbitRun {
        digits: Vec::with_capacity(n),
        values: Vec::with_capacity(n),
        polys: Vec::with_capacity(n),
        terminated_at: if u.is_zero() { Some(0) } else { None },
        beta: b.clone(),
        scale: v.clone(),
    };
    for k in 1..=n {
        if run.terminated_at.is_some() {
            run.digits.push(0);
            run.values.push((Dyadic::zero(), Dyadic::zero()));
            run.polys.push(IntPoly::new(vec![BigInt::zero()]));
            continue;
        }
        let j = mul_interval(&b, &cur, prec);
        let shifted = times_beta(&poly);
        let fl = j.0.floor();
        let fh = j.1.floor();
        let digit;
        let mut zero = false;
        if fl == fh && !fl.is_negative() {
            digit = fl;
            if j.0 == Dyadic::from_int(digit.clone()) {
                if j.1 == j.0 {
                    zero = true;
                } else {
                    let mut q = shifted.clone();
                    *q.last_mut().unwrap() -= &v * &digit;
                    zero = beta.exact_root_test(&IntPoly::new(q)) == Some(true);
                }
            }
        } else {
            if &fh - &fl > BigInt::one() || fh.is_negative() {
                return Attempt::NeedMore;
            }
            let mut q = shifted.clone();
            *q.last_mut().unwrap() -= &v * &fh;
            if beta.exact_root_test(&IntPoly::new(q)) == Some(true) {
                digit = fh;
                zero = true;
            } else {
                return Attempt::NeedMore;
            }
        }
        let mut next = shifted;
        *next.last_mut().unwrap() -= &v * &digit;
        poly = next;
        let d = Dyadic::from_int(digit.clone());
        cur = if zero { (Dyadic::zero(), Dyadic::zero()) } else { (j.0.sub(&d), j.1.sub(&d)) };
        run.digits.push(digit.to_u32().expect("digit fits in u32"));
        run.values.push(cur.clone());
        run.polys.push(IntPoly::new(poly.clone()));
        if zero {
            run.terminated_at = Some(k);
        }
    }
    Attempt::Done(run)
}

fn initial_bits(beta: &dyn RefinableBeta, n: usize) -> u64 {
    let hi = beta.beta_enclosure().hi.to_f64().unwrap_or(2.0).max(1.0);
    (n as f64 * hi.log2()).ceil() as u64 + 48
}

pub(crate) fn run_orbit(beta: &mut dyn RefinableBeta, x: &BigRational, n: usize) -> Result<OrbitRun> {
    let bits = initial_bits(beta, n);
    run_orbit_from(beta, x, n, bits)
}

pub(crate) fn run_orbit_from(
    beta: &mut dyn RefinableBeta,
    x: &BigRational,
    n: usize,
    start_bits: u64,
) -> Result<OrbitRun> {
    if x.is_negative() || x > &BigRational::one() {
        return Err(Error::pre("greedy expansion needs x in [0,1]"));
    }
    if beta.beta_enclosure().lo <= BigRational::one() {
        beta.refine_beta_bits(64)?;
        if beta.beta_enclosure().lo <= BigRational::one() {
            return Err(Error::pre("beta must exceed 1"));
        }
    }
    let mut bits = start_bits;
    loop {
        beta.refine_beta_bits(bits)?;
        if let Attempt::Done(run) = attempt(beta, x, n, bits) {
            return Ok(run);
        }
        bits *= 2;
        if bits > MAX_ORBIT_BITS {
            return Err(Error::cert(format!(
                "orbit point indistinguishable from a digit boundary at {MAX_ORBIT_BITS} bits"
            )));
        }
    }
}

/// First `n` digits of the greedy β-expansion of `x ∈ [0,1]`.
pub fn greedy_digits(beta: &mut dyn RefinableBeta, x: &BigRational, n: usize) -> Result<GreedyExpansion> {
    let run = run_orbit(beta, x, n)?;
    Ok(GreedyExpansion { digits: run.digits, terminated_at: run.terminated_at })
}

/// Outcome of the band test `1 − 1/β < T^k(1) < 1` at one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitVerdict {
    /// Strictly inside the band.
    Inside,
    /// The orbit has reached 0.
    Zero,
    /// Exactly on the lower edge.
    Boundary,
    /// Certainly outside the band.
    Outside,
    /// Could not be decided within the refinement budget.
    Undecided,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    /// Verdict for `k = 1..=k_max`.
    pub verdicts: Vec<OrbitVerdict>,
    pub terminated_at: Option<usize>,
}

impl ExtremalReport {
    /// No step lies outside the band or on its edge.
    pub fn holds(&self) -> bool {
        self.verdicts.iter().all(|v| matches!(v, OrbitVerdict::Inside | OrbitVerdict::Zero))
    }
}

fn classify_step(run: &OrbitRun, k: usize, beta: &dyn RefinableBeta) -> OrbitVerdict {
    if run.terminated_at.is_some_and(|t| k >= t) {
        return OrbitVerdict::Zero;
    }
    let (lo, hi) = &run.values[k - 1];
    let one = BigRational::one();
    let lo = lo.to_rational();
    let hi = hi.to_rational();
    let band_hi = &one - run.beta.1.to_rational().recip();
    let band_lo = &one - run.beta.0.to_rational().recip();
    if lo > band_hi && hi < one {
        return OrbitVerdict::Inside;
    }
    if hi < band_lo || lo >= one {
        return OrbitVerdict::Outside;
    }
    // β·(v T^k) − vβ + v = 0 ⟺ T^k(1) = 1 − 1/β
    let mut q = times_beta(run.polys[k - 1].coeffs());
    let len = q.len();
    q[len - 2] -= &run.scale;
    q[len - 1] += &run.scale;
    if beta.exact_root_test(&IntPoly::new(q)) == Some(true) {
        OrbitVerdict::Boundary
    } else {
        OrbitVerdict::Undecided
    }
}

/// Checks `1 − 1/β < T_β^k(1) < 1` for `k = 1..=k_max`, or that the orbit
/// has reached 0.
pub fn extremal_orbit_check(beta: &mut dyn RefinableBeta, k_max: usize) -> Result<ExtremalReport> {
    let one = BigRational::one();
    let mut bits = initial_bits(beta, k_max) + 32;
    loop {
        let run = run_orbit_from(beta, &one, k_max, bits)?;
        let verdicts: Vec<OrbitVerdict> = (1..=k_max).map(|k| classify_step(&run, k, beta)).collect();
        let pending = verdicts.contains(&OrbitVerdict::Undecided);
        if !pending || bits * 2 > MAX_ORBIT_BITS {
            return Ok(ExtremalReport { verdicts, terminated_at: run.terminated_at });
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn root(coeffs: &[i64], lo: i64, hi: i64) -> AlgebraicRoot {
        AlgebraicRoot::isolate(IntPoly::from_i64(coeffs), &lo.into(), &hi.into()).unwrap()
    }

    #[test]
    fn binary_expansion_of_one_third() {
        let mut two = root(&[1, -2], 1, 3);
        let g = greedy_digits(&mut two, &r(1, 3), 4).unwrap();
        assert_eq!(g.digits, vec![0, 1, 0, 1]);
        assert_eq!(g.terminated_at, None);
    }

    #[test]
    fn golden_expansion_of_one_terminates() {
        let mut phi = root(&[1, -1, -1], 1, 2);
        let g = greedy_digits(&mut phi, &r(1, 1), 4).unwrap();
        assert_eq!(g.digits, vec![1, 1, 0, 0]);
        assert_eq!(g.terminated_at, Some(2));
    }

    #[test]
    fn quintic_round_trip() {
        let mut b = root(&[1, -1, 0, -1, 0, -1], 1, 2);
        let g = greedy_digits(&mut b, &r(1, 1), 7).unwrap();
        assert_eq!(g.digits, vec![1, 0, 1, 0, 1, 0, 0]);
        assert_eq!(g.terminated_at, Some(5));
    }

    #[test]
    fn exact_two_expands_one_as_two() {
        let mut two = root(&[1, -2], 1, 3);
        let g = greedy_digits(&mut two, &r(1, 1), 3).unwrap();
        assert_eq!(g.digits, vec![2, 0, 0]);
        assert_eq!(g.terminated_at, Some(1));
    }

    #[test]
    fn golden_orbit_stays_in_band() {
        let mut phi = root(&[1, -1, -1], 1, 2);
        let rep = extremal_orbit_check(&mut phi, 4).unwrap();
        assert_eq!(rep.verdicts[0], OrbitVerdict::Inside);
        assert_eq!(rep.verdicts[1], OrbitVerdict::Zero);
        assert!(rep.holds());
    }

    #[test]
    fn boundary_is_detected_exactly() {
        // β² − 3β + 1 = 0 gives T(1) = β − 2 = 1 − 1/β
        let mut b = root(&[1, -3, 1], 2, 3);
        let rep = extremal_orbit_check(&mut b, 3).unwrap();
        assert_eq!(rep.verdicts[0], OrbitVerdict::Boundary);
        assert!(!rep.holds());
    }
}
