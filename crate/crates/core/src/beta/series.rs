//! Roots of `1 = Σ_{n≥1} d_n x^n` for infinite digit streams.
//!
//! Truncating after `m` digits gives a polynomial root `ζ_m ≥ ζ`, and the
//! tail bound `|ζ_m − ζ| ≤ M(ζ^{m+1}/(1−ζ) + ζ_m^{m+1}/(1−ζ_m))` closes the
//! gap from below. Both ζ and ζ_m are at most `h = sup ζ_m`, so the bound is
//! evaluated as `2M h^{m+1} / (1−h)`.

use super::poly::IntPoly;
use super::root::{bits_for, AlgebraicRoot};
use crate::dyadic::Dyadic;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::words::{mechanical_prefix, EventuallyPeriodicWord, Kind, Slope};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Supplies digit prefixes of an infinite stream on demand.
pub trait DigitSource: Send + Sync + fmt::Debug {
    fn prefix(&self, n: usize) -> Result<Vec<u32>>;
}

/// A finite digit string followed by zeros.
#[derive(Debug, Clone)]
pub struct PaddedDigits(pub Vec<u32>);

impl DigitSource for PaddedDigits {
    fn prefix(&self, n: usize) -> Result<Vec<u32>> {
        Ok((0..n).map(|i| self.0.get(i).copied().unwrap_or(0)).collect())
    }
}

impl DigitSource for EventuallyPeriodicWord {
    fn prefix(&self, n: usize) -> Result<Vec<u32>> {
        Ok(EventuallyPeriodicWord::prefix(self, n).letters)
    }
}

/// The upper mechanical word `s'_{α,0}` of a slope, which reads `⌈α⌉ c_α`.
#[derive(Debug, Clone)]
pub struct UpperMechanicalDigits(pub Slope);

impl DigitSource for UpperMechanicalDigits {
    fn prefix(&self, n: usize) -> Result<Vec<u32>> {
        Ok(mechanical_prefix(&self.0, &BigRational::zero(), n, Kind::Upper)?.letters)
    }
}

/// One truncation of the series root computation.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationStep {
    pub m: usize,
    /// Root of the truncated polynomial, as an enclosure of `ζ_m`.
    pub zeta_m: Enclosure,
    /// Interval `[ζ_m − bound, ζ_m]` that must contain `ζ`.
    pub raw: Enclosure,
}

/// Certified root of an infinite digit series.
#[derive(Debug, Clone)]
pub struct SeriesRoot {
    source: Arc<dyn DigitSource>,
    digit_bound: u32,
    start_m: usize,
    max_m: usize,
    /// Enclosure of `ζ`, the intersection of all raw truncation enclosures.
    pub zeta: Enclosure,
    pub trace: Vec<TruncationStep>,
}

/// Default cap on the truncation length.
pub const DEFAULT_MAX_TRUNCATION: usize = 1 << 14;

fn pow_round_up(x: &Dyadic, e: usize, prec: u64) -> Dyadic {
    let mut result = Dyadic::from_int(1);
    let mut base = x.round_up(prec);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base).round_up(prec);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base).round_up(prec);
        }
    }
    result
}

fn truncation(source: &dyn DigitSource, m: usize, bound: u32, bits: u64) -> Result<TruncationStep> {
    let digits = source.prefix(m)?;
    match digits.first() {
        Some(&d) if d >= 1 => {}
        _ => return Err(Error::pre("series digit stream must start with a digit >= 1")),
    }
    if let Some(&d) = digits.iter().find(|&&d| d > bound) {
        return Err(Error::pre(format!("digit {d} exceeds the bound {bound}")));
    }
    let last = digits.iter().rposition(|&d| d != 0).unwrap();
    if last == 0 && digits[0] == 1 {
        // prefix 10...0: the truncated root is 1; only the tail moves it
        return Err(Error::cert(format!("truncation {m} is still 10^m")));
    }
    let poly = IntPoly::parry(&digits[..=last]);
    let lo = BigInt::from(digits[0]);
    let mut root = AlgebraicRoot::isolate(poly, &lo, &BigInt::from(bound + 1))?;
    root.refine_bits(bits + 2)?;
    let zeta_m = root.enclosure().recip();
    let prec = bits + 16;
    let h = Dyadic::ceil_of(&zeta_m.hi, prec);
    if h >= Dyadic::from_int(1) {
        return Err(Error::cert("truncated root not separated from 1"));
    }
    let hp = pow_round_up(&h, m + 1, prec).to_rational();
    let one_minus_h = BigRational::one() - h.to_rational();
    let tail = hp * BigInt::from(2 * bound as u64) / one_minus_h;
    let raw = Enclosure::new(&zeta_m.lo - &tail, zeta_m.hi.clone());
    Ok(TruncationStep { m, zeta_m, raw })
}

/// Encloses the root `ζ ∈ (0,1)` of `1 = Σ d_n ζ^n` to width `tol`.
///
/// Truncations start at `m` and double until the width is reached or
/// `max_m` is exceeded.
pub fn positive_root_series(
    source: Arc<dyn DigitSource>,
    m: usize,
    digit_bound: u32,
    tol: &BigRational,
    max_m: usize,
) -> Result<SeriesRoot> {
    let mut s = SeriesRoot {
        source,
        digit_bound,
        start_m: m.max(1),
        max_m,
        zeta: Enclosure::new(BigRational::zero(), BigRational::one()),
        trace: Vec::new(),
    };
    s.refine(tol)?;
    Ok(s)
}

impl SeriesRoot {
    pub fn digit_bound(&self) -> u32 {
        self.digit_bound
    }

    pub fn source(&self) -> &Arc<dyn DigitSource> {
        &self.source
    }

    /// `β = 1/ζ`.
    pub fn beta(&self) -> Enclosure {
        self.zeta.recip()
    }

    /// Shrinks the enclosure of `ζ` to width at most `tol`.
    pub fn refine(&mut self, tol: &BigRational) -> Result<()> {
        let bits = bits_for(tol)?;
        let mut m = self.trace.last().map_or(self.start_m, |t| t.m * 2);
        if self.zeta.width() <= *tol {
            return Ok(());
        }
        loop {
            if m > self.max_m {
                return Err(Error::cert(format!(
                    "series root reached width {} at truncation {}, above the requested tolerance",
                    self.zeta.width(),
                    self.max_m
                )));
            }
            match truncation(self.source.as_ref(), m, self.digit_bound, bits + 2) {
                Ok(step) => {
                    self.zeta =
                        self.zeta.intersect(&step.raw).ok_or_else(|| Error::cert("series enclosures are disjoint"))?;
                    self.trace.push(step);
                    let zm = &self.trace.last().unwrap().zeta_m;
                    if self.zeta.width() <= *tol && zm.width() * BigInt::from(4) <= *tol {
                        return Ok(());
                    }
                }
                Err(Error::Certification(_)) if m < self.max_m => {}
                Err(e) => return Err(e),
            }
            m *= 2;
        }
    }

    /// Refines `β = 1/ζ` to width at most `2^{-bits}`.
    pub fn refine_beta_bits(&mut self, bits: u64) -> Result<()> {
        // width(β) <= width(ζ) · (M+1)^2
        let scale = 2 * (64 - ((self.digit_bound as u64 + 1).leading_zeros() as u64)) + 1;
        let tol = BigRational::new(BigInt::one(), BigInt::one() << (bits + scale) as usize);
        self.refine(&tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(bits: usize) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << bits)
    }

    #[test]
    fn geometric_series_gives_one_half() {
        let ones = EventuallyPeriodicWord::purely_periodic(vec![1]).unwrap();
        let s = positive_root_series(Arc::new(ones), 32, 1, &tol(40), DEFAULT_MAX_TRUNCATION).unwrap();
        assert!(s.zeta.contains(&BigRational::new(1.into(), 2.into())));
        assert!(s.zeta.width() <= tol(40));
    }

    #[test]
    fn padded_finite_stream_matches_finite_root() {
        let s = positive_root_series(Arc::new(PaddedDigits(vec![2])), 32, 2, &tol(40), 64).unwrap();
        assert!(s.zeta.contains(&BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn truncations_nest() {
        let golden = Slope::Irrational(Arc::new(crate::diophantine::ContinuedFraction::golden()));
        let s = positive_root_series(Arc::new(UpperMechanicalDigits(golden)), 60, 1, &tol(45), 2000).unwrap();
        for w in s.trace.windows(2) {
            assert!(w[0].raw.contains_enclosure(&w[1].raw), "m={} then m={}", w[0].m, w[1].m);
        }
    }

    #[test]
    fn rounding_up_power_is_an_upper_bound() {
        let x = Dyadic::new(BigInt::from(3), -2);
        let p = pow_round_up(&x, 10, 8).to_rational();
        let exact = BigRational::new(BigInt::from(3u64.pow(10)), BigInt::from(4u64.pow(10)));
        assert!(p >= exact);
    }
}
