//! Difference quotients of `Δ` near a point, and the explicit lower bound
//! on `|Δ(α) − Δ(α_N)|` in terms of a shared prefix of expansions.
//!
//! Verdicts are trend labels over a finite window of probes. They
//! describe what the computed quotients do and say nothing about limits.

use crate::beta::d_beta_one_minus;
use crate::diophantine::ContinuedFraction;
use crate::enclosure::{simplest_between, Enclosure};
use crate::error::{Error, Result};
use crate::staircase::{
    delta, delta_irrational, delta_rational, delta_right_limit, separate, split_slope, DeltaResult,
};
use crate::words::{common_prefix_radius, RadiusSide, Slope};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// Number of trailing probes a verdict is read from.
pub const TREND_WINDOW: usize = 5;

/// Largest probe denominator evaluated; larger probes end the trace.
pub const MAX_PROBE_DEN: u64 = 4096;

/// How far the expansions of 1 are compared in [`lowerbound_check`].
pub const LOWERBOUND_PREFIX_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    TowardZero,
    TowardInfinity,
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::TowardZero => "toward_zero",
            Verdict::TowardInfinity => "toward_infinity",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    Left,
    Right,
    ZeroPlus,
    Irrational,
}

/// One probe slope and the enclosure of its difference quotient.
#[derive(Debug, Clone, Serialize)]
pub struct ProbePoint {
    pub k: usize,
    /// Ladder index `N`, the denominator `q` for zero probes, or the
    /// convergent denominator `q_i` for irrational probes.
    pub scale: u64,
    #[serde(serialize_with = "crate::ser::display")]
    pub alpha: BigRational,
    pub quotient: Enclosure,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientTrace {
    pub center: Slope,
    pub kind: ProbeKind,
    pub probes: Vec<ProbePoint>,
    pub verdict: Verdict,
    pub window: usize,
    /// Why the trace has fewer probes than requested, if it does.
    pub stopped: Option<String>,
}

impl QuotientTrace {
    fn new(center: Slope, kind: ProbeKind, probes: Vec<ProbePoint>, stopped: Option<String>) -> Self {
        let q: Vec<Enclosure> = probes.iter().map(|p| p.quotient.clone()).collect();
        let verdict = trend_verdict(&q, TREND_WINDOW);
        QuotientTrace { center, kind, probes, verdict, window: TREND_WINDOW, stopped }
    }

    /// Rows `k, alpha_k_num, alpha_k_den, quotient_lo, quotient_hi`.
    pub fn csv_rows(&self, digits: usize) -> Vec<[String; 5]> {
        self.probes
            .iter()
            .map(|p| {
                [
                    p.k.to_string(),
                    p.alpha.numer().to_string(),
                    p.alpha.denom().to_string(),
                    p.quotient.lo_decimal(digits),
                    p.quotient.hi_decimal(digits),
                ]
            })
            .collect()
    }
}

/// `toward_zero` when the last `window` enclosures certainly decrease
/// strictly, `toward_infinity` when they certainly increase strictly.
pub fn trend_verdict(quotients: &[Enclosure], window: usize) -> Verdict {
    if window < 2 || quotients.len() < window {
        return Verdict::Inconclusive;
    }
    let tail = &quotients[quotients.len() - window..];
    if tail.windows(2).all(|w| w[1].hi < w[0].lo) {
        Verdict::TowardZero
    } else if tail.windows(2).all(|w| w[1].lo > w[0].hi) {
        Verdict::TowardInfinity
    } else {
        Verdict::Inconclusive
    }
}

/// `(upper − lower) / dist`, with both values refined until the
/// difference is positive and known to about six digits.
fn certified_quotient(lower: &mut DeltaResult, upper: &mut DeltaResult, dist: &Enclosure) -> Result<Enclosure> {
    separate(lower, upper)?;
    let million = BigInt::from(1_000_000u32);
    for _ in 0..8 {
        let diff = upper.beta.sub(&lower.beta);
        if diff.width() * &million <= diff.lo {
            break;
        }
        let tol = &diff.lo / BigInt::from(1_000_000_000u64);
        lower.refine(&tol)?;
        upper.refine(&tol)?;
    }
    Ok(upper.beta.sub(&lower.beta).div_pos(dist))
}

fn denominator_ok(x: &BigRational) -> bool {
    x.denom().to_u64().is_some_and(|d| d <= MAX_PROBE_DEN)
}

/// Offset from `α₀` inside the ladder interval `((2qN)^{-1}, δ_N)`.
fn ladder_offset(alpha0: &BigRational, q: i64, n: usize, side: RadiusSide) -> Result<BigRational> {
    let radius = common_prefix_radius(&Slope::Rational(alpha0.clone()), n, side)?;
    let inner = BigRational::new(BigInt::one(), BigInt::from(2 * q) * BigInt::from(n));
    if radius.lo <= inner {
        return Err(Error::cert(format!("ladder interval at N = {n} is empty")));
    }
    Ok(simplest_between(&inner, &radius.lo))
}

fn check_count(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::pre("at least 3 probes are needed"));
    }
    Ok(())
}

/// Runs the probes in parallel, keeping the longest prefix that succeeded.
fn collect<F>(count: usize, f: F) -> (Vec<ProbePoint>, Option<String>)
where
    F: Fn(usize) -> Result<ProbePoint> + Sync,
{
    let results: Vec<Result<ProbePoint>> = (1..=count).into_par_iter().map(&f).collect();
    let mut out = Vec::new();
    for r in results {
        match r {
            Ok(p) => out.push(p),
            Err(e) => return (out, Some(e.to_string())),
        }
    }
    (out, None)
}

fn one_sided(alpha0: &BigRational, count: usize, tol: &BigRational, side: RadiusSide) -> Result<QuotientTrace> {
    check_count(count)?;
    let (_, _, q) = split_slope(alpha0)?;
    let center = match side {
        RadiusSide::Below => delta_rational(alpha0, tol)?,
        _ => delta_right_limit(alpha0, tol)?,
    };
    let (probes, stopped) = collect(count, |k| {
        let n = (k + 1) * q as usize;
        let off = ladder_offset(alpha0, q, n, side)?;
        let alpha = match side {
            RadiusSide::Below => alpha0 - &off,
            _ => alpha0 + &off,
        };
        if !denominator_ok(&alpha) {
            return Err(Error::cert(format!("probe {alpha} exceeds the denominator limit {MAX_PROBE_DEN}")));
        }
        let mut c = center.clone();
        let mut d = delta_rational(&alpha, tol)?;
        let dist = Enclosure::exact(off);
        let quotient = match side {
            RadiusSide::Below => certified_quotient(&mut d, &mut c, &dist)?,
            _ => certified_quotient(&mut c, &mut d, &dist)?,
        };
        Ok(ProbePoint { k, scale: n as u64, alpha, quotient })
    });
    let kind = if side == RadiusSide::Below { ProbeKind::Left } else { ProbeKind::Right };
    Ok(QuotientTrace::new(Slope::Rational(alpha0.clone()), kind, probes, stopped))
}

/// Quotients `(Δ(α₀) − Δ(α)) / (α₀ − α)` for `α` below `α₀`.
///
/// Probe `k` uses the ladder index `N = (k+1)q` and the simplest slope
/// with `(2qN)^{-1} < α₀ − α < δ_N`, where `δ_N` is the one-sided radius
/// keeping a common prefix of length `N`.
pub fn rational_left_quotients(alpha0: &BigRational, count: usize, tol: &BigRational) -> Result<QuotientTrace> {
    one_sided(alpha0, count, tol, RadiusSide::Below)
}

/// Quotients `(Δ(α) − Δ(α₀+)) / (α − α₀)` for `α` above `α₀`, on the
/// mirrored ladder.
pub fn rational_right_quotients(alpha0: &BigRational, count: usize, tol: &BigRational) -> Result<QuotientTrace> {
    one_sided(alpha0, count, tol, RadiusSide::Above)
}

/// Quotients `(Δ(1/q) − 1) q` for `q = 2, …, count + 1`.
pub fn zero_plus_quotients(count: usize, tol: &BigRational) -> Result<QuotientTrace> {
    check_count(count)?;
    let zero = BigRational::zero();
    let center = delta_rational(&zero, tol)?;
    let (probes, stopped) = collect(count, |k| {
        let q = k as u64 + 1;
        let alpha = BigRational::new(BigInt::one(), BigInt::from(q));
        let mut c = center.clone();
        let mut d = delta_rational(&alpha, tol)?;
        let quotient = certified_quotient(&mut c, &mut d, &Enclosure::exact(alpha.clone()))?;
        Ok(ProbePoint { k, scale: q, alpha, quotient })
    });
    Ok(QuotientTrace::new(Slope::Rational(zero), ProbeKind::ZeroPlus, probes, stopped))
}

/// An enclosure of `α₀` from a convergent index past `from` that lies
/// strictly on one side of `x` and makes `accept` true.
fn alpha_enclosure<F>(cf: &ContinuedFraction, from: usize, x: &BigRational, accept: F) -> Result<Enclosure>
where
    F: Fn(&Enclosure) -> bool,
{
    for k in from..from + 64 {
        let e = cf.open_enclosure(k)?;
        if !e.contains(x) && accept(&e) {
            return Ok(e);
        }
    }
    Err(Error::cert("could not enclose the slope tightly enough"))
}

fn distance(e: &Enclosure, x: &BigRational) -> Enclosure {
    if x < &e.lo {
        Enclosure::new(&e.lo - x, &e.hi - x)
    } else {
        Enclosure::new(x - &e.hi, x - &e.lo)
    }
}

/// Quotients `|Δ(α_i) − Δ(α₀)| / |α_i − α₀|` at an irrational `α₀`.
///
/// With convergents `p_i/q_i` and `δ_n = min_{m ≤ n} ‖mα₀‖/m`, the probe is
/// `p_i/q_i` itself when it lies below `α₀`. Above `α₀` it is the simplest
/// slope in `(p_i/q_i, α₀ + min{(δ_{q_i} + δ_{q_i−1})/2, 2δ_{q_i}})`.
/// Every convergent used must be exact.
pub fn irrational_probe(cf: Arc<ContinuedFraction>, count: usize, tol: &BigRational) -> Result<QuotientTrace> {
    check_count(count)?;
    let center = delta_irrational(cf.clone(), tol)?;
    let mut indices = Vec::new();
    let mut i = 1;
    while indices.len() < count {
        let (Some(prev), Some(cur)) = (cf.convergent(i - 1)?, cf.convergent(i)?) else {
            return Err(Error::pre("continued fraction ends before the requested probes"));
        };
        let (Some(q0), Some(q1)) = (prev.q.as_exact(), cur.q.as_exact()) else {
            return Err(Error::unrep(format!("q_{i} is only known in log space; probes need exact convergents")));
        };
        if q1 > q0 {
            indices.push(i);
        }
        i += 1;
    }
    let (probes, stopped) = collect(count, |k| {
        let i = indices[k - 1];
        let cur = cf.convergent(i)?.expect("checked above");
        let prev = cf.convergent(i - 1)?.expect("checked above");
        let c = cur.fraction().ok_or_else(|| Error::unrep(format!("p_{i} is not exact")))?;
        let q_i = cur.q.as_exact().and_then(|q| q.to_u64()).unwrap_or(u64::MAX);
        let (alpha, enc) = if i % 2 == 0 {
            // p_i/q_i < α₀
            (c.clone(), alpha_enclosure(&cf, i + 2, &c, |_| true)?)
        } else {
            let c0 = prev.fraction().ok_or_else(|| Error::unrep(format!("p_{} is not exact", i - 1)))?;
            let (pp, qq) = (c.numer() - c0.numer(), c.denom() - c0.denom());
            let semi = BigRational::new(pp, qq);
            let bound = |e: &Enclosure| {
                let d_i = &c - &e.hi;
                let d_prev = (&e.lo - &c0).min(&semi - &e.hi);
                let half = (&d_i + &d_prev) / BigInt::from(2);
                let twice = &d_i * BigInt::from(2);
                &e.lo + half.min(twice)
            };
            let enc = alpha_enclosure(&cf, i + 2, &c, |e| bound(e) > c)?;
            (simplest_between(&c, &bound(&enc)), enc)
        };
        if !denominator_ok(&alpha) {
            return Err(Error::cert(format!("probe {alpha} exceeds the denominator limit {MAX_PROBE_DEN}")));
        }
        let dist = distance(&enc, &alpha);
        let mut c0 = center.clone();
        let mut d = delta_rational(&alpha, tol)?;
        let quotient = if alpha < enc.lo {
            certified_quotient(&mut d, &mut c0, &dist)?
        } else {
            certified_quotient(&mut c0, &mut d, &dist)?
        };
        Ok(ProbePoint { k, scale: q_i, alpha, quotient })
    });
    Ok(QuotientTrace::new(Slope::Irrational(cf), ProbeKind::Irrational, probes, stopped))
}

/// Outcome of [`lowerbound_check`].
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundReport {
    /// Index of the first differing letter of `d_β(1−)` and `d_{β_N}(1−)`.
    pub n: usize,
    /// Whether `Δ(α) > Δ(α_N)`, which selects the base of the power.
    pub alpha_above: bool,
    pub b: u32,
    /// `|β − β_N|`.
    pub lhs: Enclosure,
    /// `(β − 1)(β_N − 1) / (b N γ^N)` with `γ = max(β, β_N)`.
    pub rhs: Enclosure,
    pub holds: bool,
}

/// Checks `β − β_N > (β−1)(β_N−1)/(bNβ^N)`, or its mirror with `β_N^N`
/// when `α < α_N`, where `N` is the first position at which `d_β(1−)` and
/// `d_{β_N}(1−)` differ and `b = ⌈α⌉`.
pub fn lowerbound_check(alpha: &Slope, alpha_n: &Slope, tol: &BigRational) -> Result<LowerBoundReport> {
    if !matches!(alpha, Slope::Irrational(_)) && !alpha.as_rational().is_some_and(|r| r.is_positive()) {
        return Err(Error::pre("slope must be positive"));
    }
    let mut d = delta(alpha, tol)?;
    let mut d_n = delta(alpha_n, tol)?;
    let w = d_beta_one_minus(&d.expansion)?.prefix(LOWERBOUND_PREFIX_LIMIT)?;
    let w_n = d_beta_one_minus(&d_n.expansion)?.prefix(LOWERBOUND_PREFIX_LIMIT)?;
    let j = w
        .as_slice()
        .iter()
        .zip(w_n.as_slice())
        .position(|(a, b)| a != b)
        .ok_or_else(|| Error::pre(format!("expansions agree on the first {LOWERBOUND_PREFIX_LIMIT} letters")))?;
    let n = j + 1;
    let alpha_above = w.as_slice()[j] > w_n.as_slice()[j];
    let b = alpha.ceil().to_u32().ok_or_else(|| Error::unrep("slope is too large"))?;
    let one = Enclosure::from_integer(1);
    let scale = BigRational::from_integer(BigInt::from(b) * BigInt::from(n));
    let mut last = None;
    for _ in 0..8 {
        let (lhs, base) =
            if alpha_above { (d.beta.sub(&d_n.beta), &d.beta) } else { (d_n.beta.sub(&d.beta), &d_n.beta) };
        let num = d.beta.sub(&one).mul_nonneg(&d_n.beta.sub(&one));
        let den = base.pow_nonneg(n).mul_nonneg(&Enclosure::exact(scale.clone()));
        let rhs = num.div_pos(&den);
        if lhs.lo > rhs.hi || lhs.hi <= rhs.lo {
            let holds = lhs.lo > rhs.hi;
            return Ok(LowerBoundReport { n, alpha_above, b, lhs, rhs, holds });
        }
        let tol =
            (&rhs.lo / BigInt::from(1_000_000u32)).max(BigRational::new(BigInt::one(), BigInt::one() << 4096usize));
        d.refine(&tol)?;
        d_n.refine(&tol)?;
        last = Some((lhs, rhs));
    }
    let (lhs, rhs) = last.expect("loop ran");
    Err(Error::cert(format!("could not decide {lhs} against {rhs}")))
}
