//! Named Liouville constructions and a few classical constants.
//!
//! | name | definition |
//! |---|---|
//! | `alpha1[:B]` | `Σ_{k≥1} B^{−k!}` |
//! | `alpha2[:B]` | `[1; EXP_1(B), EXP_2(B), …]` |
//! | `alpha3[:B]` | `[0; B, B!, (B!)!, …]` |
//! | `alpha4[:B]` | `Σ_{k≥1} 1/EXP_k(B)` |
//! | `alpha5[:β]`, `targeted:β` | `a_n = ⌊β^{q_{n−1}}/q_{n−1}⌋` |
//! | `alpha6` | `[0; EXP_1(1), EXP_2(2), EXP_3(3), …]` |
//! | `alpha7` | `Σ_{n≥1} 1/EXP_{2^n}(2^n)` |
//!
//! `B` defaults to 10 and `β` to 2.

use super::cf::{ContinuedFraction, Quotients};
use super::expand::cf_expand_enclosure;
use super::magnitude::{Magnitude, DEFAULT_BIT_BUDGET};
use super::measures::{
    classify_cf, classify_estimates, mu_estimate, mu_from_samples, theta_estimate, theta_from_samples, ClassifyReport,
    LogScale, MeasureEstimate, Sample, Thresholds,
};
use crate::enclosure::{parse_rational, Enclosure};
use crate::error::{Error, Result};
use crate::interval::Interval;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::sync::Arc;

/// Infinite series whose partial-sum denominators are known good
/// approximations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeriesPreset {
    /// `Σ B^{−k!}`, `s_m = B^{m!}`.
    Factorial { base: u32 },
    /// `Σ 1/EXP_k(B)`, `s_m = EXP_m(B)`.
    Tower { base: u32 },
    /// `Σ 1/EXP_{2^n}(2^n)`, `s_m = EXP_{2^m}(2^m)`.
    DoubleTower,
}

fn factorial_u64(m: usize) -> Option<u64> {
    (1..=m as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

fn factorial_iv(m: usize) -> Interval {
    (1..=m).fold(Interval::point(1.0), |acc, k| acc * Interval::point(k as f64))
}

/// `−ln ‖f‖` given `lf = −ln f` for `0 < f < 1`.
fn minus_log_dist(lf: Interval) -> Interval {
    if lf.lo > Interval::ln2().hi {
        return lf;
    }
    let f = (-lf).exp();
    let (a, b) = (f.lo, f.hi.min(1.0));
    let tent = |x: f64| if x <= 0.5 { Interval::point(x) } else { Interval::point(1.0) - Interval::point(x) };
    let lo = tent(a).lo.min(tent(b).lo);
    let hi = if a <= 0.5 && b >= 0.5 { 0.5 } else { tent(a).hi.max(tent(b).hi) };
    -Interval::new(lo, hi).ln()
}

impl SeriesPreset {
    fn denominator(&self, m: usize) -> Result<Magnitude> {
        match *self {
            SeriesPreset::Factorial { base } => {
                let b = BigUint::from(base);
                match factorial_u64(m) {
                    Some(e) => Magnitude::pow(&b, &Magnitude::exact(e), DEFAULT_BIT_BUDGET),
                    None => Magnitude::from_ln(factorial_iv(m) * Interval::from_biguint(&b).ln()),
                }
            }
            SeriesPreset::Tower { base } => Magnitude::tower(&BigUint::from(base), m, DEFAULT_BIT_BUDGET),
            SeriesPreset::DoubleTower => {
                let k =
                    1usize.checked_shl(m as u32).filter(|&k| k <= 64).ok_or_else(|| Error::unrep("tower height"))?;
                Magnitude::tower(&BigUint::from(k), k, DEFAULT_BIT_BUDGET)
            }
        }
    }

    /// Sample `m ≥ 1`: the denominator `s_m` and `−ln ‖s_m α‖`.
    ///
    /// `s_m α ≡ (s_m/s_{m+1})(1 + ε) mod 1`, where `0 ≤ ε ≤ 2 s_{m+1}/s_{m+2}`.
    pub fn sample(&self, m: usize) -> Result<Sample> {
        let q = self.denominator(m)?;
        let minus_log_dist = match *self {
            SeriesPreset::Factorial { base } => {
                let lb = Interval::from_biguint(&BigUint::from(base)).ln();
                let gap = factorial_iv(m) * Interval::point(m as f64) * lb;
                // ε ≤ 2 B^{(m+1)! − (m+2)!}
                let next_gap = factorial_iv(m + 1) * Interval::point((m + 1) as f64) * lb;
                let eps = (Interval::ln2() - next_gap).exp();
                let lf = gap - Interval::new(0.0, eps.hi);
                if !lf.is_finite() {
                    return Err(Error::unrep(format!("sample {m} overflows")));
                }
                LogScale::Value(minus_log_dist(lf))
            }
            SeriesPreset::Tower { .. } | SeriesPreset::DoubleTower => {
                let next = self.denominator(m + 1)?;
                let ln_q = q.ln_required()?;
                // ε ≤ 2 x / 2^x with x = s_{m+1}, since s_{m+2} ≥ 2^{s_{m+1}}
                let eps_hi = match (next.ln(), next.value()) {
                    (Some(l), Some(v)) => (Interval::ln2() + l - v * Interval::ln2()).exp().hi,
                    _ => f64::MIN_POSITIVE,
                };
                let tail = Interval::new(0.0, eps_hi);
                match (q.value(), next.ln()) {
                    (Some(_), Some(ln_next)) if (ln_next - ln_q - tail).is_finite() => {
                        LogScale::Value(minus_log_dist(ln_next - ln_q - tail))
                    }
                    _ => match *self {
                        // ln s_{m+1} = s_m ln B, so L/s_m = ln B − (ln s_m + δ)/s_m
                        SeriesPreset::Tower { base } => {
                            let lb = Interval::from_biguint(&BigUint::from(base)).ln();
                            LogScale::PerQ(lb - (ln_q + tail) * (-ln_q).exp())
                        }
                        _ => return Err(Error::unrep(format!("sample {m} is beyond the log range"))),
                    },
                }
            }
        };
        Ok(Sample { index: m, q, minus_log_dist })
    }

    /// Samples `1..=count`, stopping at the first unrepresentable one.
    pub fn samples(&self, count: usize) -> Vec<Sample> {
        (1..=count).map_while(|m| self.sample(m).ok()).collect()
    }

    /// Enclosure of the value from the first `m` terms and a tail bound.
    pub fn partial_sum(&self, m: usize) -> Result<Enclosure> {
        match *self {
            SeriesPreset::Factorial { base } => {
                let b = BigInt::from(base);
                let mut sum = BigRational::zero();
                for k in 1..=m {
                    let e = factorial_u64(k)
                        .filter(|&e| e <= 1 << 20)
                        .ok_or_else(|| Error::unrep("partial sum too large"))?;
                    sum += BigRational::new(BigInt::one(), num_traits::pow(b.clone(), e as usize));
                }
                let e = factorial_u64(m + 1)
                    .filter(|&e| e <= 1 << 20)
                    .ok_or_else(|| Error::unrep("partial sum too large"))?;
                let tail = BigRational::new(BigInt::from(2), num_traits::pow(b, e as usize));
                Ok(Enclosure::new(sum.clone(), sum + tail))
            }
            _ => Err(Error::unrep("partial sums of tower series are not representable")),
        }
    }
}

/// `α₅(β)`: the continued fraction with `a_n = ⌊β^{q_{n−1}}/q_{n−1}⌋`.
///
/// Every quotient is at least 1 only when `β ≥ e^{1/e} ≈ 1.44467`; values
/// below `1.4447` are rejected.
pub fn targeted_theta(beta: &BigRational) -> Result<ContinuedFraction> {
    if *beta < BigRational::new(14447.into(), 10000.into()) {
        return Err(Error::pre(format!("targeted base {beta} is below 1.4447")));
    }
    Ok(ContinuedFraction::new(BigInt::zero(), Quotients::Targeted { beta: beta.clone() }))
}

/// Partial sums used to expand `alpha1` as a continued fraction.
pub const ALPHA1_CF_TERMS: usize = 6;

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub cf: Option<Arc<ContinuedFraction>>,
    pub series: Option<SeriesPreset>,
}

/// Samples taken from series presets by default.
pub const DEFAULT_SAMPLES: usize = 30;

impl Preset {
    fn with_cf(name: String, description: String, cf: ContinuedFraction) -> Self {
        Preset { name, description, cf: Some(Arc::new(cf)), series: None }
    }

    /// `μ` estimate: from samples for series presets, else from convergents.
    pub fn mu(&self, n: usize) -> Result<MeasureEstimate> {
        match (&self.series, &self.cf) {
            (Some(s), _) => Ok(mu_from_samples(&s.samples(n))),
            (None, Some(cf)) => mu_estimate(cf, n),
            _ => Err(Error::pre("preset has neither samples nor a continued fraction")),
        }
    }

    /// `ln θ` estimate, chosen like [`mu`](Self::mu).
    pub fn theta(&self, n: usize) -> Result<MeasureEstimate> {
        match (&self.series, &self.cf) {
            (Some(s), _) => Ok(theta_from_samples(&s.samples(n))),
            (None, Some(cf)) => theta_estimate(cf, n),
            _ => Err(Error::pre("preset has neither samples nor a continued fraction")),
        }
    }

    pub fn classify(&self, n: usize, th: Thresholds) -> Result<ClassifyReport> {
        match (&self.series, &self.cf) {
            (Some(_), _) => Ok(classify_estimates(self.mu(n)?, self.theta(n)?, th)),
            (None, Some(cf)) => classify_cf(cf, n, th),
            _ => Err(Error::pre("preset has neither samples nor a continued fraction")),
        }
    }
}

/// Name and one-line description of every preset family.
pub fn presets() -> Vec<(&'static str, &'static str)> {
    vec![
        ("alpha1[:B]", "sum of B^(-k!), hypo-exponential"),
        ("alpha2[:B]", "[1; EXP_1(B), EXP_2(B), ...]"),
        ("alpha3[:B]", "[0; B, B!, (B!)!, ...]"),
        ("alpha4[:B]", "sum of 1/EXP_k(B), theta = B"),
        ("alpha5[:BETA]", "a_n = floor(BETA^q_{n-1} / q_{n-1}), theta = BETA"),
        ("targeted:BETA", "same as alpha5:BETA"),
        ("alpha6", "[0; EXP_n(n)], hyper-exponential"),
        ("alpha7", "sum of 1/EXP_{2^n}(2^n), hyper-exponential"),
        ("golden", "(sqrt5 - 1)/2 = [0; 1, 1, ...]"),
        ("sqrt2", "[1; 2, 2, ...]"),
        ("e", "[2; 1, 2, 1, 1, 4, ...]"),
    ]
}

fn parse_base(arg: Option<&str>) -> Result<u32> {
    match arg {
        None => Ok(10),
        Some(s) => match s.parse::<u32>() {
            Ok(b) if b >= 2 => Ok(b),
            _ => Err(Error::pre(format!("base must be an integer >= 2, got {s:?}"))),
        },
    }
}

fn parse_beta(arg: Option<&str>) -> Result<BigRational> {
    match arg {
        None => Ok(BigRational::from_integer(2.into())),
        Some(s) => parse_rational(s).ok_or_else(|| Error::pre(format!("cannot parse {s:?} as a rational"))),
    }
}

/// Looks up a preset by name, e.g. `alpha3:3` or `targeted:5/2`.
pub fn preset(spec: &str) -> Result<Preset> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let no_arg = |n: &str| match arg {
        Some(_) => Err(Error::pre(format!("preset {n} takes no parameter"))),
        None => Ok(()),
    };
    let spec = spec.to_string();
    Ok(match name {
        "alpha1" => {
            let base = parse_base(arg)?;
            let series = SeriesPreset::Factorial { base };
            let cf = series
                .partial_sum(ALPHA1_CF_TERMS)
                .and_then(|e| cf_expand_enclosure(&e, 100_000))
                .map(|p| Arc::new(p.to_continued_fraction()))
                .ok();
            Preset { name: spec, description: format!("sum of {base}^(-k!)"), cf, series: Some(series) }
        }
        "alpha2" => {
            let base = parse_base(arg)?;
            let cf = ContinuedFraction::new(BigInt::one(), Quotients::Tower { base: base.into() });
            Preset::with_cf(spec, format!("[1; EXP_n({base})]"), cf)
        }
        "alpha3" => {
            let base = parse_base(arg)?;
            let cf = ContinuedFraction::new(BigInt::zero(), Quotients::FactorialChain { first: base.into() });
            Preset::with_cf(spec, format!("[0; {base}, {base}!, ({base}!)!, ...]"), cf)
        }
        "alpha4" => {
            let base = parse_base(arg)?;
            Preset {
                name: spec,
                description: format!("sum of 1/EXP_k({base})"),
                cf: None,
                series: Some(SeriesPreset::Tower { base }),
            }
        }
        "alpha5" | "targeted" => {
            let beta = parse_beta(arg)?;
            let cf = targeted_theta(&beta)?;
            Preset::with_cf(spec, format!("a_n = floor({beta}^q / q)"), cf)
        }
        "alpha6" => {
            no_arg(name)?;
            Preset::with_cf(spec, "[0; EXP_n(n)]".into(), ContinuedFraction::new(BigInt::zero(), Quotients::SelfTower))
        }
        "alpha7" => {
            no_arg(name)?;
            Preset {
                name: spec,
                description: "sum of 1/EXP_{2^n}(2^n)".into(),
                cf: None,
                series: Some(SeriesPreset::DoubleTower),
            }
        }
        "golden" => {
            no_arg(name)?;
            Preset::with_cf(spec, "(sqrt5 - 1)/2".into(), ContinuedFraction::golden())
        }
        "sqrt2" => {
            no_arg(name)?;
            Preset::with_cf(spec, "sqrt 2".into(), ContinuedFraction::sqrt2())
        }
        "e" => {
            no_arg(name)?;
            Preset::with_cf(spec, "Euler's number".into(), ContinuedFraction::e())
        }
        _ => return Err(Error::pre(format!("unknown preset {name:?}"))),
    })
}

/// Window used by [`Preset::classify`] callers that do not choose one.
pub const DEFAULT_WINDOW: usize = 50;
