//! Finite-N estimates of the irrationality exponent `μ` and base `θ`, and
//! the Liouville classification built on them.
//!
//! Every estimate is a window of running values over the computable
//! convergents. The limits are out of reach, so results carry a caveat.

use super::cf::ContinuedFraction;
use super::magnitude::Magnitude;
use crate::error::{Error, Result};
use crate::interval::Interval;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Mu,
    Theta,
}

/// One running value. For `θ` it is an enclosure of `ln θ` at this index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunningValue {
    pub n: usize,
    pub value: Interval,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureEstimate {
    pub kind: MeasureKind,
    pub running: Vec<RunningValue>,
    /// Max over the tail half of the window, `None` when nothing was
    /// computable.
    pub headline: Option<Interval>,
    /// Always true: the value is a finite-N estimate, not a limit.
    pub finite_n: bool,
    /// Why the window ended early, if it did.
    pub stopped: Option<String>,
}

impl MeasureEstimate {
    fn new(kind: MeasureKind, running: Vec<RunningValue>, stopped: Option<String>) -> Self {
        let headline = tail(&running).iter().map(|r| r.value).reduce(|a, b| a.max(&b));
        MeasureEstimate { kind, running, headline, finite_n: true, stopped }
    }

    /// Max of the running values over the whole window.
    pub fn window_max(&self) -> Option<Interval> {
        self.running.iter().map(|r| r.value).reduce(|a, b| a.max(&b))
    }

    /// The last value when the tail is certainly strictly decreasing, else
    /// the headline.
    pub fn trend(&self) -> Option<Interval> {
        let t = tail(&self.running);
        let decreasing = t.len() >= 2 && t.windows(2).all(|w| w[1].value.hi < w[0].value.lo);
        if decreasing {
            t.last().map(|r| r.value)
        } else {
            self.headline
        }
    }
}

fn tail(running: &[RunningValue]) -> &[RunningValue] {
    &running[running.len() - running.len().div_ceil(2)..]
}

/// `ln y / x` from magnitudes, through logs when the values overflow.
fn ratio_ln_over(
    ln_y: Option<Interval>,
    lnln_y: Option<Interval>,
    x: Option<Interval>,
    ln_x: Option<Interval>,
) -> Option<Interval> {
    if let (Some(a), Some(b)) = (ln_y, x) {
        let r = a / b;
        if r.is_finite() {
            return Some(r);
        }
    }
    let r = (lnln_y? - ln_x?).exp();
    r.is_finite().then_some(r)
}

/// Running values `1 + ln q_{n+1} / ln q_n` for `n < N` with `q_n ≥ 2`.
pub fn mu_estimate(cf: &ContinuedFraction, n_max: usize) -> Result<MeasureEstimate> {
    if n_max < 2 {
        return Err(Error::pre("N must be at least 2"));
    }
    let (conv, err) = cf.convergents_partial(n_max);
    let mut running = Vec::new();
    let mut stopped = err.map(|e| e.to_string());
    for w in conv.windows(2) {
        let (q, q1) = (&w[0].q, &w[1].q);
        if matches!(q, Magnitude::Exact(v) if v < &2u32.into()) {
            continue;
        }
        match ratio_ln_over(q1.ln(), q1.lnln(), q.ln(), q.lnln()) {
            Some(r) => running.push(RunningValue { n: w[0].index, value: r + Interval::point(1.0) }),
            None => {
                stopped = Some(format!("ln q_{} is not representable", w[1].index));
                break;
            }
        }
    }
    Ok(MeasureEstimate::new(MeasureKind::Mu, running, stopped))
}

/// Running values `ln q_{n+1} / q_n` for `1 ≤ n < N`, enclosures of `ln θ`.
pub fn theta_estimate(cf: &ContinuedFraction, n_max: usize) -> Result<MeasureEstimate> {
    if n_max < 2 {
        return Err(Error::pre("N must be at least 2"));
    }
    let (conv, err) = cf.convergents_partial(n_max);
    let mut running = Vec::new();
    let mut stopped = err.map(|e| e.to_string());
    for w in conv.windows(2).skip(1) {
        let (q, q1) = (&w[0].q, &w[1].q);
        let generic = ratio_ln_over(q1.ln(), q1.lnln(), q.value(), q.ln());
        let value = match (generic, cf.growth_hint(w[0].index)) {
            (Some(g), Some(h)) => g.intersect(&h).or(Some(h)),
            (g, h) => g.or(h),
        };
        match value {
            Some(r) => running.push(RunningValue { n: w[0].index, value: r }),
            None => {
                stopped = Some(format!("q_{} is not representable with a certified value", w[0].index));
                break;
            }
        }
    }
    Ok(MeasureEstimate::new(MeasureKind::Theta, running, stopped))
}

/// `L = −ln ‖qα‖`, given directly, through `ln L`, or as `L/q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogScale {
    Value(Interval),
    Ln(Interval),
    PerQ(Interval),
}

/// A good approximation denominator `q` with `L = −ln ‖qα‖`.
#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub index: usize,
    pub q: Magnitude,
    pub minus_log_dist: LogScale,
}

impl Sample {
    /// `L / q`.
    pub fn theta_ratio(&self) -> Option<Interval> {
        match self.minus_log_dist {
            LogScale::PerQ(v) => Some(v),
            LogScale::Value(l) => ratio_ln_over(Some(l), Some(l.ln()), self.q.value(), self.q.ln()),
            LogScale::Ln(ll) => {
                ratio_ln_over(Some(ll.exp()).filter(|v| v.is_finite()), Some(ll), self.q.value(), self.q.ln())
            }
        }
    }

    /// `1 + L / ln q`.
    pub fn mu_value(&self) -> Option<Interval> {
        let (l, ll) = match self.minus_log_dist {
            LogScale::PerQ(v) => {
                let ll = v.ln() + self.q.ln()?;
                (self.q.value().map(|q| v * q), ll)
            }
            LogScale::Value(l) => (Some(l), l.ln()),
            LogScale::Ln(ll) => (Some(ll.exp()).filter(|v| v.is_finite()), ll),
        };
        ratio_ln_over(l, Some(ll), self.q.ln(), self.q.lnln()).map(|r| r + Interval::point(1.0))
    }
}

fn from_samples(kind: MeasureKind, samples: &[Sample], f: impl Fn(&Sample) -> Option<Interval>) -> MeasureEstimate {
    let mut running = Vec::new();
    let mut stopped = None;
    for s in samples {
        match f(s) {
            Some(v) => running.push(RunningValue { n: s.index, value: v }),
            None => {
                stopped = Some(format!("sample {} is not representable", s.index));
                break;
            }
        }
    }
    MeasureEstimate::new(kind, running, stopped)
}

/// Running values `−ln ‖qα‖ / q`, enclosures of lower bounds for `ln θ`.
pub fn theta_from_samples(samples: &[Sample]) -> MeasureEstimate {
    from_samples(MeasureKind::Theta, samples, Sample::theta_ratio)
}

/// Running values `1 − ln ‖qα‖ / ln q`, lower bounds for `μ`.
pub fn mu_from_samples(samples: &[Sample]) -> MeasureEstimate {
    from_samples(MeasureKind::Mu, samples, Sample::mu_value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub mu_cutoff: f64,
    pub theta_low: f64,
    pub theta_high: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { mu_cutoff: 20.0, theta_low: 1.001, theta_high: 1e6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Classification {
    ApparentlyNonLiouville,
    HypoExponential,
    /// Enclosure of `θ̂`.
    Exponential {
        theta: Interval,
    },
    HyperExponential,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::ApparentlyNonLiouville => "apparently-non-liouville",
            Classification::HypoExponential => "hypo-exponential",
            Classification::Exponential { .. } => "exponential",
            Classification::HyperExponential => "hyper-exponential",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub classification: Classification,
    pub mu: MeasureEstimate,
    pub theta: MeasureEstimate,
    pub thresholds: Thresholds,
    pub finite_n: bool,
}

/// Decision from the two estimates:
/// a tail maximum of `θ̂` above `theta_high` is hyper-exponential;
/// otherwise the trend of `θ̂` above `theta_low` is exponential;
/// otherwise a `μ̂` headline above `mu_cutoff` is hypo-exponential.
pub fn classify_estimates(mu: MeasureEstimate, theta: MeasureEstimate, th: Thresholds) -> ClassifyReport {
    let ln_high = th.theta_high.ln();
    let ln_low = th.theta_low.ln();
    let classification = match (theta.headline, theta.trend()) {
        (Some(h), _) if h.lo > ln_high => Classification::HyperExponential,
        (_, Some(t)) if t.lo > ln_low => Classification::Exponential { theta: t.exp() },
        _ => match mu.headline {
            Some(m) if m.lo > th.mu_cutoff => Classification::HypoExponential,
            _ => Classification::ApparentlyNonLiouville,
        },
    };
    ClassifyReport { classification, mu, theta, thresholds: th, finite_n: true }
}

/// Classifies a continued fraction from its first `N` convergents.
pub fn classify_cf(cf: &ContinuedFraction, n_max: usize, th: Thresholds) -> Result<ClassifyReport> {
    Ok(classify_estimates(mu_estimate(cf, n_max)?, theta_estimate(cf, n_max)?, th))
}

#[cfg(test)]
mod tests {
    use super::super::cf::Quotients;
    use super::*;
    use num_rational::BigRational;

    fn targeted(b: i64) -> ContinuedFraction {
        ContinuedFraction::new(0.into(), Quotients::Targeted { beta: BigRational::from_integer(b.into()) })
    }

    #[test]
    fn targeted_theta_reaches_ln_beta() {
        for b in [2i64, 3, 10] {
            let est = theta_estimate(&targeted(b), 6).unwrap();
            let h = est.headline.unwrap();
            let lb = (b as f64).ln();
            assert!(h.lo > lb - 1e-3 && h.hi < lb + 1e-3, "beta {b}: {h}");
            assert!(est.finite_n);
        }
    }

    #[test]
    fn golden_estimates() {
        let g = ContinuedFraction::golden();
        let mu = mu_estimate(&g, 50).unwrap();
        let h = mu.headline.unwrap();
        assert!(h.lo > 2.0 && h.hi < 2.1, "{h}");
        let th = theta_estimate(&g, 50).unwrap();
        assert!(th.trend().unwrap().hi < 0.05);
        let c = classify_cf(&g, 50, Thresholds::default()).unwrap();
        assert_eq!(c.classification, Classification::ApparentlyNonLiouville);
    }

    #[test]
    fn e_mu_headline() {
        let h = mu_estimate(&ContinuedFraction::e(), 500).unwrap().headline.unwrap();
        assert!(h.lo >= 2.0 && h.hi <= 2.2, "{h}");
    }

    #[test]
    fn single_sample_ratio() {
        let s = Sample { index: 1, q: Magnitude::exact(10u32), minus_log_dist: LogScale::Value(Interval::point(5.0)) };
        let est = theta_from_samples(&[s]);
        assert!(est.headline.unwrap().contains(0.5));
    }

    #[test]
    fn tail_half_headline() {
        let r = |n, v| RunningValue { n, value: Interval::point(v) };
        let est = MeasureEstimate::new(MeasureKind::Theta, vec![r(1, 9.0), r(2, 3.0), r(3, 2.0), r(4, 1.0)], None);
        assert_eq!(est.headline.unwrap().hi, 2.0);
        assert_eq!(est.trend().unwrap().hi, 1.0);
        assert_eq!(est.window_max().unwrap().hi, 9.0);
    }
}
