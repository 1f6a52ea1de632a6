//! Continued fractions, Diophantine measures and Liouville constructions.

mod cf;
mod expand;
mod magnitude;
mod measures;
mod presets;

pub use cf::{ContinuedFraction, Convergent, Quotients, MAX_CF_INDEX};
pub use expand::{
    best_approx_check, cf_expand, cf_expand_enclosure, cf_expand_rational, close_fractions, dist_to_integers,
    prefix_convergents, BestApprox, CfPrefix, BEST_APPROX_MAX_Q,
};
pub use magnitude::{ln_factorial, LogMagnitude, Magnitude, StirlingBounds, DEFAULT_BIT_BUDGET};
pub use measures::{
    classify_cf, classify_estimates, mu_estimate, mu_from_samples, theta_estimate, theta_from_samples, Classification,
    ClassifyReport, LogScale, MeasureEstimate, MeasureKind, RunningValue, Sample, Thresholds,
};
pub use presets::{
    preset, presets, targeted_theta, Preset, SeriesPreset, ALPHA1_CF_TERMS, DEFAULT_SAMPLES, DEFAULT_WINDOW,
};
