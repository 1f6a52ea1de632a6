use crate::args::{CfSource, SlopeSource};
use devils_staircase::diophantine::{preset, ContinuedFraction, Preset, Quotients, StirlingBounds};
use devils_staircase::enclosure::parse_rational;
use devils_staircase::words::Slope;
use devils_staircase::Error;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::sync::Arc;

/// Why a command failed, with its exit status.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Input(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Certification(_) | Error::Unrepresentable(_)) => 3,
            _ => 2,
        }
    }

    /// One line: `kind: message`.
    pub fn line(&self) -> String {
        let text = match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Input(m) => format!("precondition: {m}"),
            Failure::Io(m) => format!("io: {m}"),
        };
        text.replace(['\n', '\r'], " ")
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

pub type Outcome<T> = Result<T, Failure>;

pub fn fraction(s: &str) -> Outcome<BigRational> {
    parse_rational(s).ok_or_else(|| Failure::Input(format!("cannot parse {s:?} as P/Q or a decimal")))
}

pub fn tolerance(s: &Option<String>, default: BigRational) -> Outcome<BigRational> {
    match s {
        None => Ok(default),
        Some(s) => {
            let t = fraction(s)?;
            if t.is_positive() {
                Ok(t)
            } else {
                Err(Failure::Input(format!("tolerance must be positive, got {s}")))
            }
        }
    }
}

fn with_budget(cf: &ContinuedFraction, budget: u64) -> ContinuedFraction {
    let out = ContinuedFraction::with_options(cf.a0(), cf.quotients().clone(), budget, StirlingBounds::default());
    match cf.name() {
        Some(n) => out.named(n),
        None => out,
    }
}

/// Parses `a0,a1,…` with an optional last entry `fib` or `e-pattern`.
pub fn continued_fraction(s: &str, budget: u64) -> Outcome<ContinuedFraction> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = |t: &str| Failure::Input(format!("bad continued fraction entry {t:?}"));
    let a0: BigInt = parts[0].parse().map_err(|_| bad(parts[0]))?;
    let (body, suffix) = match parts.last() {
        Some(&last) if parts.len() > 1 && (last == "fib" || last == "e-pattern") => {
            (&parts[1..parts.len() - 1], Some(last))
        }
        _ => (&parts[1..], None),
    };
    let terms = body
        .iter()
        .map(|t| match t.parse::<BigUint>() {
            Ok(a) if !a.is_zero() => Ok(a),
            _ => Err(bad(t)),
        })
        .collect::<Outcome<Vec<BigUint>>>()?;
    let quotients = match suffix {
        None => Quotients::Finite(terms),
        Some("fib") => Quotients::Periodic { pre: terms, period: vec![BigUint::from(1u32)] },
        _ if terms.is_empty() => Quotients::EPattern,
        _ => return Err(Failure::Input("e-pattern takes no terms before it".into())),
    };
    Ok(ContinuedFraction::with_options(a0, quotients, budget, StirlingBounds::default()))
}

pub fn named_preset(name: &str, budget: u64) -> Outcome<Preset> {
    let mut p = preset(name)?;
    if let Some(cf) = &p.cf {
        p.cf = Some(Arc::new(with_budget(cf, budget)));
    }
    Ok(p)
}

fn slope_of(cf: ContinuedFraction) -> Slope {
    match cf.rational_value() {
        Some(r) => Slope::Rational(r),
        None => Slope::Irrational(Arc::new(cf)),
    }
}

fn preset_cf(name: &str, budget: u64) -> Outcome<Arc<ContinuedFraction>> {
    named_preset(name, budget)?.cf.ok_or_else(|| Failure::Input(format!("preset {name} has no continued fraction")))
}

pub fn slope(src: &SlopeSource, budget: u64) -> Outcome<Slope> {
    match (&src.alpha, &src.cf, &src.preset) {
        (Some(a), _, _) => Ok(Slope::Rational(fraction(a)?)),
        (_, Some(c), _) => Ok(slope_of(continued_fraction(c, budget)?)),
        (_, _, Some(p)) => Ok(slope_of(preset_cf(p, budget)?.as_ref().clone())),
        _ => Err(Failure::Input("a slope is required".into())),
    }
}

/// A slope written as `P/Q`, a decimal, `a0,a1,…` or a preset name.
pub fn slope_token(s: &str, budget: u64) -> Outcome<Slope> {
    if s.contains(',') {
        Ok(slope_of(continued_fraction(s, budget)?))
    } else if let Some(r) = parse_rational(s) {
        Ok(Slope::Rational(r))
    } else {
        Ok(slope_of(preset_cf(s, budget)?.as_ref().clone()))
    }
}

/// The continued fraction and, for presets, the preset itself.
pub fn cf_source(src: &CfSource, budget: u64) -> Outcome<(Option<Arc<ContinuedFraction>>, Option<Preset>)> {
    match (&src.cf, &src.preset) {
        (Some(c), _) => Ok((Some(Arc::new(continued_fraction(c, budget)?)), None)),
        (_, Some(p)) => {
            let p = named_preset(p, budget)?;
            Ok((p.cf.clone(), Some(p)))
        }
        _ => Err(Failure::Input("a continued fraction is required".into())),
    }
}

pub fn require_cf(cf: Option<Arc<ContinuedFraction>>) -> Outcome<Arc<ContinuedFraction>> {
    cf.ok_or_else(|| Failure::Input("this preset is defined by a series, not a continued fraction".into()))
}
