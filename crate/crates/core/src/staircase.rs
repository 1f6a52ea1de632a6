//! The staircase `Δ`: slopes of mechanical words mapped to β-numbers.
//!
//! At a rational `α = b − 1 + p/q` the value `Δ(α)` is the Parry number
//! with `d_β(1) = b z_{p,q} b`, and the right limit `Δ(α+)` has the
//! eventually periodic expansion `b (z_{p,q} b (b−1))^ω`. At an irrational
//! slope the expansion is the upper mechanical word `⌈α⌉ c_α` and `Δ(α)`
//! is enclosed through truncations of the digit series.

use crate::beta::{
    beta_from_series, positive_root_finite, AlgebraicRoot, BetaNumber, BetaRoot, IntPoly, ParryExpansion,
    RefinableBeta, MAX_ROOT_BITS,
};
use crate::diophantine::ContinuedFraction;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::words::{bzb_word, EventuallyPeriodicWord, FiniteWord, Slope};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// Which value at a slope: `Δ(α)` or the right limit `Δ(α+)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Value,
    RightLimit,
}

/// Algebraic values come from exact polynomials. Irrational slopes are only
/// labelled transcendental; nothing here proves it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Nature {
    Algebraic,
    LabelledTranscendental,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaResult {
    pub slope: Slope,
    pub side: Side,
    pub beta: Enclosure,
    pub expansion: ParryExpansion,
    pub nature: Nature,
    /// Integer polynomial with `β` as a root, for algebraic values.
    pub polynomial: Option<IntPoly>,
    /// `Δ(0) = 1` is fixed by convention rather than computed.
    pub conventional: bool,
    #[serde(skip)]
    number: Option<BetaNumber>,
}

impl DeltaResult {
    fn from_number(slope: Slope, side: Side, nature: Nature, number: BetaNumber) -> Self {
        DeltaResult {
            slope,
            side,
            beta: number.beta().clone(),
            expansion: number.expansion().clone(),
            nature,
            polynomial: number.polynomial().cloned(),
            conventional: false,
            number: Some(number),
        }
    }

    /// The underlying β-number, absent only for `Δ(0)`.
    pub fn number(&self) -> Option<&BetaNumber> {
        self.number.as_ref()
    }

    pub fn number_mut(&mut self) -> Option<&mut BetaNumber> {
        self.number.as_mut()
    }

    /// Shrinks the enclosure of `β` to width at most `tol`.
    pub fn refine(&mut self, tol: &BigRational) -> Result<()> {
        if let Some(n) = &mut self.number {
            n.refine(tol)?;
            self.beta = n.beta().clone();
        }
        Ok(())
    }

    fn refine_bits(&mut self, bits: u64) -> Result<()> {
        if let Some(n) = &mut self.number {
            n.refine_beta_bits(bits)?;
            self.beta = n.beta().clone();
        }
        Ok(())
    }

    /// Current enclosure width in bits, `k` with `width ≤ 2^{-k}`.
    fn bits(&self) -> u64 {
        let w = self.beta.width();
        if w.is_zero() {
            return MAX_ROOT_BITS;
        }
        (w.denom().bits() as i64 - w.numer().bits() as i64).max(0) as u64
    }
}

/// Default tolerance for rational slopes, `10^{-30}`.
pub fn default_rational_tol() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(30))
}

/// Default tolerance for irrational slopes, `10^{-12}`.
pub fn default_irrational_tol() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(12))
}

/// Splits `α > 0` into `b = ⌈α⌉` and the reduced `p/q = α − (b − 1) ∈ (0, 1]`.
pub fn split_slope(alpha: &BigRational) -> Result<(u32, i64, i64)> {
    if !alpha.is_positive() {
        return Err(Error::pre("slope must be positive"));
    }
    let b = alpha.ceil().to_integer();
    let frac = alpha - BigRational::from_integer(&b - 1);
    let b = b.to_u32().ok_or_else(|| Error::unrep("slope is too large"))?;
    let p = frac.numer().to_i64().ok_or_else(|| Error::unrep("numerator does not fit in i64"))?;
    let q = frac.denom().to_i64().ok_or_else(|| Error::unrep("denominator does not fit in i64"))?;
    Ok((b, p, q))
}

/// `Δ(α)` at a nonnegative rational, with `d_β(1) = b z_{p,q} b`.
pub fn delta_rational(alpha: &BigRational, tol: &BigRational) -> Result<DeltaResult> {
    if alpha.is_zero() {
        return Ok(DeltaResult {
            slope: Slope::Rational(alpha.clone()),
            side: Side::Value,
            beta: Enclosure::from_integer(1),
            expansion: ParryExpansion::Finite(FiniteWord::new(vec![1])),
            nature: Nature::Algebraic,
            polynomial: Some(IntPoly::from_i64(&[1, -1])),
            conventional: true,
            number: None,
        });
    }
    let (b, p, q) = split_slope(alpha)?;
    let word = bzb_word(b, p, q)?;
    let root = positive_root_finite(word.as_slice(), tol)?;
    let number = BetaNumber::new(BetaRoot::Algebraic(root), ParryExpansion::Finite(word));
    Ok(DeltaResult::from_number(Slope::Rational(alpha.clone()), Side::Value, Nature::Algebraic, number))
}

/// `Δ(α+)` at a positive rational.
///
/// The expansion is `b (z_{p,q} b (b−1))^ω`, or `(b+1) b^ω` at an integer
/// slope `b`, and `β_+` is the root in `(b, b+2)` of
/// `x^{q+1} − Σ w_i x^{q+1−i} − x + 1` with `w = b z_{p,q} b`.
pub fn delta_right_limit(alpha: &BigRational, tol: &BigRational) -> Result<DeltaResult> {
    let (b, p, q) = split_slope(alpha)?;
    let word = bzb_word(b, p, q)?;
    let expansion = if p == q {
        EventuallyPeriodicWord::new(vec![b + 1], vec![b])?
    } else {
        let mut period = word.as_slice()[1..].to_vec();
        period.push(b - 1);
        EventuallyPeriodicWord::new(vec![b], period)?
    };
    let poly = IntPoly::right_limit(word.as_slice());
    let mut root = AlgebraicRoot::isolate(poly, &BigInt::from(b), &BigInt::from(b + 2))?;
    root.refine(tol)?;
    let number = BetaNumber::new(BetaRoot::Algebraic(root), ParryExpansion::Periodic(expansion));
    Ok(DeltaResult::from_number(Slope::Rational(alpha.clone()), Side::RightLimit, Nature::Algebraic, number))
}

/// `Δ(α)` at an irrational slope given by its continued fraction, to
/// width at most `tol`.
pub fn delta_irrational(cf: Arc<ContinuedFraction>, tol: &BigRational) -> Result<DeltaResult> {
    if cf.a0().is_negative() {
        return Err(Error::pre("slope must be positive"));
    }
    if cf.rational_value().is_some() {
        return Err(Error::pre("continued fraction is finite; use the rational evaluation"));
    }
    let b = (cf.a0() + BigInt::one()).to_u32().ok_or_else(|| Error::unrep("slope is too large"))?;
    let number = beta_from_series(ParryExpansion::Sturmian(cf.clone()), b, tol)?;
    Ok(DeltaResult::from_number(Slope::Irrational(cf), Side::Value, Nature::LabelledTranscendental, number))
}

/// `Δ` at any slope.
pub fn delta(slope: &Slope, tol: &BigRational) -> Result<DeltaResult> {
    match slope {
        Slope::Rational(r) => delta_rational(r, tol),
        Slope::Irrational(cf) => delta_irrational(cf.clone(), tol),
    }
}

/// Refines `a` and `b` until `a` lies strictly below `b`.
///
/// Fails when the two values cannot be told apart within
/// [`MAX_ROOT_BITS`], which for distinct algebraic values never happens.
pub fn separate(a: &mut DeltaResult, b: &mut DeltaResult) -> Result<()> {
    loop {
        if a.beta.precedes(&b.beta) {
            return Ok(());
        }
        if b.beta.hi < a.beta.lo {
            return Err(Error::cert("values are in the wrong order"));
        }
        let bits = a.bits().min(b.bits());
        if bits >= MAX_ROOT_BITS || (a.beta.is_exact() && b.beta.is_exact()) {
            return Err(Error::cert("values could not be separated"));
        }
        let next = (bits * 2).clamp(64, MAX_ROOT_BITS);
        a.refine_bits(next)?;
        b.refine_bits(next)?;
    }
}

/// `Δ(α+) − Δ(α)`, refined until its lower bound is positive.
pub fn jump(alpha: &BigRational, tol: &BigRational) -> Result<Enclosure> {
    let mut v = delta_rational(alpha, tol)?;
    let mut r = delta_right_limit(alpha, tol)?;
    separate(&mut v, &mut r)?;
    Ok(r.beta.sub(&v.beta))
}

/// One slope of the plot: `Δ(α)`, `Δ(α+)` and the jump between them.
#[derive(Debug, Clone, Serialize)]
pub struct PlotRow {
    #[serde(serialize_with = "crate::ser::display")]
    pub slope: BigRational,
    pub delta: Enclosure,
    pub right_limit: Enclosure,
    pub jump: Enclosure,
}

/// A [`PlotRow`] rendered to decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotRecord {
    pub slope_num: String,
    pub slope_den: String,
    pub delta_lo: String,
    pub delta_hi: String,
    pub right_lo: String,
    pub right_hi: String,
    pub jump_lo: String,
}

impl PlotRecord {
    pub const HEADER: [&'static str; 7] =
        ["slope_num", "slope_den", "delta_lo", "delta_hi", "right_lo", "right_hi", "jump_lo"];

    pub fn fields(&self) -> [&str; 7] {
        [
            &self.slope_num,
            &self.slope_den,
            &self.delta_lo,
            &self.delta_hi,
            &self.right_lo,
            &self.right_hi,
            &self.jump_lo,
        ]
    }
}

impl PlotRow {
    /// Decimal strings with `digits` significant digits, rounded outward.
    pub fn record(&self, digits: usize) -> PlotRecord {
        PlotRecord {
            slope_num: self.slope.numer().to_string(),
            slope_den: self.slope.denom().to_string(),
            delta_lo: self.delta.lo_decimal(digits),
            delta_hi: self.delta.hi_decimal(digits),
            right_lo: self.right_limit.lo_decimal(digits),
            right_hi: self.right_limit.hi_decimal(digits),
            jump_lo: self.jump.lo_decimal(digits),
        }
    }
}

/// Reduced fractions in `[lo, hi]` with denominator at most `max_den`,
/// excluding `0`, in increasing order.
pub fn farey_slopes(lo: &BigRational, hi: &BigRational, max_den: u64) -> Vec<BigRational> {
    let mut out = Vec::new();
    for q in 1..=max_den {
        let qb = BigInt::from(q);
        let first = (lo * &qb).ceil().to_integer().max(BigInt::one());
        let last = (hi * &qb).floor().to_integer();
        let mut p = first;
        while p <= last {
            if p.gcd(&qb).is_one() {
                out.push(BigRational::new(p.clone(), qb.clone()));
            }
            p += 1;
        }
    }
    out.sort();
    out
}

/// Plot data for every reduced slope in `[lo, hi]` with denominator at
/// most `max_den`. Consecutive rows are refined until
/// `Δ(prev+) < Δ(next)` is certified, so the output shows both the
/// monotonicity and the jumps.
pub fn plot_samples(lo: &BigRational, hi: &BigRational, max_den: u64, tol: &BigRational) -> Result<Vec<PlotRow>> {
    if lo.is_negative() || lo >= hi {
        return Err(Error::pre("need 0 <= lo < hi"));
    }
    if max_den == 0 {
        return Err(Error::pre("max_den must be at least 1"));
    }
    let slopes = farey_slopes(lo, hi, max_den);
    let mut pairs: Vec<(DeltaResult, DeltaResult)> = slopes
        .par_iter()
        .map(|a| {
            let mut v = delta_rational(a, tol)?;
            let mut r = delta_right_limit(a, tol)?;
            separate(&mut v, &mut r)?;
            Ok((v, r))
        })
        .collect::<Result<_>>()?;
    for offset in [0, 1] {
        if pairs.len() <= offset {
            continue;
        }
        pairs[offset..].par_chunks_mut(2).try_for_each(|c| match c {
            [a, b] => separate(&mut a.1, &mut b.0),
            _ => Ok(()),
        })?;
    }
    Ok(slopes
        .into_iter()
        .zip(pairs)
        .map(|(slope, (v, r))| {
            let jump = r.beta.sub(&v.beta);
            PlotRow { slope, delta: v.beta, right_limit: r.beta, jump }
        })
        .collect())
}

/// Enclosure of the Lipschitz order `ln Δ(α) / ln θ(α)` under
/// `1 < θ < Δ(α)`.
pub fn lipschitz_order(cf: Arc<ContinuedFraction>, theta: &Enclosure, tol: &BigRational) -> Result<Enclosure> {
    let one = BigRational::one();
    if theta.lo <= one {
        return Err(Error::pre("theta must exceed 1"));
    }
    let d = delta_irrational(cf, tol)?;
    lipschitz_order_from(&d.beta, theta)
}

/// `ln Δ / ln θ` from enclosures, checking `1 < θ < Δ`.
pub fn lipschitz_order_from(delta: &Enclosure, theta: &Enclosure) -> Result<Enclosure> {
    let one = BigRational::one();
    if theta.lo <= one {
        return Err(Error::pre("theta must exceed 1"));
    }
    if theta.hi >= delta.lo {
        return Err(Error::pre(format!(
            "theta {theta:.12} is not below Delta {delta:.12}; the Lipschitz order needs 1 < theta < Delta"
        )));
    }
    let ln = |e: &Enclosure| Enclosure::new(&e.lo - &one, &e.hi - &one).to_interval().ln_1p();
    let ratio = ln(delta) / ln(theta);
    if !ratio.is_finite() || ratio.lo <= 0.0 {
        return Err(Error::cert("theta is too close to 1 for the log ratio"));
    }
    Enclosure::from_interval(ratio).ok_or_else(|| Error::cert("log ratio is not finite"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::greedy_digits;
    use crate::words::{is_parry_admissible, Word};

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn tol() -> BigRational {
        default_rational_tol()
    }

    #[test]
    fn rational_examples() {
        let half = delta_rational(&r(1, 2), &tol()).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((half.beta.mid_f64() - phi).abs() < 1e-15);
        assert_eq!(half.expansion.to_string(), "11");
        let one = delta_rational(&r(1, 1), &tol()).unwrap();
        assert_eq!(one.beta, Enclosure::from_integer(2));
        assert_eq!(one.expansion.to_string(), "2");
        let two_fifths = delta_rational(&r(2, 5), &tol()).unwrap();
        assert_eq!(two_fifths.expansion.to_string(), "10101");
        assert!((two_fifths.beta.mid_f64() - 1.5701).abs() < 1e-3);
        assert!(two_fifths.beta.width() <= tol());
    }

    #[test]
    fn zero_is_conventional() {
        let z = delta_rational(&BigRational::zero(), &tol()).unwrap();
        assert!(z.conventional);
        assert_eq!(z.beta, Enclosure::from_integer(1));
        assert!(delta_rational(&r(-1, 2), &tol()).is_err());
        assert!(delta_right_limit(&BigRational::zero(), &tol()).is_err());
    }

    #[test]
    fn right_limit_examples() {
        let one = delta_right_limit(&r(1, 1), &tol()).unwrap();
        assert!((one.beta.mid_f64() - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert_eq!(one.expansion.to_string(), "2(1)^w");
        let half = delta_right_limit(&r(1, 2), &tol()).unwrap();
        assert!((half.beta.mid_f64() - 1.801_937_735_804_838).abs() < 1e-14);
        assert_eq!(half.expansion.to_string(), "1(10)^w");
        let two = delta_right_limit(&r(2, 1), &tol()).unwrap();
        assert!((two.beta.mid_f64() - (2.0 + 3f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn jumps_are_positive() {
        let j = jump(&r(1, 1), &tol()).unwrap();
        assert!((j.mid_f64() - ((3.0 + 5f64.sqrt()) / 2.0 - 2.0)).abs() < 1e-14);
        let j = jump(&r(1, 2), &tol()).unwrap();
        assert!((j.mid_f64() - 0.183_904_1).abs() < 1e-6);
        assert!(jump(&r(2, 5), &tol()).unwrap().lo.is_positive());
    }

    #[test]
    fn floor_matches_ceiling_of_slope() {
        for (p, q) in [(1, 3), (5, 3), (7, 2), (11, 4)] {
            let a = r(p, q);
            let d = delta_rational(&a, &tol()).unwrap();
            assert_eq!(d.beta.lo.floor(), a.ceil(), "{a}");
        }
        for b in 1..=3 {
            let d = delta_rational(&r(b, 1), &tol()).unwrap();
            assert_eq!(d.beta, Enclosure::from_integer(b + 1));
        }
    }

    #[test]
    fn right_limit_round_trips() {
        let mut d = delta_right_limit(&r(2, 5), &tol()).unwrap();
        let expected = d.expansion.prefix(15).unwrap();
        let g = greedy_digits(d.number_mut().unwrap(), &BigRational::one(), 15).unwrap();
        assert_eq!(g.digits, expected.as_slice());
    }

    #[test]
    fn golden_slope() {
        let cf = Arc::new(ContinuedFraction::golden());
        let d = delta_irrational(cf, &default_irrational_tol()).unwrap();
        assert!(d.beta.width() <= default_irrational_tol());
        let lo = delta_rational(&r(3, 5), &tol()).unwrap();
        let hi = delta_rational(&r(2, 3), &tol()).unwrap();
        assert!(lo.beta.precedes(&d.beta) && d.beta.precedes(&hi.beta));
        assert_eq!(d.nature, Nature::LabelledTranscendental);
    }

    #[test]
    fn sqrt2_minus_one_is_sandwiched() {
        let cf = Arc::new(ContinuedFraction::new(
            0.into(),
            crate::diophantine::Quotients::Periodic { pre: vec![], period: vec![2u32.into()] },
        ));
        let d = delta_irrational(cf, &default_irrational_tol()).unwrap();
        let lo = delta_rational(&r(2, 5), &tol()).unwrap();
        let hi = delta_rational(&r(1, 2), &tol()).unwrap();
        assert!(lo.beta.precedes(&d.beta) && d.beta.precedes(&hi.beta));
    }

    #[test]
    fn small_slopes_decrease_to_one() {
        let mut prev: Option<Enclosure> = None;
        for q in [2, 4, 8, 16, 32, 64] {
            let d = delta_rational(&r(1, q), &tol()).unwrap();
            if let Some(p) = &prev {
                assert!(d.beta.precedes(p));
            }
            assert!(d.beta.lo > BigRational::one());
            prev = Some(d.beta);
        }
        assert!(prev.unwrap().hi < r(11, 10));
    }

    #[test]
    fn plot_examples() {
        let rows = plot_samples(&r(0, 1), &r(1, 1), 3, &tol()).unwrap();
        let slopes: Vec<String> = rows.iter().map(|row| row.slope.to_string()).collect();
        assert_eq!(slopes, ["1/3", "1/2", "2/3", "1"]);
        for w in rows.windows(2) {
            assert!(w[0].delta.precedes(&w[1].delta));
            assert!(w[0].right_limit.precedes(&w[1].delta));
        }
        for row in &rows {
            assert!(row.jump.lo.is_positive());
        }
        let single = plot_samples(&r(0, 1), &r(1, 1), 1, &tol()).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].record(10).slope_num, "1");
        assert!(plot_samples(&r(1, 1), &r(1, 1), 3, &tol()).is_err());
    }

    #[test]
    fn expansions_are_admissible() {
        for (p, q) in [(1, 2), (2, 5), (3, 7), (9, 4)] {
            let d = delta_rational(&r(p, q), &tol()).unwrap();
            assert!(is_parry_admissible(&d.expansion.as_word().unwrap()).unwrap());
            let rl = delta_right_limit(&r(p, q), &tol()).unwrap();
            let w: Word = rl.expansion.as_word().unwrap();
            assert!(is_parry_admissible(&w).unwrap());
        }
    }

    #[test]
    fn lipschitz_examples() {
        let d = Enclosure::new(r(17, 10), r(17, 10));
        let theta = Enclosure::from_interval(crate::interval::Interval::point(1.7f64).sqrt()).unwrap();
        let order = lipschitz_order_from(&d, &theta).unwrap();
        assert!(order.contains(&BigRational::from_integer(2.into())) || (order.mid_f64() - 2.0).abs() < 1e-12);
        assert!(lipschitz_order_from(&d, &Enclosure::from_integer(2)).is_err());
        assert!(lipschitz_order_from(&d, &Enclosure::from_integer(1)).is_err());
        let near = lipschitz_order_from(&d, &Enclosure::exact(r(1_000_001, 1_000_000))).unwrap();
        assert!(near.lo > BigRational::from_integer(500_000.into()));
    }
}
