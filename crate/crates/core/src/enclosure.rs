//! Certified real intervals with exact rational endpoints.

use crate::interval::Interval;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

/// A closed interval `[lo, hi]` known to contain some real number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

/// Significant digits used by `Display` and `Serialize`.
pub const DEFAULT_DIGITS: usize = 40;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rounding {
    Down,
    Up,
}

impl Enclosure {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "inverted enclosure");
        Enclosure { lo, hi }
    }

    pub fn exact(x: BigRational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::exact(BigRational::from_integer(n.into()))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    /// Strictly below every point of `other`.
    pub fn precedes(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    /// Product of two enclosures of nonnegative numbers.
    pub fn mul_nonneg(&self, other: &Enclosure) -> Enclosure {
        assert!(!self.lo.is_negative() && !other.lo.is_negative());
        Enclosure { lo: &self.lo * &other.lo, hi: &self.hi * &other.hi }
    }

    /// `1/x` for an enclosure of a positive number.
    pub fn recip(&self) -> Enclosure {
        assert!(self.lo.is_positive(), "reciprocal of a non-positive enclosure");
        Enclosure { lo: self.hi.recip(), hi: self.lo.recip() }
    }

    /// Quotient by an enclosure of a positive number.
    pub fn div_pos(&self, other: &Enclosure) -> Enclosure {
        assert!(other.lo.is_positive(), "division by a non-positive enclosure");
        let cands = [&self.lo / &other.lo, &self.lo / &other.hi, &self.hi / &other.lo, &self.hi / &other.hi];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Enclosure { lo, hi }
    }

    /// `x^n` for an enclosure of a nonnegative number.
    pub fn pow_nonneg(&self, n: usize) -> Enclosure {
        assert!(!self.lo.is_negative());
        Enclosure { lo: num_traits::pow(self.lo.clone(), n), hi: num_traits::pow(self.hi.clone(), n) }
    }

    /// The exact enclosure of an `f64` interval.
    pub fn from_interval(iv: Interval) -> Option<Enclosure> {
        Some(Enclosure { lo: BigRational::from_float(iv.lo)?, hi: BigRational::from_float(iv.hi)? })
    }

    pub fn to_interval(&self) -> Interval {
        let lo = Interval::from_rational(&self.lo).lo;
        let hi = Interval::from_rational(&self.hi).hi;
        Interval::new(lo, hi)
    }

    /// Lower endpoint rounded down to `digits` significant decimal digits.
    pub fn lo_decimal(&self, digits: usize) -> String {
        to_decimal(&self.lo, digits, Rounding::Down)
    }

    /// Upper endpoint rounded up to `digits` significant decimal digits.
    pub fn hi_decimal(&self, digits: usize) -> String {
        to_decimal(&self.hi, digits, Rounding::Up)
    }

    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (self.lo_decimal(digits), self.hi_decimal(digits))
    }
}

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

/// Decimal rendering rounded in the given direction.
fn to_decimal(x: &BigRational, digits: usize, mode: Rounding) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        return "0".to_string();
    }
    if x.is_negative() {
        let flipped = match mode {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        };
        return format!("-{}", to_decimal(&-x, digits, flipped));
    }
    // exponent e with 10^e <= x < 10^(e+1)
    let approx = Interval::from_rational(x);
    let mut e = if approx.lo > 0.0 && approx.lo.is_finite() {
        approx.lo.log10().floor() as i64
    } else {
        (x.numer().bits() as i64 - x.denom().bits() as i64) * 3 / 10
    };
    let scaled = |e: i64| -> BigRational {
        if e >= 0 {
            x / BigRational::from_integer(pow10(e as u32))
        } else {
            x * BigRational::from_integer(pow10((-e) as u32))
        }
    };
    loop {
        let s = scaled(e);
        if s >= BigRational::from_integer(10.into()) {
            e += 1;
        } else if s < BigRational::one() {
            e -= 1;
        } else {
            break;
        }
    }
    let shift = digits as i64 - 1 - e;
    let y = if shift >= 0 {
        x * BigRational::from_integer(pow10(shift as u32))
    } else {
        x / BigRational::from_integer(pow10((-shift) as u32))
    };
    let mut m = match mode {
        Rounding::Down => y.numer().div_floor(y.denom()),
        Rounding::Up => y.numer().div_ceil(y.denom()),
    };
    let mut shift = shift;
    if m == pow10(digits as u32) {
        m = pow10(digits as u32 - 1);
        shift -= 1;
        e += 1;
    }
    let s = m.to_string();
    let s = s.as_str();
    if (-6..=24).contains(&e) {
        if shift <= 0 {
            let zeros = "0".repeat((-shift) as usize);
            format!("{s}{zeros}")
        } else {
            let shift = shift as usize;
            let text = if s.len() <= shift {
                format!("0.{}{}", "0".repeat(shift - s.len()), s)
            } else {
                format!("{}.{}", &s[..s.len() - shift], &s[s.len() - shift..])
            };
            trim_fraction(text)
        }
    } else {
        let mant = if s.len() > 1 { trim_fraction(format!("{}.{}", &s[..1], &s[1..])) } else { s.to_string() };
        format!("{mant}e{e}")
    }
}

fn trim_fraction(s: String) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        t.to_string()
    } else {
        s
    }
}

/// Parses a decimal string such as `1.25`, `-3`, `2.5e-7` exactly.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let e = exp - frac.len() as i64;
    if e.unsigned_abs() > 100_000 {
        return None;
    }
    let mut r = if e >= 0 {
        BigRational::from_integer(digits * pow10(e as u32))
    } else {
        BigRational::new(digits, pow10((-e) as u32))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

/// The rational with the smallest denominator in the open interval
/// `(lo, hi)`. It is unique and also has the smallest numerator.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo < hi, "empty interval");
    let n = lo.floor();
    if &(&n + BigInt::one()) < hi {
        return n + BigInt::one();
    }
    let (a, b) = (lo - &n, hi - &n);
    if a.is_zero() {
        let k = b.recip().floor() + BigInt::one();
        return n + k.recip();
    }
    let inner = simplest_between(&b.recip(), &a.recip());
    n + inner.recip()
}

/// Parses `P/Q` or a decimal string exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| BigRational::new(p, q))
        }
        None => parse_decimal(s),
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(DEFAULT_DIGITS);
        write!(f, "[{}, {}]", self.lo_decimal(digits), self.hi_decimal(digits))
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Enclosure", 2)?;
        st.serialize_field("lo", &self.lo_decimal(DEFAULT_DIGITS))?;
        st.serialize_field("hi", &self.hi_decimal(DEFAULT_DIGITS))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&r(1, 3), &r(1, 2)), r(2, 5));
        assert_eq!(simplest_between(&r(0, 1), &r(1, 3)), r(1, 4));
        assert_eq!(simplest_between(&r(1, 2), &r(1, 1)), r(2, 3));
        assert_eq!(simplest_between(&r(3, 2), &r(7, 2)), r(2, 1));
        assert_eq!(simplest_between(&r(2, 1), &r(3, 1)), r(5, 2));
        assert_eq!(simplest_between(&r(355, 113), &r(22, 7)), r(377, 120));
    }

    #[test]
    fn decimal_rounds_outward() {
        let e = Enclosure::new(r(1, 3), r(2, 3));
        assert_eq!(e.lo_decimal(5), "0.33333");
        assert_eq!(e.hi_decimal(5), "0.66667");
        assert_eq!(Enclosure::exact(r(5, 2)).lo_decimal(10), "2.5");
        assert_eq!(to_decimal(&r(999999, 1000000), 3, Rounding::Up), "1");
        assert_eq!(to_decimal(&r(1, 3), 3, Rounding::Down), "0.333");
    }

    #[test]
    fn tiny_and_huge_use_exponents() {
        let tiny = BigRational::new(1.into(), pow10(40));
        assert_eq!(to_decimal(&tiny, 3, Rounding::Down), "1e-40");
        let big = BigRational::from_integer(pow10(30) * 7);
        assert_eq!(to_decimal(&big, 3, Rounding::Up), "7e30");
        assert_eq!(to_decimal(&-r(1, 3), 3, Rounding::Down), "-0.334");
    }

    #[test]
    fn decimal_parse_round_trip() {
        assert_eq!(parse_decimal("1.25").unwrap(), r(5, 4));
        assert_eq!(parse_decimal("-2e-3").unwrap(), r(-1, 500));
        assert_eq!(parse_decimal("7").unwrap(), r(7, 1));
        assert!(parse_decimal("abc").is_none());
        let x = parse_decimal("1.2345678901234567890123").unwrap();
        let s = to_decimal(&x, 23, Rounding::Down);
        assert_eq!(parse_decimal(&s).unwrap(), x);
    }
}
