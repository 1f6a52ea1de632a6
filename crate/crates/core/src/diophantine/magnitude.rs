//! Positive integers that may be far too large to store.
//!
//! A [`Magnitude`] is exact while it fits the bit budget, then carried as an
//! enclosure of `ln x`, then of `ln ln x`. Anything beyond that is reported
//! as unrepresentable.

use crate::error::{Error, Result};
use crate::interval::Interval;
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

/// Exact integers are kept up to this many bits.
pub const DEFAULT_BIT_BUDGET: u64 = 1_000_000;

/// An enclosure of `ln x` (level 1) or `ln ln x` (level 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMagnitude {
    pub level: u8,
    pub value: Interval,
}

impl LogMagnitude {
    pub fn ln(value: Interval) -> Self {
        LogMagnitude { level: 1, value }
    }

    pub fn lnln(value: Interval) -> Self {
        LogMagnitude { level: 2, value }
    }
}

impl Serialize for LogMagnitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LogMagnitude", 2)?;
        let key = if self.level == 1 { "ln" } else { "lnln" };
        st.serialize_field(key, &format!("{:e}", self.value.mid()))?;
        st.serialize_field("err", &format!("{:e}", self.value.radius()))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Magnitude {
    Exact(BigUint),
    Log(LogMagnitude),
}

impl Magnitude {
    pub fn exact(n: impl Into<BigUint>) -> Self {
        Magnitude::Exact(n.into())
    }

    pub fn from_ln(ln: Interval) -> Result<Self> {
        if ln.is_finite() {
            Ok(Magnitude::Log(LogMagnitude::ln(ln)))
        } else {
            let lnln = ln.ln();
            Self::from_lnln(lnln)
        }
    }

    pub fn from_lnln(lnln: Interval) -> Result<Self> {
        if lnln.is_finite() {
            Ok(Magnitude::Log(LogMagnitude::lnln(lnln)))
        } else {
            Err(Error::unrep("magnitude beyond the ln ln range"))
        }
    }

    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            Magnitude::Exact(n) => Some(n),
            Magnitude::Log(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Magnitude::Exact(_))
    }

    fn is_zero(&self) -> bool {
        matches!(self, Magnitude::Exact(n) if n.is_zero())
    }

    fn is_one(&self) -> bool {
        matches!(self, Magnitude::Exact(n) if n.is_one())
    }

    /// Enclosure of `ln x` (`x ≥ 1`), when finite in `f64`.
    pub fn ln(&self) -> Option<Interval> {
        match self {
            Magnitude::Exact(n) if n.is_zero() => None,
            Magnitude::Exact(n) => Some(Interval::ln_biguint(n)),
            Magnitude::Log(l) if l.level == 1 => Some(l.value),
            Magnitude::Log(l) => {
                let v = l.value.exp();
                v.is_finite().then_some(v)
            }
        }
    }

    /// Enclosure of `ln ln x` for `x ≥ 2`.
    pub fn lnln(&self) -> Option<Interval> {
        match self {
            Magnitude::Log(l) if l.level == 2 => Some(l.value),
            _ => {
                let l = self.ln()?;
                (l.lo > 0.0).then(|| l.ln())
            }
        }
    }

    /// Enclosure of `x` itself, when finite in `f64`.
    pub fn value(&self) -> Option<Interval> {
        match self {
            Magnitude::Exact(n) => {
                let v = Interval::from_biguint(n);
                v.is_finite().then_some(v)
            }
            _ => {
                let v = self.ln()?.exp();
                v.is_finite().then_some(v)
            }
        }
    }

    /// Enclosure of `ln x`, demanding it be finite.
    pub fn ln_required(&self) -> Result<Interval> {
        self.ln().ok_or_else(|| Error::unrep("ln of magnitude not finite"))
    }

    /// `a·q1 + q0` with `q0 ≤ q1`, the convergent recurrence step.
    pub fn mul_add(a: &Magnitude, q1: &Magnitude, q0: &Magnitude, budget: u64) -> Result<Magnitude> {
        if let (Magnitude::Exact(a), Magnitude::Exact(x), Magnitude::Exact(y)) = (a, q1, q0) {
            if a.bits() + x.bits() <= budget {
                return Ok(Magnitude::Exact(a * x + y));
            }
        }
        if q1.is_zero() {
            return Ok(q0.clone());
        }
        if a.is_zero() {
            return Ok(q0.clone());
        }
        // ln(a·q1), preferring level 1
        let prod_ln = match (a.ln(), q1.ln()) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        if let Some(l) = prod_ln.filter(|l| l.is_finite()) {
            let corr = match q0.ln() {
                _ if q0.is_zero() => Interval::point(0.0),
                Some(l0) => (l0 - l).exp().ln_1p(),
                None => return Err(Error::unrep("recurrence correction term not representable")),
            };
            return Magnitude::from_ln(l + Interval::new(0.0_f64.max(corr.lo), corr.hi));
        }
        // level 2: ln ln(a·q1) = ln(ln a + ln q1)
        let lla = if a.is_one() { None } else { a.lnln() };
        let llq = q1.lnln().ok_or_else(|| Error::unrep("ln ln of convergent denominator"))?;
        let ll = match lla {
            Some(x) => x.log_add_exp(&llq),
            None => llq,
        };
        // adding q0 ≤ q1 ≤ a·q1 changes ln by at most ln 2
        let bump = (Interval::ln2() * (-ll).exp()).ln_1p();
        Magnitude::from_lnln(ll + Interval::new(0.0, bump.hi))
    }

    /// `base^e`, exact when both are exact and the result fits the budget.
    pub fn pow(base: &BigUint, e: &Magnitude, budget: u64) -> Result<Magnitude> {
        if base.is_zero() || base.is_one() {
            return Ok(Magnitude::Exact(base.clone()));
        }
        if let Magnitude::Exact(n) = e {
            if let Some(k) = n.to_u64() {
                if k.saturating_mul(base.bits()) <= budget {
                    return Ok(Magnitude::Exact(num_traits::pow(base.clone(), k as usize)));
                }
            }
        }
        let lb = Interval::ln_biguint(base);
        if let Some(v) = e.value() {
            let l = v * lb;
            if l.is_finite() {
                return Magnitude::from_ln(l);
            }
        }
        let le = e.ln().ok_or_else(|| Error::unrep("exponent beyond ln range"))?;
        Magnitude::from_lnln(le + lb.ln())
    }

    /// `EXP_k(b)`: `1` for `k = 0`, `b^{EXP_{k-1}(b)}` after.
    pub fn tower(base: &BigUint, k: usize, budget: u64) -> Result<Magnitude> {
        let mut m = Magnitude::Exact(BigUint::one());
        for _ in 0..k {
            m = Magnitude::pow(base, &m, budget)?;
        }
        Ok(m)
    }

    /// `x!` with the Robbins–Stirling enclosure once exact arithmetic is
    /// out of budget.
    pub fn factorial(x: &Magnitude, budget: u64, bounds: StirlingBounds) -> Result<Magnitude> {
        if let Magnitude::Exact(n) = x {
            if let Some(k) = n.to_u64() {
                // ln k! < k ln k, in bits
                let est = (k as f64) * (k.max(2) as f64).log2();
                if est <= budget as f64 {
                    let mut acc = BigUint::one();
                    for i in 2..=k {
                        acc *= i;
                    }
                    return Ok(Magnitude::Exact(acc));
                }
            }
        }
        let ln_x = x.ln_required()?;
        if let Some(v) = x.value() {
            let l = ln_factorial(v, ln_x, bounds);
            if l.is_finite() {
                return Magnitude::from_ln(l);
            }
        }
        // ln ln x! = ln x + ln(ln x − 1 + (½ ln 2πx + r)/x)
        let inv = (-ln_x).exp();
        let half_log = (Interval::pi() * Interval::point(2.0)).ln() + ln_x;
        let inner = ln_x - Interval::point(1.0) + (half_log * Interval::point(0.5) + Interval::new(0.0, 1.0)) * inv;
        Magnitude::from_lnln(ln_x + inner.ln())
    }

    /// `⌊β^q / q⌋` for rational `β > 1`.
    pub fn targeted_term(beta: &BigRational, q: &Magnitude, budget: u64) -> Result<Magnitude> {
        if let Magnitude::Exact(qv) = q {
            if let Some(k) = qv.to_u64() {
                let num_bits = beta.numer().bits();
                if k.saturating_mul(num_bits) <= budget && k > 0 {
                    let num = num_traits::pow(beta.numer().magnitude().clone(), k as usize);
                    let den = num_traits::pow(beta.denom().magnitude().clone(), k as usize) * qv;
                    return Ok(Magnitude::Exact(num.div_floor(&den)));
                }
            }
        }
        let lb = Interval::from_rational(beta).ln();
        let ln_q = q.ln_required()?;
        if let Some(qv) = q.value() {
            let l = qv * lb - ln_q;
            if l.is_finite() && l.lo > 2.0 {
                // ⌊y⌋ ∈ (y − 1, y], ln(y − 1) = ln y + ln(1 − 1/y)
                let low = (-(-l).exp()).ln_1p();
                return Magnitude::from_ln(Interval::new((l + low).lo, l.hi));
            }
        }
        // ln ln: ln(q ln β − ln q + δ) = ln q + ln(ln β − (ln q − δ)/q), δ ∈ [−1, 0]
        let inv = (-ln_q).exp();
        let inner = lb - (ln_q + Interval::new(0.0, 1.0)) * inv;
        Magnitude::from_lnln(ln_q + inner.ln())
    }

    /// Order by value where decidable.
    pub fn definitely_greater(&self, n: &BigUint) -> bool {
        match self {
            Magnitude::Exact(m) => m > n,
            _ => match (self.ln(), n.is_zero()) {
                (_, true) => true,
                (Some(l), false) => l.lo > Interval::ln_biguint(n).hi,
                (None, false) => true,
            },
        }
    }
}

/// Which enclosure of `ln n!` to use once exact factorials are out of budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StirlingBounds {
    /// `n ln n − n + ½ ln(2πn) + r`, `1/(12n+1) < r < 1/(12n)`.
    #[default]
    Robbins,
    /// `n ln n − n ≤ ln n! ≤ (n − 1) ln n`.
    Elementary,
}

/// Enclosure of `ln n!` given enclosures of `n ≥ 1` and `ln n`.
pub fn ln_factorial(n: Interval, ln_n: Interval, bounds: StirlingBounds) -> Interval {
    let one = Interval::point(1.0);
    match bounds {
        StirlingBounds::Robbins => {
            let base = n * ln_n - n + (Interval::pi() * Interval::point(2.0) * n).ln() * Interval::point(0.5);
            let twelve = Interval::point(12.0) * n;
            let r = Interval::new((one / (twelve + one)).lo, (one / twelve).hi);
            base + r
        }
        StirlingBounds::Elementary => {
            let lo = n * ln_n - n;
            let hi = (n - one) * ln_n;
            Interval::new(lo.lo, hi.hi)
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Exact(n) => {
                let s = n.to_string();
                if s.len() <= 40 {
                    write!(f, "{s}")
                } else {
                    write!(f, "{}...({} digits)", &s[..12], s.len())
                }
            }
            Magnitude::Log(l) if l.level == 1 => write!(f, "exp({:.12e})", l.value.mid()),
            Magnitude::Log(l) => write!(f, "exp(exp({:.12e}))", l.value.mid()),
        }
    }
}

impl Serialize for Magnitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Magnitude::Exact(n) => s.serialize_str(&n.to_string()),
            Magnitude::Log(l) => l.serialize(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(n: u64) -> Magnitude {
        Magnitude::exact(BigUint::from(n))
    }

    #[test]
    fn exact_recurrence_stays_exact() {
        let m = Magnitude::mul_add(&ex(4), &ex(7), &ex(4), DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(m, ex(32));
    }

    #[test]
    fn log_path_contains_exact_value() {
        let a = BigUint::from(10u32).pow(300);
        let q1 = BigUint::from(10u32).pow(200) + 7u32;
        let q0 = BigUint::from(123456u32);
        let exact = &a * &q1 + &q0;
        let m = Magnitude::mul_add(&Magnitude::Exact(a), &Magnitude::Exact(q1), &Magnitude::Exact(q0), 100).unwrap();
        let l = m.ln().unwrap();
        let e = Interval::ln_biguint(&exact);
        assert!(l.lo <= e.hi && e.lo <= l.hi, "{l} vs {e}");
        assert!(l.width() < 1e-10);
    }

    #[test]
    fn tower_levels() {
        let ten = BigUint::from(10u32);
        assert_eq!(Magnitude::tower(&ten, 0, DEFAULT_BIT_BUDGET).unwrap(), ex(1));
        assert_eq!(Magnitude::tower(&ten, 1, DEFAULT_BIT_BUDGET).unwrap(), ex(10));
        assert_eq!(Magnitude::tower(&ten, 2, DEFAULT_BIT_BUDGET).unwrap(), Magnitude::exact(ten.pow(10)));
        let t2 = Magnitude::tower(&ten, 3, DEFAULT_BIT_BUDGET).unwrap();
        let l = t2.ln().unwrap();
        assert!(
            l.contains(1e10 * std::f64::consts::LN_10)
                || (l.mid() / (1e10 * std::f64::consts::LN_10) - 1.0).abs() < 1e-14
        );
        let t3 = Magnitude::tower(&ten, 4, DEFAULT_BIT_BUDGET).unwrap();
        assert!(matches!(t3, Magnitude::Log(LogMagnitude { level: 2, .. })));
        assert!(Magnitude::tower(&ten, 5, DEFAULT_BIT_BUDGET).is_err());
    }

    #[test]
    fn stirling_brackets_exact_factorials() {
        for n in [3u64, 10, 50, 170] {
            let mut f = BigUint::one();
            for i in 2..=n {
                f *= i;
            }
            let exact = Interval::ln_biguint(&f);
            let nv = Interval::point(n as f64);
            let ln_n = nv.ln();
            let robbins = ln_factorial(nv, ln_n, StirlingBounds::Robbins);
            let elem = ln_factorial(nv, ln_n, StirlingBounds::Elementary);
            assert!(robbins.lo <= exact.hi && exact.lo <= robbins.hi, "n={n}");
            assert!(elem.lo <= exact.lo && exact.hi <= elem.hi, "n={n}");
            assert!(elem.lo <= robbins.lo && robbins.hi <= elem.hi, "n={n}");
            assert!(robbins.width() < 1e-3);
        }
    }

    #[test]
    fn factorial_switches_to_logs() {
        let f = Magnitude::factorial(&ex(3_628_800), DEFAULT_BIT_BUDGET, StirlingBounds::Robbins).unwrap();
        let l = f.ln().unwrap();
        // lgamma(3628801)
        assert!((l.mid() - 51_182_100.816_321_27).abs() < 1e-3, "{}", l.mid());
        let exact = Magnitude::factorial(&ex(20), DEFAULT_BIT_BUDGET, StirlingBounds::Robbins).unwrap();
        assert_eq!(exact, ex(2_432_902_008_176_640_000));
    }

    #[test]
    fn targeted_terms() {
        let two = BigRational::from_integer(2.into());
        assert_eq!(Magnitude::targeted_term(&two, &ex(5), DEFAULT_BIT_BUDGET).unwrap(), ex(6));
        assert_eq!(Magnitude::targeted_term(&two, &ex(32), DEFAULT_BIT_BUDGET).unwrap(), ex(134_217_728));
        let big = Magnitude::targeted_term(&two, &ex(4_294_967_301), DEFAULT_BIT_BUDGET).unwrap();
        let l = big.ln().unwrap();
        let expect = 4_294_967_301.0 * std::f64::consts::LN_2 - (4_294_967_301f64).ln();
        assert!((l.mid() - expect).abs() < 1e-5);
    }
}
