//! β-numbers: certified roots of Parry digit equations, greedy expansions
//! and the orbit of 1 under `T_β(x) = βx mod 1`.

mod greedy;
mod poly;
mod root;
mod series;

pub use greedy::{
    extremal_orbit_check, greedy_digits, ExtremalReport, GreedyExpansion, OrbitVerdict, RefinableBeta, MAX_ORBIT_BITS,
};
pub use poly::{IntPoly, RatPoly};
pub use root::{bits_for, AlgebraicRoot, MAX_ROOT_BITS};
pub use series::{
    positive_root_series, DigitSource, PaddedDigits, SeriesRoot, TruncationStep, UpperMechanicalDigits,
    DEFAULT_MAX_TRUNCATION,
};

pub use crate::enclosure::Enclosure;

use crate::diophantine::ContinuedFraction;
use crate::error::{Error, Result};
use crate::words::{mechanical_prefix, EventuallyPeriodicWord, FiniteWord, Kind, Slope, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

/// The expansion `d_β(1)`.
#[derive(Debug, Clone)]
pub enum ParryExpansion {
    /// `a_1 … a_q` followed by zeros.
    Finite(FiniteWord),
    /// An eventually periodic infinite expansion.
    Periodic(EventuallyPeriodicWord),
    /// `s'_{α,0} = ⌈α⌉ c_α` for an irrational slope `α`.
    Sturmian(Arc<ContinuedFraction>),
}

impl ParryExpansion {
    /// The first `n` digits.
    pub fn prefix(&self, n: usize) -> Result<FiniteWord> {
        match self {
            ParryExpansion::Finite(w) => {
                Ok(FiniteWord::new((0..n).map(|i| w.letters.get(i).copied().unwrap_or(0)).collect()))
            }
            ParryExpansion::Periodic(w) => Ok(w.prefix(n)),
            ParryExpansion::Sturmian(cf) => {
                mechanical_prefix(&Slope::Irrational(cf.clone()), &BigRational::zero(), n, Kind::Upper)
            }
        }
    }

    /// The expansion as a comparable word, when it is eventually periodic.
    pub fn as_word(&self) -> Option<Word> {
        match self {
            ParryExpansion::Finite(w) => Some(Word::Finite(w.clone())),
            ParryExpansion::Periodic(w) => Some(Word::Periodic(w.clone())),
            ParryExpansion::Sturmian(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ParryExpansion::Finite(_))
    }

    fn digit_source(&self) -> Arc<dyn DigitSource> {
        match self {
            ParryExpansion::Finite(w) => Arc::new(PaddedDigits(w.letters.clone())),
            ParryExpansion::Periodic(w) => Arc::new(w.clone()),
            ParryExpansion::Sturmian(cf) => Arc::new(UpperMechanicalDigits(Slope::Irrational(cf.clone()))),
        }
    }
}

impl fmt::Display for ParryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParryExpansion::Finite(w) => write!(f, "{w}"),
            ParryExpansion::Periodic(w) => write!(f, "{w}"),
            ParryExpansion::Sturmian(cf) => match self.prefix(24) {
                Ok(p) => write!(f, "{p}... (upper mechanical word of {cf})"),
                Err(_) => write!(f, "upper mechanical word of {cf}"),
            },
        }
    }
}

impl Serialize for ParryExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ParryExpansion", 2)?;
        match self {
            ParryExpansion::Finite(w) => {
                st.serialize_field("kind", "finite")?;
                st.serialize_field("digits", &w.to_string())?;
            }
            ParryExpansion::Periodic(w) => {
                st.serialize_field("kind", "periodic")?;
                st.serialize_field("digits", w)?;
            }
            ParryExpansion::Sturmian(_) => {
                st.serialize_field("kind", "sturmian")?;
                let p = self.prefix(64).map(|w| w.to_string()).unwrap_or_default();
                st.serialize_field("digits", &p)?;
            }
        }
        st.end()
    }
}

/// How a β is pinned down.
#[derive(Debug, Clone)]
pub enum BetaRoot {
    Algebraic(AlgebraicRoot),
    Series(SeriesRoot),
}

/// A β together with its expansion of 1.
#[derive(Debug, Clone)]
pub struct BetaNumber {
    beta: Enclosure,
    expansion: ParryExpansion,
    root: BetaRoot,
}

impl BetaNumber {
    pub(crate) fn new(root: BetaRoot, expansion: ParryExpansion) -> Self {
        let beta = match &root {
            BetaRoot::Algebraic(r) => r.enclosure(),
            BetaRoot::Series(s) => s.beta(),
        };
        BetaNumber { beta, expansion, root }
    }

    pub fn beta(&self) -> &Enclosure {
        &self.beta
    }

    pub fn expansion(&self) -> &ParryExpansion {
        &self.expansion
    }

    pub fn root(&self) -> &BetaRoot {
        &self.root
    }

    /// Defining polynomial, for algebraic β.
    pub fn polynomial(&self) -> Option<&IntPoly> {
        match &self.root {
            BetaRoot::Algebraic(r) => Some(r.poly()),
            BetaRoot::Series(_) => None,
        }
    }

    /// Refines β to width at most `tol`.
    pub fn refine(&mut self, tol: &BigRational) -> Result<()> {
        self.refine_beta_bits(bits_for(tol)?)
    }
}

impl RefinableBeta for BetaNumber {
    fn beta_enclosure(&self) -> Enclosure {
        self.beta.clone()
    }

    fn refine_beta_bits(&mut self, bits: u64) -> Result<()> {
        match &mut self.root {
            BetaRoot::Algebraic(r) => {
                r.refine_bits(bits)?;
                self.beta = r.enclosure();
            }
            BetaRoot::Series(s) => {
                s.refine_beta_bits(bits)?;
                self.beta = s.beta();
            }
        }
        Ok(())
    }

    fn exact_root_test(&self, q: &IntPoly) -> Option<bool> {
        match &self.root {
            BetaRoot::Algebraic(r) => Some(r.is_root_of(q)),
            BetaRoot::Series(_) => None,
        }
    }
}

impl Serialize for BetaNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BetaNumber", 3)?;
        st.serialize_field("beta", &self.beta)?;
        st.serialize_field("expansion", &self.expansion)?;
        st.serialize_field("polynomial", &self.polynomial())?;
        st.end()
    }
}

/// β with `1 = Σ_{n=1}^{q} a_n β^{-n}`, refined to width `tol`.
///
/// The enclosure of `ζ = 1/β` is [`Enclosure::recip`] of the result.
pub fn positive_root_finite(digits: &[u32], tol: &BigRational) -> Result<AlgebraicRoot> {
    let last = digits.iter().rposition(|&d| d != 0).ok_or_else(|| Error::pre("digit string is empty or all zero"))?;
    let digits = &digits[..=last];
    if digits[0] == 0 {
        return Err(Error::pre("first digit must be at least 1"));
    }
    if digits == [1] {
        return Err(Error::pre("digits 1 give beta = 1"));
    }
    let max = *digits.iter().max().unwrap();
    let mut root = AlgebraicRoot::isolate(IntPoly::parry(digits), &BigInt::from(digits[0]), &BigInt::from(max + 1))?;
    root.refine(tol)?;
    Ok(root)
}

/// `d_β(1−)`: `(a_1 … a_{q−1}(a_q − 1))^ω` for a finite expansion, the
/// expansion itself otherwise.
pub fn d_beta_one_minus(expansion: &ParryExpansion) -> Result<ParryExpansion> {
    match expansion {
        ParryExpansion::Finite(w) => {
            let last =
                w.letters.iter().rposition(|&d| d != 0).ok_or_else(|| Error::pre("expansion has no nonzero digit"))?;
            let mut per = w.letters[..=last].to_vec();
            per[last] -= 1;
            Ok(ParryExpansion::Periodic(EventuallyPeriodicWord::purely_periodic(per)?))
        }
        other => Ok(other.clone()),
    }
}

/// The root `β_n ∈ (1, 2)` of `x^n − x^{n−1} − 1`.
pub fn atzero_root(n: usize, tol: &BigRational) -> Result<AlgebraicRoot> {
    if n < 2 {
        return Err(Error::pre("atzero_root needs n >= 2"));
    }
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = 1.into();
    c[1] = (-1).into();
    c[n] = (-1).into();
    let mut root = AlgebraicRoot::isolate(IntPoly::new(c), &1.into(), &2.into())?;
    root.refine(tol)?;
    Ok(root)
}

/// Series root for an expansion, as a [`BetaNumber`].
pub fn beta_from_series(expansion: ParryExpansion, digit_bound: u32, tol: &BigRational) -> Result<BetaNumber> {
    let source = expansion.digit_source();
    let zeta_tol = tol / BigInt::from((digit_bound as u64 + 1).pow(2));
    let s = positive_root_series(source, 32, digit_bound, &zeta_tol, DEFAULT_MAX_TRUNCATION)?;
    Ok(BetaNumber::new(BetaRoot::Series(s), expansion))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;

    fn tol(bits: usize) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << bits)
    }

    #[test]
    fn finite_root_examples() {
        let phi = positive_root_finite(&[1, 1], &tol(60)).unwrap();
        let zeta = phi.enclosure().recip();
        let target = (5f64.sqrt() - 1.0) / 2.0;
        assert!((zeta.mid_f64() - target).abs() < 1e-15);
        let q = positive_root_finite(&[1, 0, 1, 0, 1], &tol(60)).unwrap();
        let m = q.enclosure().mid_f64();
        assert!(m > 1.5 && m < 1.6);
        let two = positive_root_finite(&[2], &tol(60)).unwrap();
        assert_eq!(two.exact_value(), Some(&BigRational::from_integer(2.into())));
        assert!(positive_root_finite(&[1], &tol(10)).is_err());
        assert!(positive_root_finite(&[0, 1], &tol(10)).is_err());
    }

    #[test]
    fn tighter_tolerance_nests() {
        let a = positive_root_finite(&[1, 0, 1, 0, 1], &BigRational::new(1.into(), 1_000_000.into())).unwrap();
        let b = positive_root_finite(&[1, 0, 1, 0, 1], &BigRational::new(1.into(), 1_000_000_000.into())).unwrap();
        assert!(a.enclosure().contains_enclosure(&b.enclosure()));
        let p = a.poly();
        assert_ne!(p.sign_at_rational(&a.enclosure().lo), p.sign_at_rational(&a.enclosure().hi));
    }

    #[test]
    fn one_minus_examples() {
        let e = ParryExpansion::Finite("11".parse().unwrap());
        assert_eq!(d_beta_one_minus(&e).unwrap().to_string(), "(10)^w");
        let e = ParryExpansion::Finite("2".parse().unwrap());
        assert_eq!(d_beta_one_minus(&e).unwrap().to_string(), "(1)^w");
        let p = ParryExpansion::Periodic("1(10)^w".parse().unwrap());
        assert_eq!(d_beta_one_minus(&p).unwrap().to_string(), "1(10)^w");
    }

    #[test]
    fn atzero_examples() {
        let b2 = atzero_root(2, &tol(60)).unwrap();
        assert!((b2.enclosure().mid_f64() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        let b3 = atzero_root(3, &tol(60)).unwrap();
        assert!((b3.enclosure().mid_f64() - 1.465_571_231_876_768).abs() < 1e-14);
        let big = atzero_root(10_000, &tol(40)).unwrap();
        assert!(big.enclosure().lo > BigRational::one());
    }
}
