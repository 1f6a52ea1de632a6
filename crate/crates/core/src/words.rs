//! Mechanical, Christoffel and central words, lexicographic order and
//! Parry admissibility.
//!
//! Letters are raw integers. Words over `{0,1}` are mapped onto a two-letter
//! alphabet `{b-1, b}` explicitly with [`FiniteWord::remap`].

use crate::diophantine::ContinuedFraction;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Two consecutive letters `a = b - 1 < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Alphabet {
    pub a: u32,
    pub b: u32,
}

impl Alphabet {
    pub fn new(b: u32) -> Result<Self> {
        if b == 0 {
            return Err(Error::pre("alphabet letter b must be positive"));
        }
        Ok(Alphabet { a: b - 1, b })
    }

    pub fn binary() -> Self {
        Alphabet { a: 0, b: 1 }
    }
}

/// Which rounding a mechanical word uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `floor`, the word `s_{α,ρ}`.
    Lower,
    /// `ceil`, the word `s'_{α,ρ}`.
    Upper,
}

/// A finite word, compared as its `0^ω` extension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteWord {
    pub letters: Vec<u32>,
    pub alphabet: Option<Alphabet>,
}

impl FiniteWord {
    pub fn new(letters: Vec<u32>) -> Self {
        FiniteWord { letters, alphabet: None }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.letters
    }

    /// Applies `0 ↦ a`, `1 ↦ b` to a binary word.
    pub fn remap(&self, alphabet: Alphabet) -> FiniteWord {
        let letters = self.letters.iter().map(|&c| if c == 0 { alphabet.a } else { alphabet.b }).collect();
        FiniteWord { letters, alphabet: Some(alphabet) }
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FiniteWord { letters, alphabet: self.alphabet.or(other.alphabet) }
    }

    pub fn repeat(&self, k: usize) -> FiniteWord {
        FiniteWord { letters: self.letters.repeat(k), alphabet: self.alphabet }
    }

    pub fn reversed(&self) -> FiniteWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        FiniteWord { letters, alphabet: self.alphabet }
    }

    pub fn letter_sum(&self) -> u64 {
        self.letters.iter().map(|&c| c as u64).sum()
    }

    /// True when the word is not a proper power of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.len();
        let p = minimal_period(&self.letters);
        n > 0 && (p == n || n % p != 0)
    }
}

impl From<Vec<u32>> for FiniteWord {
    fn from(v: Vec<u32>) -> Self {
        FiniteWord::new(v)
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[u32]) -> fmt::Result {
    if letters.iter().all(|&c| c < 10) {
        for c in letters {
            write!(f, "{c}")?;
        }
        Ok(())
    } else {
        let parts: Vec<String> = letters.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn parse_letters(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        if inner.trim().is_empty() {
            return Ok(vec![]);
        }
        return inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::pre(format!("bad letter {t:?}"))))
            .collect();
    }
    s.chars().map(|c| c.to_digit(10).ok_or_else(|| Error::pre(format!("bad letter {c:?} in word")))).collect()
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters)
    }
}

impl FromStr for FiniteWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(FiniteWord::new(parse_letters(s)?))
    }
}

impl Serialize for FiniteWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Smallest `p` with `w[i] = w[i+p]` wherever both exist.
fn minimal_period(w: &[u32]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    for i in 1..n {
        let mut k = fail[i - 1];
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

/// `pre · per^ω` in canonical form: minimal period, then minimal preperiod.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicWord {
    pre: Vec<u32>,
    per: Vec<u32>,
}

impl EventuallyPeriodicWord {
    pub fn new(pre: Vec<u32>, per: Vec<u32>) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::pre("period of an eventually periodic word must be nonempty"));
        }
        let mut pre = pre;
        let mut per = per;
        let p = minimal_period(&per);
        if per.len() % p == 0 {
            per.truncate(p);
        }
        while let (Some(&x), Some(&y)) = (pre.last(), per.last()) {
            if x != y {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Ok(EventuallyPeriodicWord { pre, per })
    }

    pub fn purely_periodic(per: Vec<u32>) -> Result<Self> {
        Self::new(vec![], per)
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.pre
    }

    pub fn period(&self) -> &[u32] {
        &self.per
    }

    pub fn letter(&self, i: usize) -> u32 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> FiniteWord {
        FiniteWord::new((0..n).map(|i| self.letter(i)).collect())
    }

    /// The word shifted left by `k` letters.
    pub fn shift(&self, k: usize) -> EventuallyPeriodicWord {
        if k <= self.pre.len() {
            return EventuallyPeriodicWord::new(self.pre[k..].to_vec(), self.per.clone()).unwrap();
        }
        let r = (k - self.pre.len()) % self.per.len();
        let mut per = self.per.clone();
        per.rotate_left(r);
        EventuallyPeriodicWord::new(vec![], per).unwrap()
    }
}

impl fmt::Display for EventuallyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.pre)?;
        write!(f, "(")?;
        write_letters(f, &self.per)?;
        write!(f, ")^w")
    }
}

impl FromStr for EventuallyPeriodicWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_suffix("^w")
            .or_else(|| s.strip_suffix("^ω"))
            .ok_or_else(|| Error::pre("periodic word must end in ^w"))?;
        let open = body.find('(').ok_or_else(|| Error::pre("periodic word needs (period)"))?;
        let per = body[open + 1..].strip_suffix(')').ok_or_else(|| Error::pre("unbalanced parentheses in word"))?;
        EventuallyPeriodicWord::new(parse_letters(&body[..open])?, parse_letters(per)?)
    }
}

impl Serialize for EventuallyPeriodicWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EventuallyPeriodicWord", 2)?;
        st.serialize_field("pre", &self.pre)?;
        st.serialize_field("per", &self.per)?;
        st.end()
    }
}

/// Either kind of word, for operations that accept both.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Word {
    Finite(FiniteWord),
    Periodic(EventuallyPeriodicWord),
}

impl Word {
    /// Letter `i` of the infinite word (`0^ω`-extended when finite).
    pub fn letter(&self, i: usize) -> u32 {
        match self {
            Word::Finite(w) => w.letters.get(i).copied().unwrap_or(0),
            Word::Periodic(w) => w.letter(i),
        }
    }

    /// Index from which the word is periodic, and the period length.
    fn tail(&self) -> (usize, usize) {
        match self {
            Word::Finite(w) => (w.len(), 1),
            Word::Periodic(w) => (w.pre.len(), w.per.len()),
        }
    }

    pub fn first(&self) -> Option<u32> {
        match self {
            Word::Finite(w) => w.letters.first().copied(),
            Word::Periodic(w) => Some(w.letter(0)),
        }
    }

    fn shift(&self, k: usize) -> Word {
        match self {
            Word::Finite(w) => Word::Finite(FiniteWord::new(w.letters.get(k..).unwrap_or(&[]).to_vec())),
            Word::Periodic(w) => Word::Periodic(w.shift(k)),
        }
    }

    /// Index of the first letter where the two infinite words differ.
    pub fn first_difference(&self, other: &Word) -> Option<usize> {
        let (h1, p1) = self.tail();
        let (h2, p2) = other.tail();
        let horizon = h1.max(h2) + p1.lcm(&p2);
        (0..horizon).find(|&i| self.letter(i) != other.letter(i))
    }
}

impl From<FiniteWord> for Word {
    fn from(w: FiniteWord) -> Self {
        Word::Finite(w)
    }
}

impl From<EventuallyPeriodicWord> for Word {
    fn from(w: EventuallyPeriodicWord) -> Self {
        Word::Periodic(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Finite(w) => w.fmt(f),
            Word::Periodic(w) => w.fmt(f),
        }
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.contains('(') {
            Ok(Word::Periodic(s.parse()?))
        } else {
            Ok(Word::Finite(s.parse()?))
        }
    }
}

/// Lexicographic order on the `0^ω` extensions.
pub fn lex_compare(u: &Word, v: &Word) -> Ordering {
    match u.first_difference(v) {
        None => Ordering::Equal,
        Some(i) => u.letter(i).cmp(&v.letter(i)),
    }
}

/// Every proper suffix is strictly smaller than the word itself.
pub fn is_parry_admissible(w: &Word) -> Result<bool> {
    let shifts = match w {
        Word::Finite(f) => {
            if f.is_empty() {
                return Err(Error::pre("admissibility of the empty word"));
            }
            f.len()
        }
        Word::Periodic(p) => p.pre.len() + p.per.len(),
    };
    if w.first() == Some(0) {
        return Ok(false);
    }
    Ok((1..=shifts).all(|k| lex_compare(&w.shift(k), w) == Ordering::Less))
}

/// A slope: an exact rational or a continued-fraction descriptor.
#[derive(Debug, Clone)]
pub enum Slope {
    Rational(BigRational),
    Irrational(Arc<ContinuedFraction>),
}

impl Slope {
    pub fn rational(p: i64, q: i64) -> Self {
        Slope::Rational(BigRational::new(p.into(), q.into()))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Slope::Rational(r) => Some(r),
            Slope::Irrational(_) => None,
        }
    }

    /// `⌈α⌉`.
    pub fn ceil(&self) -> BigInt {
        match self {
            Slope::Rational(r) => r.ceil().to_integer(),
            Slope::Irrational(cf) => cf.a0() + 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Slope::Rational(r) => r.is_negative(),
            Slope::Irrational(cf) => cf.a0().is_negative(),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Rational(r) => write!(f, "{r}"),
            Slope::Irrational(cf) => write!(f, "{cf}"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn round(x: &BigRational, kind: Kind) -> BigInt {
    match kind {
        Kind::Lower => x.floor().to_integer(),
        Kind::Upper => x.ceil().to_integer(),
    }
}

fn rational_prefix(alpha: &BigRational, rho: &BigRational, n: usize, kind: Kind) -> Vec<u32> {
    let mut prev = round(rho, kind);
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let x = alpha * BigInt::from(i) + rho;
        let cur = round(&x, kind);
        let d: BigInt = &cur - &prev;
        out.push(u32::try_from(d).expect("mechanical letter exceeds u32"));
        prev = cur;
    }
    out
}

/// First `n` letters of the lower or upper mechanical word of slope `α`
/// and intercept `ρ`.
///
/// For an irrational slope the floors are read off a convergent whose
/// denominator exceeds `n`, so no floating point is involved.
pub fn mechanical_prefix(slope: &Slope, intercept: &BigRational, n: usize, kind: Kind) -> Result<FiniteWord> {
    if slope.is_negative() {
        return Err(Error::pre("slope must be nonnegative"));
    }
    if intercept.is_negative() || intercept > &BigRational::one() {
        return Err(Error::pre("intercept must lie in [0,1]"));
    }
    match slope {
        Slope::Rational(r) => Ok(FiniteWord::new(rational_prefix(r, intercept, n, kind))),
        Slope::Irrational(cf) => {
            if intercept.is_zero() {
                let conv = cf.exact_convergent_above(&BigInt::from(n))?;
                return Ok(FiniteWord::new(rational_prefix(&conv, intercept, n, kind)));
            }
            irrational_prefix_with_intercept(cf, intercept, n, kind)
        }
    }
}

fn irrational_prefix_with_intercept(
    cf: &ContinuedFraction,
    rho: &BigRational,
    n: usize,
    kind: Kind,
) -> Result<FiniteWord> {
    let mut k = 0;
    loop {
        let enc = cf.open_enclosure(k)?;
        let decided = (0..=n).all(|m| {
            let m = BigInt::from(m);
            let lo = &enc.lo * &m + rho;
            let hi = &enc.hi * &m + rho;
            // no integer strictly inside (lo, hi)
            hi <= lo.floor() + BigRational::one()
        });
        if decided {
            let mid = (&enc.lo + &enc.hi) / BigInt::from(2);
            return Ok(FiniteWord::new(rational_prefix(&mid, rho, n, kind)));
        }
        k += 1;
        if k > cf.max_index() {
            return Err(Error::cert("cannot certify mechanical-word floors within the convergent budget"));
        }
    }
}

fn check_reduced(p: i64, q: i64) -> Result<()> {
    if q < 1 || p < 0 || p > q {
        return Err(Error::pre(format!("need 0 <= p <= q, q >= 1 (got {p}/{q})")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::pre(format!("{p}/{q} is not reduced")));
    }
    Ok(())
}

/// The Christoffel word `t_{p,q}` (lower) or `t'_{p,q}` (upper).
pub fn christoffel(p: i64, q: i64, kind: Kind) -> Result<FiniteWord> {
    check_reduced(p, q)?;
    let r = BigRational::new(p.into(), q.into());
    Ok(FiniteWord::new(rational_prefix(&r, &BigRational::zero(), q as usize, kind)))
}

/// The central word `z` with `t_{p,q} = 0 z 1`.
pub fn central_word(p: i64, q: i64) -> Result<FiniteWord> {
    check_reduced(p, q)?;
    if p == 0 || p == q {
        return Err(Error::pre("central word needs 0 < p < q"));
    }
    let t = christoffel(p, q, Kind::Lower)?;
    Ok(FiniteWord::new(t.letters[1..t.len() - 1].to_vec()))
}

/// The digit string `b z_{p,q} b` over `{b-1, b}`.
///
/// Degenerates to the single letter `b` when `p = 0` and to `b+1` when
/// `p = q = 1`.
pub fn bzb_word(b: u32, p: i64, q: i64) -> Result<FiniteWord> {
    let alphabet = Alphabet::new(b)?;
    if p == 0 {
        if q < 1 {
            return Err(Error::pre("denominator must be positive"));
        }
        return Ok(FiniteWord { letters: vec![b], alphabet: Some(alphabet) });
    }
    check_reduced(p, q)?;
    if p == q {
        return Ok(FiniteWord { letters: vec![b + 1], alphabet: Some(alphabet) });
    }
    let z = central_word(p, q)?.remap(alphabet);
    let mut letters = Vec::with_capacity(q as usize);
    letters.push(b);
    letters.extend_from_slice(&z.letters);
    letters.push(b);
    Ok(FiniteWord { letters, alphabet: Some(alphabet) })
}

/// Side on which nearby slopes are considered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusSide {
    TwoSided,
    Below,
    Above,
}

/// Radius `δ_N` such that every slope on the given side within distance
/// `δ_N` has upper mechanical word sharing a length-`N` prefix with the
/// reference word.
///
/// Ties between indices are resolved toward the smaller `n`; the value is
/// the same either way.
pub fn common_prefix_radius(slope: &Slope, n_max: usize, side: RadiusSide) -> Result<Enclosure> {
    if n_max == 0 {
        return Err(Error::pre("N must be at least 1"));
    }
    match (slope, side) {
        (Slope::Rational(_), RadiusSide::TwoSided) => Err(Error::pre("two-sided radius needs an irrational slope")),
        (Slope::Irrational(_), RadiusSide::Below | RadiusSide::Above) => {
            Err(Error::pre("one-sided radius needs a rational slope"))
        }
        (Slope::Rational(r), side) => {
            if r.is_negative() || r.is_zero() {
                return Err(Error::pre("slope must be positive"));
            }
            let frac = r - r.floor();
            let q = frac.denom().clone();
            if frac.is_zero() {
                let d = BigRational::new(BigInt::one(), BigInt::from(n_max));
                return Ok(Enclosure::exact(d));
            }
            let mut best: Option<BigRational> = None;
            for n in 1..=n_max {
                let nb = BigInt::from(n);
                if (&nb % &q).is_zero() {
                    continue;
                }
                let x = &frac * &nb;
                let f = &x - x.floor();
                let num = match side {
                    RadiusSide::Below => f,
                    _ => BigRational::one() - f,
                };
                let cand = num / nb;
                if best.as_ref().is_none_or(|b| &cand < b) {
                    best = Some(cand);
                }
            }
            // every n is a multiple of q only when q = 1, handled above
            Ok(Enclosure::exact(best.expect("some n is not a multiple of q")))
        }
        (Slope::Irrational(cf), _) => {
            let floor_guard = BigInt::from(n_max).max(BigInt::one() << 64);
            let enc = cf.open_enclosure_beyond(&floor_guard)?;
            let mut lo_best: Option<BigRational> = None;
            let mut hi_best: Option<BigRational> = None;
            for n in 1..=n_max {
                let nb = BigInt::from(n);
                let a = &enc.lo * &nb;
                let b = &enc.hi * &nb;
                let fl = a.floor();
                if b.floor() != fl {
                    return Err(Error::cert("fractional part undecided for the two-sided radius"));
                }
                let (fa, fb) = (a - &fl, b - &fl);
                let one = BigRational::one();
                for (lo, hi) in [(fa.clone(), fb.clone()), (&one - &fb, &one - &fa)] {
                    let lo = lo / &nb;
                    let hi = hi / &nb;
                    if lo_best.as_ref().is_none_or(|x| &lo < x) {
                        lo_best = Some(lo);
                    }
                    if hi_best.as_ref().is_none_or(|x| &hi < x) {
                        hi_best = Some(hi);
                    }
                }
            }
            Ok(Enclosure::new(lo_best.unwrap(), hi_best.unwrap()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::ContinuedFraction;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn zero() -> BigRational {
        BigRational::zero()
    }

    #[test]
    fn mechanical_examples() {
        let s = Slope::rational(2, 5);
        assert_eq!(mechanical_prefix(&s, &zero(), 5, Kind::Lower).unwrap().to_string(), "00101");
        assert_eq!(mechanical_prefix(&s, &zero(), 5, Kind::Upper).unwrap().to_string(), "10100");
        let z = Slope::rational(0, 1);
        assert_eq!(mechanical_prefix(&z, &zero(), 4, Kind::Lower).unwrap().to_string(), "0000");
    }

    #[test]
    fn christoffel_examples() {
        assert_eq!(christoffel(1, 1, Kind::Lower).unwrap().to_string(), "1");
        assert_eq!(christoffel(1, 1, Kind::Upper).unwrap().to_string(), "1");
        assert_eq!(christoffel(2, 5, Kind::Lower).unwrap().to_string(), "00101");
        assert_eq!(christoffel(3, 5, Kind::Upper).unwrap().to_string(), "11010");
        assert!(christoffel(2, 4, Kind::Lower).is_err());
    }

    #[test]
    fn central_examples() {
        assert_eq!(central_word(1, 2).unwrap().to_string(), "");
        assert_eq!(central_word(2, 5).unwrap().to_string(), "010");
        assert_eq!(central_word(3, 5).unwrap().to_string(), "101");
        assert!(central_word(1, 1).is_err());
    }

    #[test]
    fn bzb_examples() {
        assert_eq!(bzb_word(1, 1, 2).unwrap().to_string(), "11");
        assert_eq!(bzb_word(1, 2, 5).unwrap().to_string(), "10101");
        assert_eq!(bzb_word(2, 1, 1).unwrap().to_string(), "3");
        assert_eq!(bzb_word(2, 0, 1).unwrap().to_string(), "2");
        assert_eq!(bzb_word(2, 2, 5).unwrap().to_string(), "21212");
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_compare(&w("10"), &w("101")), Ordering::Less);
        assert_eq!(lex_compare(&w("(01)^w"), &w("0(10)^w")), Ordering::Equal);
        assert_eq!(lex_compare(&w("(10)^w"), &w("0(10)^w")), Ordering::Greater);
        assert_eq!(lex_compare(&w("11"), &w("11")), Ordering::Equal);
        assert_eq!(lex_compare(&w("1"), &w("1000")), Ordering::Equal);
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_parry_admissible(&w("11")).unwrap());
        assert!(!is_parry_admissible(&w("011")).unwrap());
        assert!(is_parry_admissible(&w("1(01010)^w")).unwrap());
        assert!(!is_parry_admissible(&w("(10)^w")).unwrap());
        assert!(is_parry_admissible(&Word::Finite(FiniteWord::empty())).is_err());
    }

    #[test]
    fn canonical_form() {
        let a = EventuallyPeriodicWord::new(vec![1, 0, 1, 0], vec![1, 0, 1, 0]).unwrap();
        assert_eq!(a.to_string(), "(10)^w");
        let b = EventuallyPeriodicWord::new(vec![2, 1], vec![1]).unwrap();
        assert_eq!(b.to_string(), "2(1)^w");
        let c: EventuallyPeriodicWord = "1(1010)^w".parse().unwrap();
        assert_eq!(c.to_string(), "1(10)^w");
        let d = EventuallyPeriodicWord::new(vec![0, 1], vec![0, 1]).unwrap();
        assert_eq!(d.to_string(), "(01)^w");
    }

    #[test]
    fn radius_examples() {
        let s = Slope::rational(2, 5);
        let r2 = common_prefix_radius(&s, 2, RadiusSide::Below).unwrap();
        assert_eq!(r2.lo, BigRational::new(2.into(), 5.into()));
        let r7 = common_prefix_radius(&s, 7, RadiusSide::Below).unwrap();
        assert_eq!(r7.lo, BigRational::new(1.into(), 15.into()));
        let golden = Slope::Irrational(Arc::new(ContinuedFraction::golden()));
        let g = common_prefix_radius(&golden, 1, RadiusSide::TwoSided).unwrap();
        let target = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((g.mid_f64() - target).abs() < 1e-15);
        assert!(common_prefix_radius(&s, 3, RadiusSide::TwoSided).is_err());
    }

    #[test]
    fn irrational_mechanical_matches_isqrt_oracle() {
        // ⌈nα⌉ for α = (√5 − 1)/2 from ⌊n√5⌋ = isqrt(5n²)
        let golden = Slope::Irrational(Arc::new(ContinuedFraction::golden()));
        let word = mechanical_prefix(&golden, &zero(), 200, Kind::Upper).unwrap();
        let ceil = |n: u64| -> u64 {
            if n == 0 {
                return 0;
            }
            let s = ((5 * n * n) as f64).sqrt() as u64;
            let s = (s.saturating_sub(2)..s + 3).filter(|k| k * k <= 5 * n * n).max().unwrap();
            (s - n) / 2 + 1
        };
        for i in 0..200u64 {
            assert_eq!(word.letters[i as usize] as u64, ceil(i + 1) - ceil(i), "letter {i}");
        }
    }

    #[test]
    fn irrational_intercept_agrees_with_rational_neighbour() {
        let golden = Slope::Irrational(Arc::new(ContinuedFraction::golden()));
        let rho = BigRational::new(1.into(), 3.into());
        let a = mechanical_prefix(&golden, &rho, 40, Kind::Lower).unwrap();
        let near = BigRational::new(BigInt::from(165580141u64), BigInt::from(267914296u64));
        let b = rational_prefix(&near, &rho, 40, Kind::Lower);
        assert_eq!(a.letters, b);
    }

    #[test]
    fn primitive_detection() {
        assert!(FiniteWord::new(vec![0, 1]).is_primitive());
        assert!(!FiniteWord::new(vec![0, 1, 0, 1]).is_primitive());
        assert!(FiniteWord::new(vec![0, 1, 0]).is_primitive());
    }
}
