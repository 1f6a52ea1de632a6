//! Continued fractions `[a_0; a_1, a_2, …]` with lazily generated partial
//! quotients and convergents.

use super::magnitude::{Magnitude, StirlingBounds, DEFAULT_BIT_BUDGET};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use std::sync::RwLock;

/// Generator for the partial quotients `a_1, a_2, …`.
#[derive(Debug, Clone, PartialEq)]
pub enum Quotients {
    /// A finite list; the value is rational.
    Finite(Vec<BigUint>),
    /// `pre` then `period` repeated.
    Periodic { pre: Vec<BigUint>, period: Vec<BigUint> },
    /// `1, 2, 1, 1, 4, 1, 1, 6, …`, the quotients of `e`.
    EPattern,
    /// `a_n = EXP_n(base)`.
    Tower { base: BigUint },
    /// `a_1 = first`, `a_{n+1} = a_n!`.
    FactorialChain { first: BigUint },
    /// `a_n = ⌊β^{q_{n−1}} / q_{n−1}⌋`.
    Targeted { beta: BigRational },
    /// `a_n = EXP_n(n)`.
    SelfTower,
}

/// Index, quotient and convergent `p_n / q_n`.
#[derive(Debug, Clone, Serialize)]
pub struct Convergent {
    pub index: usize,
    /// `a_n` (`a_0` is reported through its absolute value at index 0).
    pub a: Magnitude,
    /// Exact numerator while it fits the budget.
    #[serde(serialize_with = "crate::ser::opt_display")]
    pub p: Option<BigInt>,
    pub q: Magnitude,
}

impl Convergent {
    /// `p_n / q_n` when both are exact.
    pub fn fraction(&self) -> Option<BigRational> {
        Some(BigRational::new(self.p.clone()?, BigInt::from(self.q.as_exact()?.clone())))
    }
}

#[derive(Debug, Default)]
struct Cache {
    steps: Vec<Convergent>,
    finished: bool,
    failure: Option<Error>,
}

#[derive(Debug)]
pub struct ContinuedFraction {
    a0: BigInt,
    quotients: Quotients,
    name: Option<String>,
    budget: u64,
    stirling: StirlingBounds,
    cache: RwLock<Cache>,
}

impl Clone for ContinuedFraction {
    fn clone(&self) -> Self {
        ContinuedFraction::with_options(self.a0.clone(), self.quotients.clone(), self.budget, self.stirling)
            .named_opt(self.name.clone())
    }
}

/// Longest quotient index any lookup will generate.
pub const MAX_CF_INDEX: usize = 100_000;

fn e_term(i: usize) -> BigUint {
    if i % 3 == 2 {
        BigUint::from(2 * (i + 1) / 3)
    } else {
        BigUint::one()
    }
}

impl ContinuedFraction {
    pub fn new(a0: BigInt, quotients: Quotients) -> Self {
        Self::with_options(a0, quotients, DEFAULT_BIT_BUDGET, StirlingBounds::default())
    }

    pub fn with_options(a0: BigInt, quotients: Quotients, budget: u64, stirling: StirlingBounds) -> Self {
        ContinuedFraction { a0, quotients, name: None, budget, stirling, cache: RwLock::new(Cache::default()) }
    }

    pub fn named(self, name: &str) -> Self {
        self.named_opt(Some(name.to_string()))
    }

    fn named_opt(mut self, name: Option<String>) -> Self {
        self.name = name;
        self
    }

    /// `[a_0; a_1, …, a_n]` from explicit terms.
    pub fn from_terms(a0: i64, terms: &[u64]) -> Self {
        Self::new(a0.into(), Quotients::Finite(terms.iter().map(|&t| BigUint::from(t)).collect()))
    }

    /// `(√5 − 1)/2 = [0; 1, 1, 1, …]`.
    pub fn golden() -> Self {
        Self::new(BigInt::zero(), Quotients::Periodic { pre: vec![], period: vec![BigUint::one()] }).named("golden")
    }

    /// `√2 = [1; 2, 2, 2, …]`.
    pub fn sqrt2() -> Self {
        Self::new(BigInt::one(), Quotients::Periodic { pre: vec![], period: vec![2u32.into()] }).named("sqrt2")
    }

    /// `e = [2; 1, 2, 1, 1, 4, …]`.
    pub fn e() -> Self {
        Self::new(2.into(), Quotients::EPattern).named("e")
    }

    pub fn a0(&self) -> BigInt {
        self.a0.clone()
    }

    pub fn quotients(&self) -> &Quotients {
        &self.quotients
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn max_index(&self) -> usize {
        MAX_CF_INDEX
    }

    /// Term `a_n` for `n ≥ 1`, `None` past the end of a finite expansion.
    fn generate(&self, n: usize, steps: &[Convergent]) -> Result<Option<Magnitude>> {
        let b = self.budget;
        Ok(Some(match &self.quotients {
            Quotients::Finite(t) => match t.get(n - 1) {
                Some(v) => Magnitude::Exact(v.clone()),
                None => return Ok(None),
            },
            Quotients::Periodic { pre, period } => {
                let v = if n - 1 < pre.len() {
                    pre[n - 1].clone()
                } else {
                    period[(n - 1 - pre.len()) % period.len()].clone()
                };
                Magnitude::Exact(v)
            }
            Quotients::EPattern => Magnitude::Exact(e_term(n)),
            Quotients::Tower { base } => Magnitude::tower(base, n, b)?,
            Quotients::FactorialChain { first } => {
                if n == 1 {
                    Magnitude::Exact(first.clone())
                } else {
                    Magnitude::factorial(&steps[n - 1].a, b, self.stirling)?
                }
            }
            Quotients::Targeted { beta } => Magnitude::targeted_term(beta, &steps[n - 1].q, b)?,
            Quotients::SelfTower => Magnitude::tower(&BigUint::from(n), n, b)?,
        }))
    }

    fn extend_to(&self, i: usize) {
        {
            let c = self.cache.read().unwrap();
            if c.steps.len() > i || c.finished || c.failure.is_some() {
                return;
            }
        }
        let mut c = self.cache.write().unwrap();
        if c.steps.is_empty() {
            c.steps.push(Convergent {
                index: 0,
                a: Magnitude::Exact(self.a0.magnitude().clone()),
                p: Some(self.a0.clone()),
                q: Magnitude::Exact(BigUint::one()),
            });
        }
        while c.steps.len() <= i && !c.finished && c.failure.is_none() {
            let n = c.steps.len();
            if n > MAX_CF_INDEX {
                c.failure = Some(Error::cert("continued fraction index limit reached"));
                break;
            }
            let a = match self.generate(n, &c.steps) {
                Ok(Some(a)) => a,
                Ok(None) => {
                    c.finished = true;
                    break;
                }
                Err(e) => {
                    c.failure = Some(e);
                    break;
                }
            };
            if matches!(&a, Magnitude::Exact(v) if v.is_zero()) {
                c.failure = Some(Error::pre(format!("partial quotient a_{n} is zero")));
                break;
            }
            let (p1, q1) = (c.steps[n - 1].p.clone(), c.steps[n - 1].q.clone());
            let (p0, q0) = if n >= 2 {
                (c.steps[n - 2].p.clone(), c.steps[n - 2].q.clone())
            } else {
                (Some(BigInt::one()), Magnitude::Exact(BigUint::zero()))
            };
            let q = match Magnitude::mul_add(&a, &q1, &q0, self.budget) {
                Ok(q) => q,
                Err(e) => {
                    c.failure = Some(e);
                    break;
                }
            };
            let p = match (&a, p1, p0) {
                (Magnitude::Exact(av), Some(p1), Some(p0)) if q.is_exact() => Some(BigInt::from(av.clone()) * p1 + p0),
                _ => None,
            };
            c.steps.push(Convergent { index: n, a, p, q });
        }
    }

    /// Enclosure of `ln q_{n+1} / q_n` read off the quotient rule, when the
    /// generator has one. For the targeted quotients with `a_{n+1} ≥ 2` the
    /// recurrence gives `β^{q_n}/2 ≤ q_{n+1} ≤ 2β^{q_n}`.
    pub(crate) fn growth_hint(&self, n: usize) -> Option<crate::interval::Interval> {
        use crate::interval::Interval;
        let Quotients::Targeted { beta } = &self.quotients else { return None };
        let cur = self.convergent(n).ok()??;
        let next = self.convergent(n + 1).ok()??;
        if !next.a.definitely_greater(&BigUint::one()) {
            return None;
        }
        let slack = (Interval::ln2().ln() - cur.q.ln()?).exp();
        if !slack.is_finite() {
            return None;
        }
        Some(Interval::from_rational(beta).ln() + Interval::new(-slack.hi, slack.hi))
    }

    /// Convergent `n`, `Ok(None)` past the end of a finite expansion.
    pub fn convergent(&self, n: usize) -> Result<Option<Convergent>> {
        self.extend_to(n);
        let c = self.cache.read().unwrap();
        if let Some(s) = c.steps.get(n) {
            return Ok(Some(s.clone()));
        }
        match &c.failure {
            Some(e) => Err(e.clone()),
            None => Ok(None),
        }
    }

    /// Term `a_n` for `n ≥ 1`.
    pub fn term(&self, n: usize) -> Result<Option<Magnitude>> {
        Ok(self.convergent(n)?.map(|c| c.a))
    }

    /// Convergents `0..=n`, stopping early at the end of a finite expansion
    /// or at the first term that cannot be represented.
    pub fn convergents_partial(&self, n: usize) -> (Vec<Convergent>, Option<Error>) {
        self.extend_to(n);
        let c = self.cache.read().unwrap();
        let take = c.steps.len().min(n + 1);
        let err = if take < n + 1 { c.failure.clone() } else { None };
        (c.steps[..take].to_vec(), err)
    }

    /// Exact value when the expansion is finite.
    pub fn rational_value(&self) -> Option<BigRational> {
        match &self.quotients {
            Quotients::Finite(t) => {
                let conv = self.convergent(t.len()).ok()??;
                Some(BigRational::new(conv.p?, BigInt::from(conv.q.as_exact()?.clone())))
            }
            _ => None,
        }
    }

    fn exact_fraction(c: &Convergent) -> Option<BigRational> {
        c.fraction()
    }

    /// A convergent `p_k/q_k` with `q_k > n`, exact.
    ///
    /// For `1 ≤ m ≤ n < q_k`, `⌊mα⌋ = ⌊m p_k/q_k⌋` and likewise for ceilings,
    /// since `|mα − m p_k/q_k| < 1/q_k` and `m p_k/q_k` is not an integer.
    pub fn exact_convergent_above(&self, n: &BigInt) -> Result<BigRational> {
        let mut i = 0;
        loop {
            match self.convergent(i)? {
                None => {
                    return Self::exact_fraction(&self.convergent(i - 1)?.unwrap())
                        .ok_or_else(|| Error::cert("final convergent is not exact"));
                }
                Some(c) => {
                    let q = c.q.as_exact().ok_or_else(|| {
                        Error::cert(format!("convergent denominator q_{i} left the exact budget before exceeding {n}"))
                    })?;
                    if &BigInt::from(q.clone()) > n {
                        return Self::exact_fraction(&c)
                            .ok_or_else(|| Error::cert("convergent numerator is not exact"));
                    }
                }
            }
            i += 1;
        }
    }

    /// Interval with endpoints `p_k/q_k` and `p_{k+1}/q_{k+1}` (or the
    /// `1/q_k²` bound when the next convergent is not exact). The value is
    /// strictly inside unless the expansion ends, in which case the
    /// interval is the exact value.
    pub fn open_enclosure(&self, k: usize) -> Result<Enclosure> {
        let ck = self.convergent(k)?.ok_or_else(|| Error::pre(format!("convergent {k} does not exist")))?;
        let xk = Self::exact_fraction(&ck).ok_or_else(|| Error::cert(format!("convergent {k} is not exact")))?;
        match self.convergent(k + 1) {
            Ok(None) => Ok(Enclosure::exact(xk)),
            Ok(Some(c)) if Self::exact_fraction(&c).is_some() => {
                let x1 = Self::exact_fraction(&c).unwrap();
                if x1 < xk {
                    Ok(Enclosure::new(x1, xk))
                } else {
                    Ok(Enclosure::new(xk, x1))
                }
            }
            _ => {
                let q = BigInt::from(ck.q.as_exact().unwrap().clone());
                let r = BigRational::new(BigInt::one(), &q * &q);
                if k % 2 == 0 {
                    Ok(Enclosure::new(xk.clone(), xk + r))
                } else {
                    Ok(Enclosure::new(&xk - r, xk))
                }
            }
        }
    }

    /// [`open_enclosure`](Self::open_enclosure) at the first index whose
    /// denominator exceeds `n`, or the last exact index available.
    pub fn open_enclosure_beyond(&self, n: &BigInt) -> Result<Enclosure> {
        let mut best = None;
        for i in 0..MAX_CF_INDEX {
            match self.convergent(i) {
                Ok(Some(c)) => match c.q.as_exact() {
                    Some(q) if c.p.is_some() => {
                        best = Some(i);
                        if &BigInt::from(q.clone()) > n {
                            break;
                        }
                    }
                    _ => break,
                },
                _ => break,
            }
        }
        let k = best.ok_or_else(|| Error::cert("no exact convergent available"))?;
        self.open_enclosure(k)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            return write!(f, "{n}");
        }
        let (conv, _) = self.convergents_partial(5);
        let terms: Vec<String> = conv.iter().skip(1).map(|c| c.a.to_string()).collect();
        let more = !matches!(&self.quotients, Quotients::Finite(t) if t.len() <= 5);
        write!(f, "[{}; {}{}]", self.a0, terms.join(", "), if more { ", ..." } else { "" })
    }
}
