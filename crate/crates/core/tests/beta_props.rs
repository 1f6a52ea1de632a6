use devils_staircase::beta::{
    atzero_root, greedy_digits, positive_root_finite, positive_root_series, IntPoly, PaddedDigits,
    UpperMechanicalDigits, DEFAULT_MAX_TRUNCATION,
};
use devils_staircase::diophantine::ContinuedFraction;
use devils_staircase::words::{bzb_word, is_parry_admissible, FiniteWord, Slope, Word};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use std::cmp::Ordering;
use std::sync::Arc;

fn tol(exp: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10).pow(exp))
}

fn reduced(max_q: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=max_q).flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
}

#[test]
fn bzb_roots_round_trip_through_greedy() {
    for b in 1..=3u32 {
        for (p, q) in reduced(50) {
            let w = bzb_word(b, p, q).unwrap();
            let mut root = positive_root_finite(w.as_slice(), &tol(30)).unwrap();
            let g = greedy_digits(&mut root, &BigRational::one(), q as usize).unwrap();
            assert_eq!(g.digits.as_slice(), w.as_slice(), "b={b} {p}/{q}");
            assert_eq!(g.terminated_at, Some(q as usize), "b={b} {p}/{q}");
            let word = Word::Finite(FiniteWord::new(g.digits));
            assert!(is_parry_admissible(&word).unwrap());
        }
    }
}

#[test]
fn finite_root_enclosures_are_sound_and_nest() {
    for b in 1..=3u32 {
        for (p, q) in reduced(25) {
            let w = bzb_word(b, p, q).unwrap();
            let poly = IntPoly::parry(w.as_slice());
            let coarse = positive_root_finite(w.as_slice(), &tol(12)).unwrap().enclosure();
            let fine = positive_root_finite(w.as_slice(), &tol(15)).unwrap().enclosure();
            let lo = poly.sign_at_rational(&coarse.lo);
            let hi = poly.sign_at_rational(&coarse.hi);
            assert!(lo != hi && lo != Ordering::Equal && hi != Ordering::Equal, "b={b} {p}/{q}");
            assert!(coarse.width() <= tol(12));
            assert!(coarse.contains_enclosure(&fine), "b={b} {p}/{q}");
        }
    }
}

fn assert_nested_trace(source: Arc<dyn devils_staircase::beta::DigitSource>, bound: u32) {
    let s = positive_root_series(source, 16, bound, &tol(25), DEFAULT_MAX_TRUNCATION).unwrap();
    assert!(s.trace.len() >= 2);
    for pair in s.trace.windows(2) {
        assert_eq!(pair[1].m, 2 * pair[0].m);
        assert!(pair[0].raw.contains_enclosure(&pair[1].raw), "m={} vs m={}", pair[0].m, pair[1].m);
    }
}

#[test]
fn series_truncations_nest() {
    let slopes = [
        ContinuedFraction::golden(),
        ContinuedFraction::sqrt2(),
        ContinuedFraction::from_terms(0, &[3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9]),
    ];
    for cf in slopes {
        let slope = Slope::Irrational(Arc::new(cf));
        let bound = slope.ceil().try_into().unwrap();
        assert_nested_trace(Arc::new(UpperMechanicalDigits(slope)), bound);
    }
    assert_nested_trace(Arc::new(PaddedDigits(vec![1, 0, 1, 1, 0, 0, 1])), 1);
}

#[test]
fn atzero_roots_decrease_with_shrinking_steps() {
    let t = tol(40);
    let roots: Vec<BigRational> = (2..=300).map(|n| atzero_root(n, &t).unwrap().enclosure().mid()).collect();
    let mut last_step: Option<BigRational> = None;
    for w in roots.windows(2) {
        assert!(w[1] < w[0]);
        assert!(w[1] > BigRational::one());
        let step = &w[0] - &w[1];
        if let Some(prev) = &last_step {
            assert!(step < *prev);
        }
        last_step = Some(step);
    }
}

#[test]
fn atzero_ratio_grows() {
    let t = tol(60);
    let mut prev = 0.0;
    for n in [2usize, 4, 8, 16, 32, 64, 128, 256, 512, 1024] {
        let beta = atzero_root(n, &t).unwrap().enclosure();
        let ratio = n as f64 / beta.pow_nonneg(n).hi_decimal(20).parse::<f64>().unwrap();
        assert!(ratio > prev, "n={n}");
        prev = ratio;
    }
    // mpmath: 1024/β^1024 = 5.2581467…
    assert!((prev - 5.258_146_728_575).abs() < 1e-9, "{prev}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn greedy_output_is_admissible(b in 1u32..4, p in 1i64..60, q in 2i64..60) {
        prop_assume!(p < q && p.gcd(&q) == 1);
        let w = bzb_word(b, p, q).unwrap();
        let mut root = positive_root_finite(w.as_slice(), &tol(30)).unwrap();
        let g = greedy_digits(&mut root, &BigRational::one(), q as usize + 8).unwrap();
        let word = Word::Finite(FiniteWord::new(g.digits));
        prop_assert!(is_parry_admissible(&word).unwrap());
    }
}
