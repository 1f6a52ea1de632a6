use devils_staircase::staircase::{default_rational_tol, delta_right_limit};
use devils_staircase::words::{
    bzb_word, central_word, christoffel, common_prefix_radius, is_parry_admissible, lex_compare, mechanical_prefix,
    EventuallyPeriodicWord, FiniteWord, Kind, RadiusSide, Slope, Word,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use std::cmp::Ordering;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn reduced(max_q: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..=max_q).flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
}

#[test]
fn christoffel_words_wrap_a_palindrome() {
    for (p, q) in reduced(60) {
        let t = christoffel(p, q, Kind::Lower).unwrap();
        let t_up = christoffel(p, q, Kind::Upper).unwrap();
        let z = central_word(p, q).unwrap();
        assert_eq!(z, z.reversed(), "{p}/{q}");
        let mut lower = vec![0];
        lower.extend_from_slice(z.as_slice());
        lower.push(1);
        let mut upper = vec![1];
        upper.extend_from_slice(z.as_slice());
        upper.push(0);
        assert_eq!(t.as_slice(), lower.as_slice(), "{p}/{q}");
        assert_eq!(t_up.as_slice(), upper.as_slice(), "{p}/{q}");
        for w in [&t, &t_up] {
            assert_eq!(w.len(), q as usize);
            assert_eq!(w.letter_sum(), p as u64);
            assert!(w.is_primitive(), "{p}/{q}");
        }
    }
}

#[test]
fn mechanical_words_repeat_the_christoffel_word() {
    for (p, q) in reduced(30) {
        let t = christoffel(p, q, Kind::Lower).unwrap();
        for k in 1..=5 {
            let s =
                mechanical_prefix(&Slope::rational(p, q), &BigRational::zero(), k * q as usize, Kind::Lower).unwrap();
            assert_eq!(s.as_slice(), t.repeat(k).as_slice(), "{p}/{q} k={k}");
        }
    }
}

#[test]
fn bzb_words_are_admissible() {
    for b in 1..=3u32 {
        for (p, q) in reduced(40).filter(|&(_, q)| q >= 2) {
            let w = bzb_word(b, p, q).unwrap();
            assert_eq!(w.len(), q as usize);
            assert!(is_parry_admissible(&Word::Finite(w.clone())).unwrap(), "b={b} {p}/{q}: {w}");
        }
    }
}

fn upper_prefix(a: &BigRational, n: usize) -> FiniteWord {
    mechanical_prefix(&Slope::Rational(a.clone()), &BigRational::zero(), n, Kind::Upper).unwrap()
}

#[test]
fn nearby_slopes_share_prefixes() {
    let grid: Vec<BigRational> = {
        let mut v: Vec<BigRational> =
            (1..=50i64).flat_map(|q| (1..=2 * q).filter(move |p| p.gcd(&q) == 1).map(move |p| r(p, q))).collect();
        v.sort();
        v
    };
    for (p, q) in reduced(12).chain([(1, 1), (3, 2)]) {
        let a = r(p, q);
        for n in 1..=30 {
            let below_word = upper_prefix(&a, n);
            let above_word = delta_right_limit(&a, &default_rational_tol()).unwrap().expansion.prefix(n).unwrap();
            for side in [RadiusSide::Below, RadiusSide::Above] {
                let d = common_prefix_radius(&Slope::Rational(a.clone()), n, side).unwrap();
                assert!(d.is_exact());
                let (lo, hi, s) = match side {
                    RadiusSide::Below => (&a - &d.lo, a.clone(), &below_word),
                    _ => (a.clone(), &a + &d.lo, &above_word),
                };
                for b in grid.iter().filter(|b| **b > lo && **b < hi) {
                    assert_eq!(&upper_prefix(b, n), s, "{a} vs {b}, N={n}, {side:?}");
                }
            }
        }
    }
}

#[test]
fn radius_is_sharp_on_the_left() {
    // just outside the radius some slope already differs within N letters
    for (p, q) in reduced(12) {
        let a = r(p, q);
        for n in 2..=30 {
            let d = common_prefix_radius(&Slope::Rational(a.clone()), n, RadiusSide::Below).unwrap().lo;
            let b = &a - &d;
            let below = &b - r(1, 1_000_000);
            if !below.is_positive() {
                continue;
            }
            assert_ne!(upper_prefix(&below, n), upper_prefix(&a, n), "{a}, N={n}");
        }
    }
}

fn word_strategy() -> impl Strategy<Value = Word> {
    let letters = prop::collection::vec(0u32..3, 0..6);
    prop_oneof![
        letters.clone().prop_map(|l| Word::Finite(FiniteWord::new(l))),
        (letters, prop::collection::vec(0u32..3, 1..4))
            .prop_map(|(pre, per)| Word::Periodic(EventuallyPeriodicWord::new(pre, per).unwrap())),
    ]
}

proptest! {
    #[test]
    fn lex_is_antisymmetric(u in word_strategy(), v in word_strategy()) {
        prop_assert_eq!(lex_compare(&u, &v), lex_compare(&v, &u).reverse());
        prop_assert_eq!(lex_compare(&u, &u), Ordering::Equal);
    }

    #[test]
    fn lex_is_transitive(u in word_strategy(), v in word_strategy(), w in word_strategy()) {
        if lex_compare(&u, &v) != Ordering::Greater && lex_compare(&v, &w) != Ordering::Greater {
            prop_assert_ne!(lex_compare(&u, &w), Ordering::Greater);
        }
    }

    #[test]
    fn lex_agrees_with_long_prefixes(u in word_strategy(), v in word_strategy()) {
        let pu: Vec<u32> = (0..64).map(|i| u.letter(i)).collect();
        let pv: Vec<u32> = (0..64).map(|i| v.letter(i)).collect();
        prop_assert_eq!(lex_compare(&u, &v), pu.cmp(&pv));
    }

    #[test]
    fn upper_word_of_rational_is_periodic(p in 1i64..200, q in 1i64..200, n in 1usize..120) {
        let g = p.gcd(&q);
        let (p, q) = (p / g, q / g);
        let s = upper_prefix(&r(p, q), n + q as usize);
        for i in 0..n {
            prop_assert_eq!(s.as_slice()[i], s.as_slice()[i + q as usize]);
        }
        let sum: u64 = s.as_slice()[..q as usize].iter().map(|&x| x as u64).sum();
        prop_assert_eq!(BigInt::from(sum), BigInt::from(p));
    }

    #[test]
    fn upper_words_grow_with_the_intercept(
        p in 1i64..120, q in 1i64..60, r0 in 1i64..=97, r1 in 1i64..=97, golden in any::<bool>(),
    ) {
        prop_assume!(r0 != r1);
        let (lo, hi) = if r0 < r1 { (r(r0, 97), r(r1, 97)) } else { (r(r1, 97), r(r0, 97)) };
        let slope = if golden {
            Slope::Irrational(std::sync::Arc::new(devils_staircase::diophantine::ContinuedFraction::golden()))
        } else {
            Slope::rational(p, q)
        };
        let a = mechanical_prefix(&slope, &lo, 80, Kind::Upper).unwrap();
        let b = mechanical_prefix(&slope, &hi, 80, Kind::Upper).unwrap();
        prop_assert!(a.as_slice() <= b.as_slice(), "{a} > {b}");
    }
}
