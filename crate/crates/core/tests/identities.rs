mod common;

use num_traits::{One, Zero};
use telescope_core::arith::{binom, int, rat, Integer, Rational};
use telescope_core::seq::{self, SequenceId};

#[test]
fn strehl() {
    for k in 0..=60 {
        assert_eq!(seq::franel(k), seq::franel_strehl(k), "k={k}");
    }
}

#[test]
fn apery_double_form() {
    for k in 0..=60 {
        assert_eq!(seq::apery(k), seq::apery_alt(k), "k={k}");
    }
}

#[test]
fn apery_transform() {
    for x in [int(1), int(-1), int(2), int(-3), rat(1, 2)] {
        for n in 0..=30u64 {
            let ni = n as i64;
            let rhs: Rational = (0..=ni)
                .map(|k| {
                    let s = if (ni - k) % 2 == 0 { 1 } else { -1 };
                    Rational::from_integer(binom(ni, k) * binom(ni + k, k) * s) * seq::g_poly(k as u64, &x)
                })
                .sum();
            assert_eq!(seq::apery_poly(n, &x), rhs, "n={n} x={x}");
        }
    }
}

#[test]
fn trinomial_square_expansion() {
    for b in -3..=3i64 {
        for c in -3..=3i64 {
            let (bi, ci) = (Integer::from(b), Integer::from(c));
            for k in 0..=25u64 {
                let t = seq::trinomial(k, &bi, &(&ci * &ci));
                assert_eq!(&t * &t, seq::trinomial_sq_expansion(k, &bi, &ci), "k={k} b={b} c={c}");
            }
        }
    }
}

#[test]
fn trinomial_matches_convolution_oracle() {
    for (b, c) in [(1, 1), (3, 4), (-2, 5), (0, 7), (4, 0)] {
        for k in 0..=20 {
            assert_eq!(
                seq::trinomial(k as u64, &Integer::from(b), &Integer::from(c)),
                common::trinomial(k, b, c)
            );
        }
    }
}

#[test]
fn g_recurrence() {
    let g: Vec<Integer> = (0..=62).map(seq::g).collect();
    for n in 0..=60usize {
        let m = n as i64;
        let lhs = Integer::from(9 * (m + 1) * (m + 1)) * &g[n] - Integer::from(10 * m * m + 30 * m + 23) * &g[n + 1]
            + Integer::from((m + 2) * (m + 2)) * &g[n + 2];
        assert!(lhs.is_zero(), "n={n}");
    }
}

#[test]
fn weighted_central_binomial_sum_vanishes() {
    for n in 0..=60i64 {
        let s: Integer = (0..=n).map(|k| Integer::from(3 * k - 2 * n) * binom(n, k).pow(2) * binom(2 * k, k)).sum();
        assert!(s.is_zero(), "n={n}");
    }
}

#[test]
fn four_k_plus_one_identity() {
    for n in 1..=60i64 {
        // 16^(n-1) sum_{k<n} (4k+1) binom(2k,k)^2 / 16^k, cleared
        let lhs: Integer = (0..n)
            .map(|k| Integer::from(4 * k + 1) * binom(2 * k, k).pow(2) * num_traits::pow(Integer::from(16), (n - 1 - k) as usize))
            .sum();
        assert_eq!(lhs, binom(2 * n - 1, n).pow(2) * Integer::from(n * n), "n={n}");
    }
}

#[test]
fn sequences_match_direct_oracles() {
    for k in 0..=25i64 {
        let ku = k as u64;
        assert_eq!(seq::franel(ku), common::franel(k));
        assert_eq!(seq::sun_f(ku), common::sun_f(k));
        assert_eq!(seq::domb(ku), common::domb(k));
        assert_eq!(seq::apery(ku), common::apery(k));
        assert_eq!(seq::g(ku), common::g_at(k, 1));
        assert_eq!(seq::g_poly(ku, &int(-1)), Rational::from_integer(common::g_at(k, -1)));
    }
}

#[test]
fn memo_counts_only_fresh_values() {
    // Parameter values no other test uses, so the counter delta is ours.
    let x = rat(17, 19);
    let before = seq::computed_count();
    for k in 0..10 {
        seq::value(SequenceId::GPoly, k, std::slice::from_ref(&x)).unwrap();
    }
    let mid = seq::computed_count();
    assert!(mid - before >= 10);
    let rows_before = seq::cache_rows().len();
    for k in 0..10 {
        assert_eq!(seq::value(SequenceId::GPoly, k, std::slice::from_ref(&x)).unwrap(), seq::g_poly(k, &x));
    }
    assert!(seq::cache_rows().len() >= rows_before);
    assert!(seq::value(SequenceId::Trinomial, 2, &[Rational::one()]).is_err());
}

#[test]
fn cache_rows_round_trip() {
    let rows: Vec<_> = seq::cache_rows();
    assert_eq!(seq::load_rows(rows.clone()).unwrap(), rows.len());
    let bad = seq::CacheRow { sequence: "nope".into(), params: String::new(), k: 0, value: "1".into() };
    assert!(seq::load_rows([bad]).is_err());
}
