//! Formula, generating function and brute force, compared exactly.

mod common;

use common::{census, library_trees, q, qu, Census};
use cstree::series::{series_f_geq, series_g, Rational};
use cstree::stats::{
    age_count_geq, age_distribution, age_variance, ancestor_distribution, expected_age,
    expected_age_from_tails, expected_ancestor_size,
};
use num_bigint::BigUint;

const MAX_N: usize = 14;

fn censuses(max_r: u32) -> Vec<(usize, Census)> {
    (2..=MAX_N)
        .map(|n| (n, census(n, max_r, library_trees(n))))
        .collect()
}

#[test]
fn age_tail_counts_three_ways() {
    let all = censuses(0);
    for r in 1..=7u32 {
        let series = series_f_geq(r, MAX_N);
        for (n, c) in &all {
            let brute: u64 = c.age_hist.iter().skip(r as usize).sum();
            let formula = age_count_geq(*n as u64, r as u64).unwrap();
            assert_eq!(formula, BigUint::from(brute), "n={n} r={r}");
            assert_eq!(
                series.coeff(*n),
                Rational::from_integer(brute.into()),
                "n={n} r={r}"
            );
        }
    }
}

#[test]
fn age_moments_match_brute_force() {
    for (n, c) in censuses(0) {
        let total = c.count;
        let sum: u64 = c
            .age_hist
            .iter()
            .enumerate()
            .map(|(a, k)| a as u64 * k)
            .sum();
        let squares: u64 = c
            .age_hist
            .iter()
            .enumerate()
            .map(|(a, k)| (a * a) as u64 * k)
            .sum();
        let mean = qu(sum, total);
        assert_eq!(expected_age(n as u64).unwrap(), mean, "n={n}");
        assert_eq!(expected_age_from_tails(n as u64).unwrap(), mean);
        assert_eq!(
            age_variance(n as u64).unwrap(),
            qu(squares, total) - &mean * &mean
        );

        let dist = age_distribution(n as u64).unwrap();
        for (a, &k) in c.age_hist.iter().enumerate() {
            assert_eq!(dist.prob(a as u64), qu(k, total), "n={n} a={a}");
        }
    }
    assert_eq!(expected_age(4).unwrap(), q(3, 2));
    assert_eq!(expected_age(5).unwrap(), q(9, 5));
}

#[test]
fn ancestor_statistics_match_brute_force() {
    let all = censuses(3);
    for r in 1..=3u32 {
        let g = series_g(r, MAX_N);
        for (n, c) in &all {
            let hist = &c.ancestor_hist[r as usize];
            let sum: u64 = hist.iter().enumerate().map(|(m, k)| m as u64 * k).sum();
            assert_eq!(
                expected_ancestor_size(*n as u64, r as u64).unwrap(),
                qu(sum, c.count),
                "n={n} r={r}"
            );

            let slice = g.z_slice(*n);
            for (m, coeff) in slice.iter().enumerate() {
                let k = hist.get(m).copied().unwrap_or(0);
                assert_eq!(
                    *coeff,
                    Rational::from_integer(k.into()),
                    "n={n} r={r} m={m}"
                );
            }
            let dist = ancestor_distribution(*n as u64, r, MAX_N).unwrap();
            for (m, &k) in hist.iter().enumerate() {
                assert_eq!(dist.prob(m as u64), qu(k, c.count));
            }
        }
    }
    assert_eq!(expected_ancestor_size(4, 1).unwrap(), q(3, 2));
    assert_eq!(expected_ancestor_size(5, 1).unwrap(), q(9, 5));
}

#[test]
fn zeroth_ancestor_generating_function_is_diagonal() {
    let g = series_g(0, 10);
    let catalan = common::catalan_table(10);
    for n in 1..=10 {
        for m in 0..=10 {
            let expected = match (n == m, n) {
                (false, _) => Rational::from_integer(0.into()),
                (true, 1) => Rational::from_integer(1.into()),
                (true, _) => Rational::from_integer(catalan[n - 2].clone().into()),
            };
            assert_eq!(g.coeff(n, m), expected, "n={n} m={m}");
        }
    }
}
