mod common;

use std::collections::BTreeMap;

use cstree::enumerate_trees;
use cstree::series::{
    phi_apply, phi_power, series_f_geq, series_f_leq, series_s, series_t, Bivariate, Mark,
    Rational, Series,
};

fn int(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

#[test]
fn phi_fixes_s() {
    let s = series_s(20);
    assert_eq!(phi_apply(&s), s);
}

#[test]
fn closed_form_equals_iteration() {
    let order = 12;
    let z = Series::var(order);
    let seeds = [
        Bivariate::from_series(&z, Mark::T),
        Bivariate::from_row(&z, 1, Mark::T),
        series_s(order),
    ];
    for f in &seeds {
        let mut iterated = f.clone();
        assert_eq!(phi_power(f, 0), iterated);
        for r in 1..=5 {
            iterated = phi_apply(&iterated);
            assert_eq!(phi_power(f, r), iterated, "r = {r}");
        }
    }
}

#[test]
fn s_counts_unmarked_nodes_and_branches() {
    let order = 12;
    let s = series_s(order);
    let mut census: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for n in 1..=order {
        for tree in enumerate_trees(n).unwrap() {
            let view = tree.marked_view();
            assert_eq!(view.marked().len(), tree.num_children());
            for position in view.marked() {
                assert!(tree.node_at(position).unwrap().is_leaf());
            }
            *census
                .entry((view.unmarked_count(), tree.num_children()))
                .or_default() += 1;
        }
    }
    // every coefficient with unmarked + marked <= order is a complete count
    for i in 0..=order {
        for j in 0..=order - i {
            let expected = census.get(&(i, j)).copied().unwrap_or(0);
            assert_eq!(s.coeff(i, j), int(expected), "z^{i} t^{j}");
        }
    }
}

#[test]
fn age_at_most_r_by_size() {
    let order = 14;
    let diag_s = series_s(order).diagonal();
    let mut previous = Series::zero(order);
    for r in 0..=order as u32 {
        let diag = series_f_leq(r, order).diagonal();
        for n in 1..=order {
            let brute = enumerate_trees(n)
                .unwrap()
                .filter(|t| t.age().unwrap() <= r)
                .count() as u64;
            assert_eq!(diag.coeff(n), int(brute), "n={n} r={r}");
            assert!(diag.coeff(n) >= previous.coeff(n));
        }
        if 2 * r as usize >= order {
            assert_eq!(diag, diag_s, "r = {r}");
        }
        if r >= 1 {
            // age >= r is everything minus age <= r - 1
            let geq = series_f_geq(r, order);
            for n in 1..=order {
                assert_eq!(
                    geq.coeff(n),
                    &diag_s.coeff(n) - &previous.coeff(n),
                    "n={n} r={r}"
                );
            }
        }
        previous = diag;
    }
}

#[test]
fn plane_tree_series_and_dump() {
    let t = series_t(14);
    let catalan = common::catalan_table(14);
    for n in 1..=14 {
        assert_eq!(
            t.coeff(n),
            Rational::from_integer(catalan[n - 1].clone().into())
        );
    }
    assert_eq!(series_t(3).dump(), "0 0/1\n1 1/1\n2 1/1\n3 2/1\n");
    let dump = series_f_leq(1, 2).dump();
    assert!(dump.lines().all(|l| {
        let (index, value) = l.split_once(' ').unwrap();
        index.split(',').count() == 2 && value.contains('/')
    }));
    assert_eq!(dump.lines().count(), 9);
}
