mod common;

use std::collections::BTreeSet;

use common::{
    catalan_table, cs_trees, dyck_paths, is_cs, library_trees, plane_trees, returns, Node,
};
use cstree::{count_trees, enumerate_trees, DyckPath, PlaneTree};
use num_bigint::BigUint;

#[test]
fn enumeration_equals_filtered_plane_trees() {
    for n in 1..=11 {
        let ours: Vec<String> = enumerate_trees(n).unwrap().map(|t| t.to_string()).collect();
        let mut sorted = ours.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(
            ours, sorted,
            "enumeration of size {n} is not strictly increasing"
        );

        let oracle: BTreeSet<String> = cs_trees(n).iter().map(Node::word).collect();
        assert_eq!(
            ours.into_iter().collect::<BTreeSet<_>>(),
            oracle,
            "size {n}"
        );
    }
}

#[test]
fn counts_follow_catalan_numbers() {
    let catalan = catalan_table(20);
    assert_eq!(count_trees(1).unwrap(), BigUint::from(1u32));
    for n in 2..=14usize {
        assert_eq!(
            enumerate_trees(n).unwrap().count() as u64,
            u64::try_from(&catalan[n - 2]).unwrap()
        );
    }
    for n in 2..=22u64 {
        assert_eq!(count_trees(n).unwrap(), catalan[n as usize - 2]);
    }
}

#[test]
fn odd_returns_characterise_the_family() {
    // for every plane tree: odd branch depths <=> odd returns of the glove path
    for n in 1..=10 {
        for t in plane_trees(n) {
            let word = t.word();
            let tree: PlaneTree = word.parse().unwrap();
            let path = tree.to_dyck();
            let oracle_odd = returns(&path.to_string()).iter().all(|r| r % 2 == 1);
            assert_eq!(tree.is_catalan_stanley(), is_cs(&t), "{word}");
            assert_eq!(is_cs(&t), oracle_odd, "{word}");
            assert_eq!(path.has_odd_returns(), oracle_odd, "{word}");
        }
    }
}

#[test]
fn bijection_with_odd_return_paths() {
    for n in 1..=12usize {
        let expected: BTreeSet<String> = dyck_paths(n - 1)
            .into_iter()
            .filter(|p| returns(p).iter().all(|r| r % 2 == 1))
            .collect();
        let mut images = BTreeSet::new();
        for tree in enumerate_trees(n).unwrap() {
            let path = tree.to_dyck();
            assert_eq!(path.to_tree(), tree);
            assert_eq!(path.returns(), returns(&path.to_string()));
            let text = path.to_string();
            assert_eq!(text.parse::<DyckPath>().unwrap(), path);
            assert!(images.insert(text), "two trees share a path at size {n}");
        }
        assert_eq!(images, expected, "size {n}");
    }
}

#[test]
fn reduction_matches_definition() {
    for n in 1..=14usize {
        for (tree, node) in enumerate_trees(n).unwrap().zip(library_trees(n)) {
            let age = common::age(&node);
            assert_eq!(tree.age().unwrap(), age, "{tree}");
            assert_eq!(tree.age_by_reduction(), age);
            if n > 1 {
                let reduced = tree.reduce().unwrap();
                assert_eq!(reduced.to_string(), common::reduce(&node).word(), "{tree}");
                assert!(reduced.is_catalan_stanley());
                assert!(reduced.size() < tree.size());
                assert_eq!(reduced.age().unwrap() + 1, age);
            }
            assert!(tree.ancestor(age).unwrap().is_leaf());
            if age > 0 {
                assert!(!tree.ancestor(age - 1).unwrap().is_leaf());
            }
        }
    }
}

#[test]
fn age_bounds_hold_and_are_attained() {
    for n in 2..=14usize {
        let ages: Vec<u32> = enumerate_trees(n)
            .unwrap()
            .map(|t| t.age().unwrap())
            .collect();
        assert_eq!(ages.iter().min(), Some(&1), "n = {n}");
        assert_eq!(ages.iter().max(), Some(&(n as u32 / 2)), "n = {n}");
    }
}

#[test]
fn non_members_are_rejected() {
    let chain3 = PlaneTree::chain(3);
    assert!(!chain3.is_catalan_stanley());
    assert!(chain3.reduce().is_err());
    assert!(chain3.age().is_err());
    assert!(chain3.ancestor(0).is_err());
    let path: DyckPath = "UUDD".parse().unwrap();
    assert!(!path.has_odd_returns());
}
