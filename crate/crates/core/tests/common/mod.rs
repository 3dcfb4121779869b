//! Reference implementations for the integration tests. They work on explicit
//! node structures and plain integers and share no code with the library.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub children: Vec<Node>,
}

impl Node {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Node::size).sum::<usize>()
    }

    pub fn word(&self) -> String {
        let mut s = String::from("(");
        for c in &self.children {
            s.push_str(&c.word());
        }
        s.push(')');
        s
    }

    /// Depth of the rightmost leaf below this node, in edges.
    pub fn rightmost_depth(&self) -> usize {
        match self.children.last() {
            None => 0,
            Some(c) => 1 + c.rightmost_depth(),
        }
    }

    pub fn parse(word: &str) -> Node {
        fn go(bytes: &[u8], pos: &mut usize) -> Node {
            assert_eq!(bytes[*pos], b'(');
            *pos += 1;
            let mut children = Vec::new();
            while bytes[*pos] == b'(' {
                children.push(go(bytes, pos));
            }
            assert_eq!(bytes[*pos], b')');
            *pos += 1;
            Node { children }
        }
        let mut pos = 0;
        let node = go(word.as_bytes(), &mut pos);
        assert_eq!(pos, word.len());
        node
    }
}

/// Every branch of the root ends in a rightmost leaf at odd depth.
pub fn is_cs(t: &Node) -> bool {
    t.children
        .iter()
        .all(|b| (1 + b.rightmost_depth()) % 2 == 1)
}

/// One reduction step, straight from the definition.
pub fn reduce(t: &Node) -> Node {
    let mut children = Vec::new();
    for b in &t.children {
        let depth = 1 + b.rightmost_depth();
        if depth == 1 {
            continue;
        }
        // walk down to the grandparent of the rightmost leaf and make it a leaf
        let mut branch = b.clone();
        let mut cursor = &mut branch;
        for _ in 0..depth - 3 {
            cursor = cursor.children.last_mut().unwrap();
        }
        cursor.children.clear();
        children.push(branch);
    }
    Node { children }
}

pub fn age(t: &Node) -> u32 {
    let mut t = t.clone();
    let mut a = 0;
    while !t.children.is_empty() {
        t = reduce(&t);
        a += 1;
    }
    a
}

pub fn ancestor(t: &Node, r: u32) -> Node {
    (0..r).fold(t.clone(), |acc, _| reduce(&acc))
}

/// All ordered forests with `k` nodes.
pub fn forests(k: usize) -> Vec<Vec<Node>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=k {
        for head in plane_trees(first) {
            for rest in forests(k - first) {
                let mut f = vec![head.clone()];
                f.extend(rest);
                out.push(f);
            }
        }
    }
    out
}

/// All plane trees with `n` nodes.
pub fn plane_trees(n: usize) -> Vec<Node> {
    forests(n - 1)
        .into_iter()
        .map(|children| Node { children })
        .collect()
}

/// All Dyck paths of the given semilength as `U`/`D` strings.
pub fn dyck_paths(semilength: usize) -> Vec<String> {
    fn go(up: usize, down: usize, prefix: &mut String, out: &mut Vec<String>) {
        if up == 0 && down == 0 {
            out.push(prefix.clone());
            return;
        }
        if up > 0 {
            prefix.push('U');
            go(up - 1, down, prefix, out);
            prefix.pop();
        }
        if down > up {
            prefix.push('D');
            go(up, down - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(semilength, semilength, &mut String::new(), &mut out);
    out
}

/// Lengths of the down runs that end on the axis.
pub fn returns(path: &str) -> Vec<usize> {
    let mut height = 0i64;
    let mut run = 0;
    let mut out = Vec::new();
    for c in path.chars() {
        if c == 'U' {
            height += 1;
            run = 0;
        } else {
            height -= 1;
            run += 1;
            if height == 0 {
                out.push(run);
            }
        }
    }
    out
}

/// Catalan numbers from the convolution recurrence.
pub fn catalan_table(max: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::from(1u32)];
    for n in 1..=max {
        let next = (0..n).map(|k| &c[k] * &c[n - 1 - k]).sum();
        c.push(next);
    }
    c
}

pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qu(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Statistics of every Catalan-Stanley tree of one size, from the plane-tree oracle.
pub struct Census {
    pub count: u64,
    pub age_hist: Vec<u64>,
    /// `ancestor_hist[r][m]`: trees whose `r`-th ancestor has `m` nodes
    pub ancestor_hist: Vec<Vec<u64>>,
}

/// Census over the given trees of size `n`; ages and ancestors come from the
/// node-based reduction above.
pub fn census(n: usize, max_r: u32, trees: impl IntoIterator<Item = Node>) -> Census {
    let mut c = Census {
        count: 0,
        age_hist: vec![0; n + 1],
        ancestor_hist: vec![vec![0; n + 1]; max_r as usize + 1],
    };
    for t in trees {
        assert_eq!(t.size(), n);
        c.count += 1;
        c.age_hist[age(&t) as usize] += 1;
        let mut cur = t;
        for r in 0..=max_r as usize {
            c.ancestor_hist[r][cur.size()] += 1;
            cur = reduce(&cur);
        }
    }
    c
}

/// Catalan-Stanley trees of size `n` by filtering all plane trees.
pub fn cs_trees(n: usize) -> Vec<Node> {
    plane_trees(n).into_iter().filter(is_cs).collect()
}

/// The library's enumeration, converted to explicit nodes.
pub fn library_trees(n: usize) -> impl Iterator<Item = Node> {
    cstree::enumerate_trees(n)
        .unwrap()
        .map(|t| Node::parse(t.as_str()))
}
