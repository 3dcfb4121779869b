//! Rooted plane trees, the Catalan-Stanley predicate, the glove bijection
//! with Dyck paths, and the reduction that drives the growth process.
//!
//! A tree is stored as its balanced-parentheses word: `()` is a single node
//! and `(c1 c2 ... ck)` is a root whose children are the trees `c1..ck`.
//! Dropping the outer pair gives the Dyck word of the glove bijection, and a
//! branch of the root is exactly an arch of that Dyck word. The depth of the
//! rightmost leaf of a branch is the length of the run of `)` that closes the
//! branch, so most operations here are linear scans over the word.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const OPEN: u8 = b'(';
const CLOSE: u8 = b')';

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaneTree {
    word: Vec<u8>,
}

impl PlaneTree {
    /// The tree consisting of just the root.
    pub fn leaf() -> Self {
        PlaneTree {
            word: vec![OPEN, CLOSE],
        }
    }

    pub fn from_children<I>(children: I) -> Self
    where
        I: IntoIterator<Item = PlaneTree>,
    {
        let mut word = vec![OPEN];
        for child in children {
            word.extend_from_slice(&child.word);
        }
        word.push(CLOSE);
        PlaneTree { word }
    }

    /// Path with `n` nodes hanging below the root (the root included).
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1, "a tree has at least one node");
        let mut word = vec![OPEN; n];
        word.resize(2 * n, CLOSE);
        PlaneTree { word }
    }

    /// Root with `n - 1` leaf children.
    pub fn star(n: usize) -> Self {
        assert!(n >= 1, "a tree has at least one node");
        let mut word = Vec::with_capacity(2 * n);
        word.push(OPEN);
        for _ in 1..n {
            word.extend_from_slice(b"()");
        }
        word.push(CLOSE);
        PlaneTree { word }
    }

    /// Wraps a word that is already known to be a single balanced arch.
    pub(crate) fn from_word(word: Vec<u8>) -> Self {
        debug_assert!(
            is_arch(&word),
            "not a tree word: {:?}",
            String::from_utf8_lossy(&word)
        );
        PlaneTree { word }
    }

    pub fn size(&self) -> usize {
        self.word.len() / 2
    }

    pub fn is_leaf(&self) -> bool {
        self.word.len() == 2
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.word).expect("tree words are ASCII")
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.word
    }

    fn inner(&self) -> &[u8] {
        &self.word[1..self.word.len() - 1]
    }

    pub fn num_children(&self) -> usize {
        arches(self.inner()).count()
    }

    pub fn children(&self) -> Vec<PlaneTree> {
        arches(self.inner())
            .map(|arch| PlaneTree {
                word: arch.to_vec(),
            })
            .collect()
    }

    /// The subtree at a root-to-node sequence of child indices.
    pub fn node_at(&self, position: &[usize]) -> Option<PlaneTree> {
        let mut word: &[u8] = &self.word;
        for &index in position {
            word = arches(&word[1..word.len() - 1]).nth(index)?;
        }
        Some(PlaneTree {
            word: word.to_vec(),
        })
    }

    /// Depth of the rightmost leaf of each root branch, left to right.
    pub fn branch_depths(&self) -> impl Iterator<Item = usize> + '_ {
        arches(self.inner()).map(trailing_closes)
    }

    /// Every root branch has its rightmost leaf at odd depth.
    pub fn is_catalan_stanley(&self) -> bool {
        self.branch_depths().all(|d| d % 2 == 1)
    }

    fn require_catalan_stanley(&self) -> Result<()> {
        if self.is_catalan_stanley() {
            Ok(())
        } else {
            Err(Error::NotCatalanStanley(self.to_string()))
        }
    }

    /// One step of the reduction: depth-1 branches vanish, and in every
    /// other branch the grandparent of the rightmost leaf loses all of its
    /// subtrees, becoming the new rightmost leaf two levels higher.
    pub fn reduce(&self) -> Result<PlaneTree> {
        self.require_catalan_stanley()?;
        Ok(self.reduce_unchecked())
    }

    fn reduce_unchecked(&self) -> PlaneTree {
        let mut word = Vec::with_capacity(self.word.len());
        word.push(OPEN);
        for arch in arches(self.inner()) {
            let depth = trailing_closes(arch);
            if depth == 1 {
                continue;
            }
            // the node at depth j of the rightmost path closes at len - j
            let close = arch.len() - (depth - 2);
            let open = matching_open(arch, close);
            word.extend_from_slice(&arch[..open]);
            word.extend_from_slice(b"()");
            word.extend_from_slice(&arch[close + 1..]);
        }
        word.push(CLOSE);
        PlaneTree { word }
    }

    /// Number of growth rounds needed to produce this tree from the single
    /// node, read off the deepest rightmost leaf among the root branches.
    pub fn age(&self) -> Result<u32> {
        self.require_catalan_stanley()?;
        let age = self
            .branch_depths()
            .max()
            .map_or(0, |depth| (depth as u32).div_ceil(2));
        debug_assert_eq!(age, self.age_by_reduction());
        Ok(age)
    }

    /// Age counted by reducing until only the root is left.
    pub fn age_by_reduction(&self) -> u32 {
        let mut tree = self.clone();
        let mut steps = 0;
        while !tree.is_leaf() {
            tree = tree.reduce_unchecked();
            steps += 1;
        }
        steps
    }

    /// The `r`-th ancestor, i.e. `r` applications of [`PlaneTree::reduce`].
    pub fn ancestor(&self, r: u32) -> Result<PlaneTree> {
        self.require_catalan_stanley()?;
        let mut tree = self.clone();
        for _ in 0..r {
            if tree.is_leaf() {
                break;
            }
            tree = tree.reduce_unchecked();
        }
        Ok(tree)
    }

    /// Glove bijection: preorder walk over the edges, `(` going down.
    pub fn to_dyck(&self) -> DyckPath {
        DyckPath {
            steps: self
                .inner()
                .iter()
                .map(|&b| if b == OPEN { Step::Up } else { Step::Down })
                .collect(),
        }
    }

    pub fn marked_view(&self) -> MarkedView {
        MarkedView::new(self.clone())
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneTree({})", self.as_str())
    }
}

impl FromStr for PlaneTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_tree(s)
    }
}

/// Parses the balanced-parentheses form written by `Display`.
pub fn parse_tree(text: &str) -> Result<PlaneTree> {
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse {
            offset: 0,
            reason: "empty input",
        });
    }
    let mut depth = 0usize;
    for (offset, &b) in bytes.iter().enumerate() {
        match b {
            OPEN => {
                if depth == 0 && offset > 0 {
                    return Err(Error::Parse {
                        offset,
                        reason: "text continues after the root is closed",
                    });
                }
                depth += 1;
            }
            CLOSE => {
                if depth == 0 {
                    return Err(Error::Parse {
                        offset,
                        reason: "unmatched ')'",
                    });
                }
                depth -= 1;
            }
            _ => {
                return Err(Error::Parse {
                    offset,
                    reason: "expected '(' or ')'",
                })
            }
        }
    }
    if depth != 0 {
        return Err(Error::Parse {
            offset: bytes.len(),
            reason: "unbalanced: missing ')'",
        });
    }
    Ok(PlaneTree {
        word: bytes.to_vec(),
    })
}

/// Splits a balanced word into its top-level arches.
pub(crate) fn arches(word: &[u8]) -> impl Iterator<Item = &[u8]> + '_ {
    let mut start = 0;
    std::iter::from_fn(move || {
        if start >= word.len() {
            return None;
        }
        let mut depth = 0i64;
        for (i, &b) in word[start..].iter().enumerate() {
            depth += if b == OPEN { 1 } else { -1 };
            if depth == 0 {
                let arch = &word[start..start + i + 1];
                start += i + 1;
                return Some(arch);
            }
        }
        unreachable!("unbalanced word")
    })
}

pub(crate) fn trailing_closes(word: &[u8]) -> usize {
    word.iter().rev().take_while(|&&b| b == CLOSE).count()
}

fn matching_open(word: &[u8], close: usize) -> usize {
    let mut depth = 0i64;
    for i in (0..=close).rev() {
        depth += if word[i] == CLOSE { 1 } else { -1 };
        if depth == 0 {
            return i;
        }
    }
    unreachable!("unbalanced word")
}

fn is_arch(word: &[u8]) -> bool {
    let mut depth = 0i64;
    for (i, &b) in word.iter().enumerate() {
        match b {
            OPEN => depth += 1,
            CLOSE => depth -= 1,
            _ => return false,
        }
        if depth == 0 && i + 1 != word.len() {
            return false;
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0 && !word.is_empty()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    Down,
}

impl Step {
    pub fn value(self) -> i64 {
        match self {
            Step::Up => 1,
            Step::Down => -1,
        }
    }
}

/// A nonnegative walk of `+1/-1` steps returning to height zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut height = 0i64;
        for (step, s) in steps.iter().enumerate() {
            height += s.value();
            if height < 0 {
                return Err(Error::MalformedPath {
                    step,
                    reason: "path dips below the axis",
                });
            }
        }
        if height != 0 {
            return Err(Error::MalformedPath {
                step: steps.len(),
                reason: "path does not end on the axis",
            });
        }
        Ok(DyckPath { steps })
    }

    /// Builds a path from `+1`/`-1` values.
    pub fn from_values(values: &[i64]) -> Result<Self> {
        let steps = values
            .iter()
            .enumerate()
            .map(|(step, &v)| match v {
                1 => Ok(Step::Up),
                -1 => Ok(Step::Down),
                _ => Err(Error::MalformedPath {
                    step,
                    reason: "steps must be +1 or -1",
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Lengths of the maximal descents that end on the axis, left to right.
    pub fn returns(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut height = 0i64;
        let mut run = 0usize;
        for s in &self.steps {
            height += s.value();
            match s {
                Step::Down => run += 1,
                Step::Up => run = 0,
            }
            if height == 0 {
                out.push(run);
            }
        }
        out
    }

    pub fn has_odd_returns(&self) -> bool {
        self.returns().iter().all(|r| r % 2 == 1)
    }

    /// Inverse of [`PlaneTree::to_dyck`].
    pub fn to_tree(&self) -> PlaneTree {
        let mut word = Vec::with_capacity(self.steps.len() + 2);
        word.push(OPEN);
        word.extend(self.steps.iter().map(|s| match s {
            Step::Up => OPEN,
            Step::Down => CLOSE,
        }));
        word.push(CLOSE);
        PlaneTree { word }
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(match s {
                Step::Up => "U",
                Step::Down => "D",
            })?;
        }
        Ok(())
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    /// Reads a word over `U` (up) and `D` (down).
    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .chars()
            .enumerate()
            .map(|(step, c)| match c {
                'U' => Ok(Step::Up),
                'D' => Ok(Step::Down),
                _ => Err(Error::MalformedPath {
                    step,
                    reason: "expected 'U' or 'D'",
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(steps)
    }
}

/// A tree together with the rightmost leaf of each root branch, the nodes
/// marked by `t` in the bivariate generating functions.
///
/// Positions are root-to-node sequences of child indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedView {
    tree: PlaneTree,
    marked: Vec<Vec<usize>>,
}

impl MarkedView {
    pub fn new(tree: PlaneTree) -> Self {
        let marked = tree
            .children()
            .into_iter()
            .enumerate()
            .map(|(index, branch)| {
                let mut position = vec![index];
                let mut node = branch;
                loop {
                    let mut children = node.children();
                    match children.pop() {
                        Some(last) => {
                            position.push(children.len());
                            node = last;
                        }
                        None => break,
                    }
                }
                position
            })
            .collect();
        MarkedView { tree, marked }
    }

    pub fn tree(&self) -> &PlaneTree {
        &self.tree
    }

    pub fn marked(&self) -> &[Vec<usize>] {
        &self.marked
    }

    /// Number of nodes not marked, the exponent of `z`.
    pub fn unmarked_count(&self) -> usize {
        self.tree.size() - self.marked.len()
    }
}
