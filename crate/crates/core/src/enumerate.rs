//! Counting, exhaustive generation and uniform sampling of Catalan-Stanley
//! trees of a fixed size.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tree::PlaneTree;

/// `C_n = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigUint {
    let mut c = BigUint::one();
    // binom(2n, n) built up as a running product; every prefix is an integer
    for k in 1..=n {
        c = c * (n + k) / k;
    }
    c / (n + 1)
}

/// Number of Catalan-Stanley trees with `n` nodes: 1 for `n = 1`, else `C_{n-2}`.
pub fn count_trees(n: u64) -> Result<BigUint> {
    match n {
        0 => Err(Error::domain("tree size must be positive")),
        1 => Ok(BigUint::one()),
        _ => Ok(catalan(n - 2)),
    }
}

/// Plane-tree words of one size, split by the parity of the rightmost path
/// length (in edges). `even[k]` are exactly the trees that can hang below a
/// Catalan-Stanley root as a branch of size `k`.
struct ShapeTables {
    even: Vec<Vec<Vec<u8>>>,
    odd: Vec<Vec<Vec<u8>>>,
    forests: Vec<Vec<Vec<u8>>>,
}

impl ShapeTables {
    fn new(max_size: usize) -> Self {
        let mut tables = ShapeTables {
            even: vec![Vec::new(); max_size + 1],
            odd: vec![Vec::new(); max_size + 1],
            forests: vec![vec![Vec::new()]],
        };
        if max_size >= 1 {
            tables.even[1].push(b"()".to_vec());
        }
        for k in 2..=max_size {
            tables.extend_forests(k - 2);
            let mut even = Vec::new();
            let mut odd = Vec::new();
            // root, a forest of size a, then the last child of size k - 1 - a
            for a in 0..=k - 2 {
                let last = k - 1 - a;
                for forest in &tables.forests[a] {
                    for child in &tables.odd[last] {
                        even.push(wrap(forest, child));
                    }
                    for child in &tables.even[last] {
                        odd.push(wrap(forest, child));
                    }
                }
            }
            even.sort_unstable();
            odd.sort_unstable();
            tables.even[k] = even;
            tables.odd[k] = odd;
        }
        tables
    }

    fn extend_forests(&mut self, upto: usize) {
        while self.forests.len() <= upto {
            let a = self.forests.len();
            let mut out = Vec::new();
            for first in 1..=a {
                for tree in self.even[first].iter().chain(&self.odd[first]) {
                    for rest in &self.forests[a - first] {
                        let mut w = tree.clone();
                        w.extend_from_slice(rest);
                        out.push(w);
                    }
                }
            }
            out.sort_unstable();
            self.forests.push(out);
        }
    }
}

fn wrap(forest: &[u8], last: &[u8]) -> Vec<u8> {
    let mut w = Vec::with_capacity(forest.len() + last.len() + 2);
    w.push(b'(');
    w.extend_from_slice(forest);
    w.extend_from_slice(last);
    w.push(b')');
    w
}

/// Streams every Catalan-Stanley tree of one size, in lexicographic order of
/// the parenthesis words.
///
/// A tree is a sequence of branches whose sizes sum to `n - 1`. Branch words
/// are prefix-free, so ordering trees by their words is the same as ordering
/// branch sequences lexicographically branch by branch. The iterator keeps a
/// stack of cursors, one per chosen branch, into the list of admissible
/// branches ordered by word and filtered by the size still to be filled.
pub struct TreeIterator {
    size: usize,
    branches: Vec<Vec<u8>>,
    branch_sizes: Vec<usize>,
    /// `fitting[r]`: indices into `branches` of size at most `r`, in order.
    fitting: Vec<Vec<usize>>,
    /// (remaining size before the choice, position in `fitting[remaining]`)
    stack: Vec<(usize, usize)>,
    started: bool,
    done: bool,
}

impl TreeIterator {
    fn new(size: usize) -> Self {
        let tables = ShapeTables::new(size.saturating_sub(1));
        let mut all: Vec<(Vec<u8>, usize)> = tables
            .even
            .into_iter()
            .enumerate()
            .flat_map(|(k, words)| words.into_iter().map(move |w| (w, k)))
            .collect();
        all.sort_unstable();
        let (branches, branch_sizes): (Vec<_>, Vec<_>) = all.into_iter().unzip();
        let fitting = (0..size)
            .map(|r| {
                (0..branches.len())
                    .filter(|&i| branch_sizes[i] <= r)
                    .collect()
            })
            .collect();
        TreeIterator {
            size,
            branches,
            branch_sizes,
            fitting,
            stack: Vec::new(),
            started: false,
            done: false,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn remaining(&self) -> usize {
        match self.stack.last() {
            Some(&(rem, pos)) => rem - self.branch_sizes[self.fitting[rem][pos]],
            None => self.size - 1,
        }
    }

    fn fill(&mut self) {
        loop {
            let rem = self.remaining();
            if rem == 0 {
                break;
            }
            // a single node always fits, so fitting[rem] is never empty
            self.stack.push((rem, 0));
        }
    }

    fn advance(&mut self) -> bool {
        while let Some((rem, pos)) = self.stack.pop() {
            if pos + 1 < self.fitting[rem].len() {
                self.stack.push((rem, pos + 1));
                self.fill();
                return true;
            }
        }
        false
    }

    fn current(&self) -> PlaneTree {
        let mut word = Vec::with_capacity(2 * self.size);
        word.push(b'(');
        for &(rem, pos) in &self.stack {
            word.extend_from_slice(&self.branches[self.fitting[rem][pos]]);
        }
        word.push(b')');
        PlaneTree::from_word(word)
    }
}

impl Iterator for TreeIterator {
    type Item = PlaneTree;

    fn next(&mut self) -> Option<PlaneTree> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(self.current())
    }
}

pub fn enumerate_trees(n: usize) -> Result<TreeIterator> {
    if n == 0 {
        return Err(Error::domain("tree size must be positive"));
    }
    Ok(TreeIterator::new(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub size: usize,
    pub seed: u64,
    pub max_rejections: u64,
}

impl SamplerConfig {
    pub const DEFAULT_MAX_REJECTIONS: u64 = 1000;

    pub fn new(size: usize, seed: u64) -> Self {
        SamplerConfig {
            size,
            seed,
            max_rejections: Self::DEFAULT_MAX_REJECTIONS,
        }
    }
}

/// Rejection sampler for uniform Catalan-Stanley trees.
///
/// Each draw is a uniform Dyck path of semilength `size - 1`, generated step
/// by step with exact ballot-number transition probabilities, and is kept
/// iff all of its returns to the axis have odd length. A draw is abandoned at
/// the first even return; the accepted paths are therefore uniform over the
/// odd-return paths, i.e. the glove images of the Catalan-Stanley trees.
/// The acceptance rate `C_{n-2}/C_{n-1}` tends to 1/4.
pub struct Sampler {
    config: SamplerConfig,
    rng: ChaCha8Rng,
    buf: Vec<u8>,
}

impl Sampler {
    pub fn new(config: SamplerConfig) -> Result<Self> {
        if config.size == 0 {
            return Err(Error::domain("tree size must be positive"));
        }
        if config.max_rejections == 0 {
            return Err(Error::domain("max_rejections must be at least 1"));
        }
        Ok(Sampler {
            config,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            buf: Vec::with_capacity(2 * config.size),
        })
    }

    pub fn sample(&mut self) -> Result<PlaneTree> {
        for _ in 0..=self.config.max_rejections {
            if self.draw() {
                return Ok(PlaneTree::from_word(self.buf.clone()));
            }
        }
        Err(Error::SamplingExhausted {
            rejections: self.config.max_rejections,
        })
    }

    fn draw(&mut self) -> bool {
        let semilength = (self.config.size - 1) as u64;
        let buf = &mut self.buf;
        buf.clear();
        buf.push(b'(');
        let mut height = 0u64;
        let mut descent = 0u64;
        for left in (1..=2 * semilength).rev() {
            // paths of length `left` from `height` back to 0 that never go
            // negative; the share of them starting with an up step is
            // (h + 2)(left - h) / (2 left (h + 1))
            let up = if height == 0 {
                true
            } else if height == left {
                false
            } else {
                let num = (height + 2) * (left - height);
                let den = 2 * left * (height + 1);
                self.rng.random_range(0..den) < num
            };
            if up {
                buf.push(b'(');
                height += 1;
                descent = 0;
            } else {
                buf.push(b')');
                height -= 1;
                descent += 1;
                if height == 0 && descent.is_multiple_of(2) {
                    return false;
                }
            }
        }
        buf.push(b')');
        true
    }
}

impl Iterator for Sampler {
    type Item = Result<PlaneTree>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.sample())
    }
}

pub fn sample_tree(config: SamplerConfig) -> Result<PlaneTree> {
    Sampler::new(config)?.sample()
}
