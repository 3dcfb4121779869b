//! Exact age and ancestor statistics from closed binomial formulas, with
//! distribution tables read off the generating functions.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumerate::{catalan, count_trees};
use crate::error::{Error, Result};
use crate::series::{series_g, Rational};

/// `binom(a, b)`, zero unless `0 <= b <= a`.
pub fn binom(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for k in 1..=b {
        acc = acc * (a - b + k) / k;
    }
    acc
}

/// Values `binom(m, k)` for `m = 0..=max_m` with `k` fixed.
fn binomial_column(max_m: i64, k: i64) -> Vec<BigUint> {
    let mut col = vec![BigUint::zero(); (max_m + 1).max(0) as usize];
    if k < 0 || k > max_m {
        return col;
    }
    let mut value = BigUint::one();
    col[k as usize] = value.clone();
    for m in k + 1..=max_m {
        value = value * (m as u64) / ((m - k) as u64);
        col[m as usize] = value.clone();
    }
    col
}

pub fn odd_divisor_count(k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::domain("odd divisors are counted for k >= 1"));
    }
    let mut odd = k;
    while odd.is_multiple_of(2) {
        odd /= 2;
    }
    // divisors of the odd part
    let mut count = 0;
    let mut d = 1;
    while d * d <= odd {
        if odd.is_multiple_of(d) {
            count += if d * d == odd { 1 } else { 2 };
        }
        d += 2;
    }
    Ok(count)
}

/// The bracket `binom(m, n-3) + binom(m, n-2) - 2 binom(m, n-1)` shared by
/// the age formulas, tabulated for `m = 0..=2n-4`.
///
/// The table only applies to `n >= 3`; at `n = 2` the underlying
/// coefficient extraction needs a negative exponent and the bracket sum
/// does not terminate, so size 2 is handled directly by the callers.
struct AgeBrackets {
    n: i64,
    values: Vec<BigInt>,
}

impl AgeBrackets {
    fn new(n: u64) -> Self {
        debug_assert!(n >= 3);
        let n = n as i64;
        let max_m = 2 * n - 4;
        let cols = [
            binomial_column(max_m, n - 3),
            binomial_column(max_m, n - 2),
            binomial_column(max_m, n - 1),
        ];
        let values = (0..=max_m as usize)
            .map(|m| {
                BigInt::from(cols[0][m].clone()) + BigInt::from(cols[1][m].clone())
                    - BigInt::from(&cols[2][m] * 2u32)
            })
            .collect();
        AgeBrackets { n, values }
    }

    /// Bracket at `m`, zero below `n - 3` (all three binomials vanish).
    fn at(&self, m: i64) -> BigInt {
        if m < 0 || m < self.n - 3 {
            BigInt::zero()
        } else {
            self.values[m as usize].clone()
        }
    }

    /// `f_{n,r}`: alternating sum over `j` with `m = 2n - 4 - j(2r - 1)`.
    fn count_geq(&self, r: u64) -> BigUint {
        let step = 2 * r as i64 - 1;
        let mut total = BigInt::zero();
        let mut j = 1i64;
        loop {
            let m = 2 * self.n - 4 - j * step;
            if m < self.n - 3 {
                break;
            }
            let term = self.at(m);
            if j % 2 == 1 {
                total += term;
            } else {
                total -= term;
            }
            j += 1;
        }
        total.to_biguint().expect("tree counts are nonnegative")
    }
}

/// Number of trees of size `n` and age at least `r`.
pub fn age_count_geq(n: u64, r: u64) -> Result<BigUint> {
    if n < 2 || r < 1 {
        return Err(Error::domain("age counts need n >= 2 and r >= 1"));
    }
    if n == 2 {
        return Ok(if r == 1 {
            BigUint::one()
        } else {
            BigUint::zero()
        });
    }
    Ok(AgeBrackets::new(n).count_geq(r))
}

/// `f_{n,1}, f_{n,2}, ...` up to the last nonzero count (`r = floor(n/2)`).
pub fn age_counts(n: u64) -> Result<Vec<BigUint>> {
    if n < 2 {
        return Err(Error::domain("age counts need n >= 2"));
    }
    if n == 2 {
        return Ok(vec![BigUint::one()]);
    }
    let brackets = AgeBrackets::new(n);
    Ok((1..=n / 2).map(|r| brackets.count_geq(r)).collect())
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

fn int(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum DistributionKind {
    Age,
    Ancestor { depth: u32 },
}

/// Exact probability mass function of an integer-valued statistic over the
/// uniformly random tree of a given size. Only values of positive mass are
/// listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionTable {
    size: u64,
    kind: DistributionKind,
    support: Vec<u64>,
    mass: Vec<Rational>,
}

impl DistributionTable {
    /// Builds a table from `(value, mass)` pairs; zero masses are dropped.
    /// Fails unless the values are strictly increasing and the masses are
    /// nonnegative and add up to one.
    pub fn new(size: u64, kind: DistributionKind, entries: Vec<(u64, Rational)>) -> Result<Self> {
        let entries: Vec<_> = entries.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::domain("support must be strictly increasing"));
        }
        if entries.iter().any(|(_, p)| p.is_negative()) {
            return Err(Error::domain("negative probability mass"));
        }
        let total: Rational = entries.iter().map(|(_, p)| p).sum();
        if !total.is_one() {
            return Err(Error::domain(format!("masses sum to {total}, not 1")));
        }
        let (support, mass) = entries.into_iter().unzip();
        Ok(DistributionTable {
            size,
            kind,
            support,
            mass,
        })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn mass(&self) -> &[Rational] {
        &self.mass
    }

    pub fn prob(&self, value: u64) -> Rational {
        self.support
            .binary_search(&value)
            .map_or_else(|_| Rational::zero(), |i| self.mass[i].clone())
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.support.iter().copied().zip(&self.mass)
    }

    pub fn mean(&self) -> Rational {
        self.iter().map(|(x, p)| int(x) * p).sum()
    }

    pub fn second_moment(&self) -> Rational {
        self.iter().map(|(x, p)| int(x * x) * p).sum()
    }

    /// `E X (X - 1)`.
    pub fn second_factorial_moment(&self) -> Rational {
        self.iter()
            .map(|(x, p)| int(x * x.saturating_sub(1)) * p)
            .sum()
    }

    pub fn variance(&self) -> Rational {
        let mean = self.mean();
        self.second_moment() - &mean * &mean
    }

    pub fn moments(&self, source: MomentSource) -> MomentReport {
        MomentReport {
            n: self.size,
            r: match self.kind {
                DistributionKind::Age => None,
                DistributionKind::Ancestor { depth } => Some(depth),
            },
            expectation: self.mean(),
            variance: self.variance(),
            source,
        }
    }

    /// `value,probability` with a header line; probabilities as reduced fractions.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,probability\n");
        for (x, p) in self.iter() {
            let _ = writeln!(out, "{x},{}/{}", p.numer(), p.denom());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mass: Vec<Value> = self
            .iter()
            .map(|(x, p)| {
                json!({
                    "value": x,
                    "numerator": p.numer().to_string(),
                    "denominator": p.denom().to_string(),
                })
            })
            .collect();
        json!({
            "size": self.size,
            "statistic": self.kind,
            "mass": mass,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentSource {
    Formula,
    Series,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub n: u64,
    pub r: Option<u32>,
    pub expectation: Rational,
    pub variance: Rational,
    pub source: MomentSource,
}

impl MomentReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "r": self.r,
            "expectation": self.expectation.to_string(),
            "variance": self.variance.to_string(),
            "expectation_approx": to_f64(&self.expectation),
            "variance_approx": to_f64(&self.variance),
            "source": self.source,
        })
    }
}

/// Nearest `f64`, also for numerators and denominators beyond `f64` range.
pub fn to_f64(q: &Rational) -> f64 {
    let (num, den) = (q.numer(), q.denom());
    let shift = num.bits().max(den.bits()).saturating_sub(1000) as usize;
    let (num, den) = (num >> shift, den >> shift);
    if den.is_zero() {
        return 0.0;
    }
    num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN)
}

/// Distribution of the age of a uniformly random tree of size `n`.
pub fn age_distribution(n: u64) -> Result<DistributionTable> {
    if n == 0 {
        return Err(Error::domain("tree size must be positive"));
    }
    if n == 1 {
        return DistributionTable::new(1, DistributionKind::Age, vec![(0, Rational::one())]);
    }
    let total = catalan(n - 2);
    let counts = age_counts(n)?;
    let entries = (0..counts.len())
        .map(|i| {
            let next = counts.get(i + 1).cloned().unwrap_or_default();
            let exact = &counts[i] - next;
            (i as u64 + 1, ratio(exact, total.clone()))
        })
        .collect();
    DistributionTable::new(n, DistributionKind::Age, entries)
}

/// Expected age via the odd-divisor sum
/// `1/C_{n-2} * sum_k (-1)^{k+1} oddiv(k) [binom(2n-4-k, n-3) + binom(2n-4-k, n-2) - 2 binom(2n-4-k, n-1)]`.
pub fn expected_age(n: u64) -> Result<Rational> {
    match n {
        0 => Err(Error::domain("tree size must be positive")),
        1 => Ok(Rational::zero()),
        2 => Ok(Rational::one()),
        _ => {
            let brackets = AgeBrackets::new(n);
            let top = 2 * n as i64 - 4;
            let mut total = BigInt::zero();
            // beyond k = n - 1 the upper index drops below n - 3
            for k in 1..n {
                let term = brackets.at(top - k as i64) * BigInt::from(odd_divisor_count(k)?);
                if k.is_odd() {
                    total += term;
                } else {
                    total -= term;
                }
            }
            Ok(ratio(total, catalan(n - 2)))
        }
    }
}

/// Expected age as `sum_r P(D_n >= r)` from the tail counts.
pub fn expected_age_from_tails(n: u64) -> Result<Rational> {
    match n {
        0 => Err(Error::domain("tree size must be positive")),
        1 => Ok(Rational::zero()),
        _ => {
            let sum: BigUint = age_counts(n)?.into_iter().sum();
            Ok(ratio(sum, catalan(n - 2)))
        }
    }
}

/// Variance of the age, `sum_r (2r - 1) P(D_n >= r) - (E D_n)^2`.
pub fn age_variance(n: u64) -> Result<Rational> {
    match n {
        0 => Err(Error::domain("tree size must be positive")),
        1 => Ok(Rational::zero()),
        _ => {
            let counts = age_counts(n)?;
            let total = catalan(n - 2);
            let first: BigUint = counts.iter().sum();
            let second: BigUint = counts
                .iter()
                .enumerate()
                .map(|(i, f)| f * (2 * i as u64 + 1))
                .sum();
            let mean = ratio(first, total.clone());
            Ok(ratio(second, total) - &mean * &mean)
        }
    }
}

pub fn age_moments(n: u64) -> Result<MomentReport> {
    Ok(MomentReport {
        n,
        r: None,
        expectation: expected_age(n)?,
        variance: age_variance(n)?,
        source: MomentSource::Formula,
    })
}

/// `E X_{n,r} = binom(2n - 2r - 4, n - 2) / C_{n-2} + 1`.
pub fn expected_ancestor_size(n: u64, r: u64) -> Result<Rational> {
    match n {
        0 => Err(Error::domain("tree size must be positive")),
        1 => Ok(Rational::one()),
        _ if r == 0 => Ok(int(n)),
        _ => {
            let top = 2 * n as i64 - 2 * r as i64 - 4;
            Ok(ratio(binom(top, n as i64 - 2), catalan(n - 2)) + Rational::one())
        }
    }
}

/// Distribution of the size of the `r`-th ancestor, read from the `z^n`
/// slice of the ancestor-size generating function computed to `order`.
pub fn ancestor_distribution(n: u64, r: u32, order: usize) -> Result<DistributionTable> {
    let kind = DistributionKind::Ancestor { depth: r };
    if n == 0 {
        return Err(Error::domain("tree size must be positive"));
    }
    if r == 0 || n == 1 {
        let value = if r == 0 { n } else { 1 };
        return DistributionTable::new(n, kind, vec![(value, Rational::one())]);
    }
    if n as usize > order {
        return Err(Error::Capacity {
            required: n as usize,
            order,
        });
    }
    let total = Rational::from_integer(count_trees(n)?.into());
    let slice = series_g(r, order).z_slice(n as usize);
    let entries = slice
        .into_iter()
        .enumerate()
        .map(|(m, c)| (m as u64, c / &total))
        .collect();
    DistributionTable::new(n, kind, entries)
}
