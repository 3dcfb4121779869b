//! Limiting constants of the age distribution and the large-`n` expansions
//! for age and ancestor size.
//!
//! The constants are sums of rational terms. They are accumulated in decimal
//! fixed point on big integers, each term rounded down to the working scale,
//! and the summation stops once a geometric majorant of the remaining tail
//! drops below the working resolution. The `n`-dependent expansions are
//! plain `f64` evaluations.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_DIGITS: u32 = 60;

/// Reference digit strings, for checking recomputed constants.
pub const REFERENCE_DIGITS: [&str; 4] = [
    "2.7182536428679528526648361928219367344585435680344",
    "-4.2220971510158840823821873477600478080816411210406",
    "0.91845604214374797357797147814019496503688953933967",
    "-9.1621753200836274996912436568310268988536534594942",
];

/// Guard digits carried beyond the largest supported request.
const GUARD_DIGITS: u32 = 20;
const WORKING_DIGITS: u32 = MAX_DIGITS + GUARD_DIGITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstantSpec {
    pub index: usize,
    pub requested_digits: u32,
}

impl ConstantSpec {
    pub fn new(index: usize, requested_digits: u32) -> Result<Self> {
        if index > 3 {
            return Err(Error::domain(format!(
                "no constant c{index}; indices run 0..=3"
            )));
        }
        if requested_digits == 0 {
            return Err(Error::domain("at least one digit must be requested"));
        }
        if requested_digits > MAX_DIGITS {
            return Err(Error::Precision {
                requested: requested_digits,
                max: MAX_DIGITS,
            });
        }
        Ok(ConstantSpec {
            index,
            requested_digits,
        })
    }
}

/// A value scaled by `10^scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub mantissa: BigInt,
    pub scale: u32,
}

impl FixedPoint {
    /// Decimal string rounded half-up to `digits` significant digits.
    pub fn to_significant(&self, digits: u32) -> String {
        let negative = self.mantissa.is_negative();
        let abs = self.mantissa.abs();
        let text = abs.to_string();
        let scale = self.scale as i64;
        // exponent of the leading digit
        let lead = text.len() as i64 - 1 - scale;
        let keep_decimals = (digits as i64 - 1 - lead).max(0);
        let drop = (scale - keep_decimals).max(0) as u32;
        let divisor = BigInt::from(10u32).pow(drop);
        let (q, rem) = abs.div_rem(&divisor);
        let rounded = if drop > 0 && rem * 2u32 >= divisor {
            q + 1u32
        } else {
            q
        };
        let mut digits_str = rounded.to_string();
        let decimals = keep_decimals.min(scale) as usize;
        if digits_str.len() <= decimals {
            digits_str = format!(
                "{}{}",
                "0".repeat(decimals + 1 - digits_str.len()),
                digits_str
            );
        }
        let split = digits_str.len() - decimals;
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&digits_str[..split]);
        if decimals > 0 {
            out.push('.');
            out.push_str(&digits_str[split..]);
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.to_significant(17).parse().expect("decimal string")
    }
}

fn pow_u(base: u32, exp: u64) -> BigInt {
    BigInt::from(base).pow(exp as u32)
}

/// Exact term of the `c0` sum, `(4^{r+1}(3r - 1) + 4) / (4^r + 2)^2`.
fn mean_term(r: u64) -> (BigInt, BigInt) {
    let r_big = BigInt::from(r);
    let num = pow_u(4, r + 1) * (3 * &r_big - 1) + 4;
    let den = (pow_u(4, r) + 2u32).pow(2u32);
    (num, den)
}

/// Exact term of the `-c1` sum,
/// `(6·64^r(2r³-5r²+4r-1) - 6·16^r(16r³-24r²+10r-1) + 24·4^r(2r-1)r²) / (4^r + 2)^4`.
fn correction_term(k: u64) -> (BigInt, BigInt) {
    let r = BigInt::from(k);
    let r2 = &r * &r;
    let r3 = &r2 * &r;
    let num = pow_u(64, k) * 6 * (2 * &r3 - 5 * &r2 + 4 * &r - 1)
        - pow_u(16, k) * 6 * (16 * &r3 - 24 * &r2 + 10 * &r - 1)
        + pow_u(4, k) * 24 * (2 * &r - 1) * &r2;
    let den = (pow_u(4, k) + 2u32).pow(4u32);
    (num, den)
}

/// Upper bound on `sum_{r > last} 852 r^4 4^{-r}`, which dominates the
/// absolute terms of all four sums (`|terms| <= 852 r^4 4^{-r}` for `r >= 1`).
fn tail_majorant(last: u64) -> f64 {
    let first = (last + 1) as f64;
    let q = ((first + 1.0) / first).powi(4) / 4.0;
    if q >= 1.0 {
        return f64::INFINITY;
    }
    852.0 * first.powi(4) * 4f64.powf(-first) / (1.0 - q)
}

/// Number of terms after which the tail is below `10^{-digits}`.
fn terms_needed(digits: u32) -> u64 {
    let target = 10f64.powi(-(digits as i32));
    let mut last = 1;
    while tail_majorant(last) >= target {
        last += 1;
    }
    last
}

#[derive(Clone, Debug)]
struct Constants {
    values: [FixedPoint; 4],
    terms: u64,
}

fn compute_constants(digits: u32) -> Constants {
    let scale = pow_u(10, digits as u64);
    let terms = terms_needed(digits);
    let fixed = |(num, den): (BigInt, BigInt)| (num * &scale).div_floor(&den);
    let mut sums = [
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
    ];
    for r in 1..=terms {
        let weight = BigInt::from(2 * r - 1);
        let (a_num, a_den) = mean_term(r);
        let (b_num, b_den) = correction_term(r);
        sums[0] += fixed((a_num.clone(), a_den.clone()));
        sums[1] += fixed((b_num.clone(), b_den.clone()));
        sums[2] += fixed((a_num * &weight, a_den));
        sums[3] += fixed((b_num * &weight, b_den));
    }
    let [s0, s1, s2, s3] = sums;
    let c0 = s0;
    let c1 = -s1;
    let c2 = s2 - (&c0 * &c0).div_floor(&scale);
    let c3 = -s3 - (BigInt::from(2) * &c0 * &c1).div_floor(&scale);
    let wrap = |mantissa| FixedPoint {
        mantissa,
        scale: digits,
    };
    Constants {
        values: [wrap(c0), wrap(c1), wrap(c2), wrap(c3)],
        terms,
    }
}

fn constants() -> &'static Constants {
    static CACHE: OnceLock<Constants> = OnceLock::new();
    CACHE.get_or_init(|| compute_constants(WORKING_DIGITS))
}

/// High-precision value of `c0..=c3`, carried to the full working precision.
pub fn constant_value(index: usize) -> Result<FixedPoint> {
    ConstantSpec::new(index, 1)?;
    Ok(constants().values[index].clone())
}

/// `c_index` as a decimal string with the requested number of significant digits.
pub fn constant_c(spec: ConstantSpec) -> String {
    constants().values[spec.index].to_significant(spec.requested_digits)
}

/// Number of series terms summed for the cached constants.
pub fn constant_terms() -> u64 {
    constants().terms
}

fn c(index: usize) -> f64 {
    constants().values[index].to_f64()
}

/// Error order `O(n^{numer/denom})` of a truncated expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorOrder {
    pub numer: i32,
    pub denom: u32,
}

impl ErrorOrder {
    pub const fn power(numer: i32, denom: u32) -> Self {
        ErrorOrder { numer, denom }
    }
}

impl fmt::Display for ErrorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.numer, self.denom) {
            (0, _) => write!(f, "O(1)"),
            (p, 1) => write!(f, "O(n^{p})"),
            (p, q) => write!(f, "O(n^({p}/{q}))"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticEstimate {
    pub value: f64,
    pub order: ErrorOrder,
    pub terms_used: u32,
}

fn estimate(value: f64, order: ErrorOrder, terms_used: u32) -> AsymptoticEstimate {
    debug_assert!(value.is_finite());
    AsymptoticEstimate {
        value,
        order,
        terms_used,
    }
}

fn check_size(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("asymptotic expansions need n >= 2"));
    }
    Ok(())
}

/// Limit of `P(D_n >= r)`. Written in `x = 4^{-r}` so large `r` cannot overflow.
fn tail_limit(r: f64, x: f64) -> f64 {
    4.0 * ((3.0 * r - 1.0) * x + x * x) / (1.0 + 2.0 * x).powi(2)
}

/// `n^{-1}` correction of `P(D_n >= r)` (with a minus sign), in `x = 4^{-r}`.
fn tail_correction(r: f64, x: f64) -> f64 {
    let (r2, r3) = (r * r, r * r * r);
    (6.0 * (2.0 * r3 - 5.0 * r2 + 4.0 * r - 1.0) * x
        - 6.0 * (16.0 * r3 - 24.0 * r2 + 10.0 * r - 1.0) * x * x
        + 24.0 * (2.0 * r3 - r2) * x * x * x)
        / (1.0 + 2.0 * x).powi(4)
}

fn inv_pow4(r: u64) -> f64 {
    0.25f64.powi(r.min(i32::MAX as u64) as i32)
}

/// Leading part of `P(D_n = r)`, the limiting distribution.
pub fn limiting_age_probability(r: u64) -> f64 {
    let rf = r as f64;
    tail_limit(rf, inv_pow4(r)) - tail_limit(rf + 1.0, inv_pow4(r + 1))
}

/// Two-term expansion of `P(D_n = r)`.
pub fn prob_age_asym(n: u64, r: u64) -> Result<AsymptoticEstimate> {
    check_size(n)?;
    if r == 0 {
        return Err(Error::domain("age probabilities are expanded for r >= 1"));
    }
    let rf = r as f64;
    let (x, x_next) = (inv_pow4(r), inv_pow4(r + 1));
    let correction = tail_correction(rf, x) - tail_correction(rf + 1.0, x_next);
    let value = limiting_age_probability(r) - correction / n as f64;
    Ok(estimate(value, ErrorOrder::power(-2, 1), 2))
}

/// `E D_n ~ c0 + c1/n`.
pub fn expected_age_asym(n: u64) -> Result<AsymptoticEstimate> {
    check_size(n)?;
    Ok(estimate(
        c(0) + c(1) / n as f64,
        ErrorOrder::power(-2, 1),
        2,
    ))
}

/// `V D_n ~ c2 + c3/n`.
pub fn age_variance_asym(n: u64) -> Result<AsymptoticEstimate> {
    check_size(n)?;
    Ok(estimate(
        c(2) + c(3) / n as f64,
        ErrorOrder::power(-2, 1),
        2,
    ))
}

/// `E X_{n,r} ~ n/4^r + (2·4^r - 2r² + r - 2)/(2·4^r) + (2r+1)(2r-1)(r-3)r/(2·4^{r+1}) n^{-1}`.
pub fn expected_ancestor_asym(n: u64, r: u64) -> Result<AsymptoticEstimate> {
    check_size(n)?;
    let (nf, rf, x) = (n as f64, r as f64, inv_pow4(r));
    let linear = nf * x;
    let constant = (2.0 - (2.0 * rf * rf - rf + 2.0) * x) / 2.0;
    let inverse = (2.0 * rf + 1.0) * (2.0 * rf - 1.0) * (rf - 3.0) * rf * x / 8.0 / nf;
    Ok(estimate(
        linear + constant + inverse,
        ErrorOrder::power(-3, 2),
        3,
    ))
}

/// Four-term expansion of `V X_{n,r}` (terms in `n^2, n^{3/2}, n, n^{1/2}`).
pub fn ancestor_variance_asym(n: u64, r: u64) -> Result<AsymptoticEstimate> {
    check_size(n)?;
    let (nf, rf, x) = (n as f64, r as f64, inv_pow4(r));
    let sqrt_pi = std::f64::consts::PI.sqrt();
    // (4^r (3r+1) - 1) / 16^r
    let growth = (3.0 * rf + 1.0) * x - x * x;
    let quadratic = (x - x * x) * nf * nf;
    let three_halves = -sqrt_pi * growth / 3.0 * nf.powf(1.5);
    let linear = ((18.0 * rf * rf + 3.0 * rf - 38.0) * x
        + (36.0 * rf * rf - 42.0 * rf + 38.0) * x * x)
        / 18.0
        * nf;
    let half = 5.0 * sqrt_pi * growth / 8.0 * nf.sqrt();
    Ok(estimate(
        quadratic + three_halves + linear + half,
        ErrorOrder::power(0, 1),
        4,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_prefixes() {
        let c0 = constant_c(ConstantSpec::new(0, 30).unwrap());
        assert_eq!(c0, "2.71825364286795285266483619282");
        let c1 = constant_c(ConstantSpec::new(1, 30).unwrap());
        assert_eq!(c1, "-4.22209715101588408238218734776");
        let c2 = constant_c(ConstantSpec::new(2, 30).unwrap());
        assert_eq!(c2, "0.918456042143747973577971478140");
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            ConstantSpec::new(0, 61),
            Err(Error::Precision {
                requested: 61,
                max: 60
            })
        ));
        assert!(ConstantSpec::new(4, 10).is_err());
        assert!(ConstantSpec::new(0, 0).is_err());
        assert!(ConstantSpec::new(3, 60).is_ok());
    }

    #[test]
    fn significant_digit_rounding() {
        let fp = |m: i64, scale| FixedPoint {
            mantissa: BigInt::from(m),
            scale,
        };
        assert_eq!(fp(314159, 5).to_significant(3), "3.14");
        assert_eq!(fp(314159, 5).to_significant(6), "3.14159");
        assert_eq!(fp(-99999, 4).to_significant(3), "-10.00");
        assert_eq!(fp(1234, 5).to_significant(2), "0.012");
        assert_eq!(fp(123456, 2).to_significant(2), "1235");
    }

    #[test]
    fn tail_stopping_rule() {
        let terms = terms_needed(65);
        assert!(tail_majorant(terms) < 1e-65);
        assert!(tail_majorant(terms - 1) >= 1e-65);
        // brute check of the term bound on the first hundred terms
        for r in 1..100u64 {
            let bound = 852.0 * (r as f64).powi(4) * 0.25f64.powi(r as i32);
            for (num, den) in [mean_term(r), correction_term(r)] {
                let weighted = num * BigInt::from(2 * r - 1);
                let value = crate::stats::to_f64(&num_rational::BigRational::new(weighted, den));
                assert!(value.abs() <= bound, "r = {r}");
            }
        }
    }

    #[test]
    fn limit_pmf_telescopes() {
        let total: f64 = (1..200).map(limiting_age_probability).sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!(limiting_age_probability(1).abs() < 1e-15);
        let p = prob_age_asym(400, 1).unwrap();
        assert!(p.value.abs() < 1e-12);
        assert_eq!(p.order, ErrorOrder::power(-2, 1));
    }

    #[test]
    fn ancestor_expansion_examples() {
        assert_eq!(expected_ancestor_asym(37, 0).unwrap().value, 37.0);
        let e = expected_ancestor_asym(5, 1).unwrap().value;
        assert!((e - 1.8375).abs() < 1e-12);
        assert_eq!(ancestor_variance_asym(1000, 0).unwrap().value, 0.0);
        // leading coefficient at r = 2 is 15/256
        let v = ancestor_variance_asym(1_000_000_000, 2).unwrap().value / 1e18;
        assert!((v - 15.0 / 256.0).abs() < 1e-5);
    }

    #[test]
    fn expansions_approach_constants() {
        let big = 1u64 << 40;
        assert!((expected_age_asym(big).unwrap().value - c(0)).abs() < 1e-11);
        assert!((age_variance_asym(big).unwrap().value - c(2)).abs() < 1e-11);
        assert!(expected_age_asym(1).is_err());
        assert_eq!(ErrorOrder::power(-3, 2).to_string(), "O(n^(-3/2))");
        assert_eq!(ErrorOrder::power(-2, 1).to_string(), "O(n^-2)");
        assert_eq!(ErrorOrder::power(0, 1).to_string(), "O(1)");
    }

    #[test]
    fn matches_reference_strings_to_45_digits() {
        for (i, reference) in REFERENCE_DIGITS.iter().enumerate() {
            let ours = constant_c(ConstantSpec::new(i, 60).unwrap());
            let strip = |s: &str| {
                s.chars()
                    .filter(|c| c.is_ascii_digit())
                    .take(45)
                    .collect::<String>()
            };
            assert_eq!(strip(&ours), strip(reference), "c{i}: {ours}");
            assert_eq!(ours.starts_with('-'), reference.starts_with('-'));
        }
    }
}
