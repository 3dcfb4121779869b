//! Cross-checks between brute-force enumeration, the generating functions,
//! the closed formulas, and the high-precision constants.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{constant_c, ConstantSpec, REFERENCE_DIGITS};
use crate::enumerate::{catalan, enumerate_trees};
use crate::error::{Error, Result};
use crate::series::{
    phi_apply, phi_power, series_f_geq, series_f_leq, series_g, series_s, Bivariate, Mark,
    Rational, Series,
};
use crate::stats::{
    age_count_geq, age_variance, expected_age, expected_age_from_tails, expected_ancestor_size,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_size: usize,
    pub max_r: u32,
    pub order: usize,
    /// Perturbs one entry of the Catalan table so the harness can be seen to fail.
    pub corrupt_catalan: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_size: 12,
            max_r: 5,
            order: 16,
            corrupt_catalan: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub scope: String,
    pub passed: bool,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    fn push(
        &mut self,
        name: &str,
        scope: String,
        lhs: impl ToString,
        rhs: impl ToString,
        passed: bool,
    ) {
        self.checks.push(Check {
            name: name.to_string(),
            scope,
            passed,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }

    fn compare<T: PartialEq + std::fmt::Debug>(
        &mut self,
        name: &str,
        scope: String,
        lhs: T,
        rhs: T,
    ) {
        let passed = lhs == rhs;
        self.push(name, scope, format!("{lhs:?}"), format!("{rhs:?}"), passed);
    }

    pub fn summary(&self) -> Summary {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        Summary {
            total: self.checks.len(),
            passed,
            failed: self.checks.len() - passed,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({ "checks": self.checks, "summary": self.summary() })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,scope,passed,lhs,rhs\n");
        for c in &self.checks {
            let fields = [
                c.name.as_str(),
                &c.scope,
                if c.passed { "true" } else { "false" },
                &c.lhs,
                &c.rhs,
            ];
            let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{status} {:<22} {:<16} lhs={} rhs={}",
                c.name, c.scope, c.lhs, c.rhs
            );
        }
        let s = self.summary();
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            s.total, s.passed, s.failed
        );
        out
    }
}

pub(crate) fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Everything the checks need from one exhaustive pass over a size.
struct Census {
    count: u64,
    /// `age_hist[a]` trees of age `a`
    age_hist: Vec<u64>,
    /// `ancestor_hist[r - 1][m]` trees whose `r`-th ancestor has size `m`
    ancestor_hist: Vec<Vec<u64>>,
    bijection_ok: bool,
}

fn census(n: usize, max_r: u32, with_bijection: bool) -> Result<Census> {
    let mut c = Census {
        count: 0,
        age_hist: vec![0; n / 2 + 1],
        ancestor_hist: vec![vec![0; n + 1]; max_r as usize],
        bijection_ok: true,
    };
    for tree in enumerate_trees(n)? {
        c.count += 1;
        c.age_hist[tree.age()? as usize] += 1;
        let mut current = tree.clone();
        for r in 0..max_r as usize {
            current = current.reduce()?;
            c.ancestor_hist[r][current.size()] += 1;
        }
        if with_bijection {
            let path = tree.to_dyck();
            c.bijection_ok &=
                path.has_odd_returns() && path.to_tree() == tree && path.len() == 2 * (n - 1);
        }
    }
    Ok(c)
}

fn frac(num: u64, den: u64) -> Rational {
    Rational::new(num.into(), den.into())
}

fn series_count(s: &Series, n: usize) -> Option<BigUint> {
    let c = s.coeff(n);
    c.is_integer()
        .then(|| c.to_integer().to_biguint())
        .flatten()
}

fn scope_n(n: usize) -> String {
    format!("n={n}")
}

fn check_enumeration(
    report: &mut VerifyReport,
    config: &VerifyConfig,
    censuses: &BTreeMap<usize, Census>,
) -> Result<()> {
    let mut table: Vec<BigUint> = (0..=config.max_size as u64).map(catalan).collect();
    if config.corrupt_catalan {
        table[2] += 1u32;
    }
    let geq: Vec<Series> = (1..=config.max_r)
        .map(|r| series_f_geq(r, config.order))
        .collect();
    for (&n, c) in censuses {
        report.compare(
            "catalan-count",
            scope_n(n),
            BigUint::from(c.count),
            table[n - 2].clone(),
        );

        // f_{n,r} three ways: brute force, binomial sum, series coefficient
        let mut brute = Vec::new();
        let mut formula = Vec::new();
        let mut series_ok = true;
        for r in 1..=config.max_r as usize {
            let b: u64 = c.age_hist.iter().skip(r).sum();
            let f = age_count_geq(n as u64, r as u64)?;
            if n <= config.order {
                series_ok &= series_count(&geq[r - 1], n) == Some(f.clone());
            }
            brute.push(BigUint::from(b));
            formula.push(f);
        }
        let passed = brute == formula && series_ok;
        report.push(
            "age-tail-counts",
            format!("n={n},r<={}", config.max_r),
            format!("{brute:?}"),
            format!("{formula:?}"),
            passed,
        );
        if n == 4 && config.max_r >= 2 {
            let series_value = series_count(&geq[1], 4);
            let ok = brute[1] == BigUint::one()
                && formula[1] == BigUint::one()
                && series_value == Some(BigUint::one());
            report.push("f(4,2)=1", "n=4,r=2".into(), &brute[1], &formula[1], ok);
        }
    }
    Ok(())
}

fn check_moments(
    report: &mut VerifyReport,
    config: &VerifyConfig,
    censuses: &BTreeMap<usize, Census>,
) -> Result<()> {
    for (&n, c) in censuses {
        let weighted: u64 = c
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
        let mean = frac(weighted, c.count);
        let variance = frac(squares, c.count) - &mean * &mean;
        let formula = expected_age(n as u64)?;
        let tails = expected_age_from_tails(n as u64)?;
        let passed = mean == formula && formula == tails;
        report.push("expected-age", scope_n(n), &mean, &formula, passed);
        report.compare(
            "age-variance",
            scope_n(n),
            variance,
            age_variance(n as u64)?,
        );

        let mut brute = Vec::new();
        let mut formula = Vec::new();
        for r in 1..=config.max_r as usize {
            let total: u64 = c.ancestor_hist[r - 1]
                .iter()
                .enumerate()
                .map(|(m, k)| m as u64 * k)
                .sum();
            brute.push(frac(total, c.count).to_string());
            formula.push(expected_ancestor_size(n as u64, r as u64)?.to_string());
        }
        report.compare(
            "expected-ancestor",
            format!("n={n},r<={}", config.max_r),
            brute,
            formula,
        );
    }
    Ok(())
}

fn check_ancestor_pmf(
    report: &mut VerifyReport,
    config: &VerifyConfig,
    censuses: &BTreeMap<usize, Census>,
) {
    for r in 1..=config.max_r {
        let g = series_g(r, config.order);
        let mut passed = true;
        let mut checked = 0;
        for (&n, c) in censuses.iter().filter(|(&n, _)| n <= config.order) {
            let slice = g.z_slice(n);
            let hist = &c.ancestor_hist[r as usize - 1];
            passed &= slice.len() >= hist.len()
                && slice.iter().enumerate().all(|(m, coeff)| {
                    *coeff == Rational::from_integer(hist.get(m).copied().unwrap_or(0).into())
                });
            checked += 1;
        }
        report.push(
            "ancestor-pmf",
            format!("r={r},n<={}", config.max_size.min(config.order)),
            checked,
            checked,
            passed,
        );
    }
}

fn check_bounds(
    report: &mut VerifyReport,
    config: &VerifyConfig,
    censuses: &BTreeMap<usize, Census>,
) {
    for (&n, c) in censuses {
        let lowest = c.age_hist.iter().position(|&k| k > 0).unwrap_or(0);
        let highest = c.age_hist.iter().rposition(|&k| k > 0).unwrap_or(0);
        report.compare("age-bounds", scope_n(n), (lowest, highest), (1, n / 2));

        // 1 <= X <= n - 2r + 1 for r <= n/2 with the lower bound attained,
        // and X = 1 beyond
        let mut holds = true;
        let mut lower_attained = true;
        for r in 1..=config.max_r as usize {
            let hist = &c.ancestor_hist[r - 1];
            let max = hist.iter().rposition(|&k| k > 0).unwrap_or(0);
            lower_attained &= hist[1] > 0;
            holds &= hist[0] == 0
                && if r <= n / 2 {
                    max as i64 <= n as i64 - 2 * r as i64 + 1
                } else {
                    max == 1
                };
        }
        report.push(
            "ancestor-bounds",
            format!("n={n},r<={}", config.max_r),
            holds,
            lower_attained,
            holds && lower_attained,
        );
    }
}

fn check_bijection(report: &mut VerifyReport, censuses: &BTreeMap<usize, Census>) {
    for (&n, c) in censuses.iter().filter(|(&n, _)| n <= 12) {
        report.push(
            "bijection",
            scope_n(n),
            c.bijection_ok,
            true,
            c.bijection_ok,
        );
    }
}

fn check_operators(report: &mut VerifyReport, config: &VerifyConfig) {
    let order = config.order;
    let s = series_s(order);
    report.push(
        "phi-fixed-point",
        format!("order={order}"),
        "Phi(S)",
        "S",
        phi_apply(&s) == s,
    );

    let small = order.min(12);
    let z = Series::var(small);
    let seeds = [
        Bivariate::from_series(&z, Mark::T),
        Bivariate::from_row(&z, 1, Mark::T),
        series_s(small),
    ];
    for r in 1..=config.max_r.min(5) {
        let passed = seeds.iter().all(|f| {
            let iterated = (0..r).fold(f.clone(), |acc, _| phi_apply(&acc));
            phi_power(f, r) == iterated
        });
        report.push(
            "phi-closed-form",
            format!("r={r},order={small}"),
            "closed",
            "iterated",
            passed,
        );
    }

    // diagonals of F_{<=r} grow with r and stop at S(z, z) once 2r >= order
    let full = series_s(order).diagonal();
    let mut previous = Series::var(order);
    let mut monotone = true;
    let last = (order as u32).div_ceil(2);
    for r in 1..=last {
        let current = series_f_leq(r, order).diagonal();
        monotone &= current
            .coeffs()
            .iter()
            .zip(previous.coeffs())
            .all(|(a, b)| a >= b);
        previous = current;
    }
    report.push(
        "f-leq-telescoping",
        format!("r<={last},order={order}"),
        monotone,
        previous == full,
        monotone && previous == full,
    );
}

fn check_constants(report: &mut VerifyReport) {
    for (i, reference) in REFERENCE_DIGITS.iter().enumerate() {
        // 31 significant digits cover 30 decimal places for |c| < 10
        let ours = constant_c(ConstantSpec {
            index: i,
            requested_digits: 40,
        });
        let prefix = |s: &str| {
            s.chars()
                .take(if s.starts_with('-') { 33 } else { 32 })
                .collect::<String>()
        };
        let (lhs, rhs) = (prefix(&ours), prefix(reference));
        let passed = lhs == rhs;
        report.push(
            "constant-digits",
            format!("c{i},places=30"),
            lhs,
            rhs,
            passed,
        );
    }
}

/// Runs every check. Failing checks are reported, not raised; only invalid
/// parameters produce an error.
pub fn verify(config: VerifyConfig) -> Result<VerifyReport> {
    if config.max_size < 4 {
        return Err(Error::domain("verify needs max_size >= 4"));
    }
    if config.max_r == 0 || config.order < 2 {
        return Err(Error::domain("verify needs max_r >= 1 and order >= 2"));
    }
    let mut censuses = BTreeMap::new();
    for n in 2..=config.max_size {
        censuses.insert(n, census(n, config.max_r, n <= 12)?);
    }
    let mut report = VerifyReport::default();
    check_enumeration(&mut report, &config, &censuses)?;
    check_moments(&mut report, &config, &censuses)?;
    check_ancestor_pmf(&mut report, &config, &censuses);
    check_bounds(&mut report, &config, &censuses);
    check_bijection(&mut report, &censuses);
    check_operators(&mut report, &config);
    check_constants(&mut report);
    debug_assert!(report.checks.iter().all(|c| !c.name.is_empty()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_names_f42() {
        let report = verify(VerifyConfig {
            max_size: 4,
            max_r: 2,
            order: 8,
            corrupt_catalan: false,
        })
        .unwrap();
        assert!(report.all_passed(), "{}", report.to_text());
        assert!(report.check("f(4,2)=1").unwrap().passed);
    }

    #[test]
    fn corrupted_table_fails() {
        let report = verify(VerifyConfig {
            max_size: 5,
            max_r: 2,
            order: 8,
            corrupt_catalan: true,
        })
        .unwrap();
        assert!(!report.all_passed());
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].scope, "n=4");
    }

    #[test]
    fn rejects_tiny_sizes() {
        assert!(verify(VerifyConfig {
            max_size: 3,
            ..VerifyConfig::default()
        })
        .is_err());
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("n=4"), "n=4");
        assert_eq!(csv_field("n=4,r=2"), "\"n=4,r=2\"");
    }
}
