//! Truncated power series with exact rational coefficients, and the growth
//! generating functions built from them.
//!
//! A [`Series`] in `z` keeps the coefficients of `z^0..=z^N`. A
//! [`Bivariate`] series is stored as a polynomial in a second mark (`t` for
//! root-branch leaves, `v` for ancestor size) whose coefficients are series
//! in `z`; both degrees are capped at `N`. Every mark accounts for at least
//! one node, so box truncation keeps every coefficient that can contribute
//! to sizes `<= N` exact.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(value: Rational, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(order: usize) -> Self {
        Series::constant(Rational::one(), order)
    }

    /// The series `z`.
    pub fn var(order: usize) -> Self {
        Series::monomial(1, Rational::one(), order)
    }

    pub fn monomial(degree: usize, coeff: Rational, order: usize) -> Self {
        let mut s = Series::zero(order);
        if degree <= order {
            s.coeffs[degree] = coeff;
        }
        s
    }

    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn from_coeffs<I>(coeffs: I, order: usize) -> Self
    where
        I: IntoIterator<Item = Rational>,
    {
        let mut s = Series::zero(order);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn from_integers(coeffs: &[i64], order: usize) -> Self {
        Series::from_coeffs(
            coeffs.iter().map(|&c| Rational::from_integer(c.into())),
            order,
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot raise the order of a truncated series"
        );
        Series {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut s = Series::zero(order);
        for i in k..=order {
            s.coeffs[i] = self.coeffs[i - k].clone();
        }
        s
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Series::one(self.order());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Self {
        let c0 = &self.coeffs[0];
        assert!(
            !c0.is_zero(),
            "only series with a nonzero constant term are invertible"
        );
        let inv0 = c0.recip();
        let order = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-(acc * &inv0));
        }
        Series { coeffs: out }
    }

    pub fn sum_coeffs(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    /// One `n <num>/<den>` line per coefficient.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{n} {}/{}", c.numer(), c.denom());
        }
        out
    }
}

fn add_into(acc: &mut Rational, a: &Rational, b: &Rational) {
    if !a.is_zero() && !b.is_zero() {
        *acc += a * b;
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;

    fn add(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series {
            coeffs: (0..=order)
                .map(|i| &self.coeffs[i] + &rhs.coeffs[i])
                .collect(),
        }
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series {
            coeffs: (0..=order)
                .map(|i| &self.coeffs[i] - &rhs.coeffs[i])
                .collect(),
        }
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        let mut out = Series::zero(order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                add_into(&mut out.coeffs[i + j], &self.coeffs[i], &rhs.coeffs[j]);
            }
        }
        out
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Which quantity the second variable of a [`Bivariate`] series marks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mark {
    /// Rightmost leaves of the root branches.
    T,
    /// Size of the ancestor tree.
    V,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivariate {
    mark: Mark,
    /// `rows[j]` is the coefficient series of `mark^j`.
    rows: Vec<Series>,
}

impl Bivariate {
    pub fn zero(order: usize, mark: Mark) -> Self {
        Bivariate {
            mark,
            rows: vec![Series::zero(order); order + 1],
        }
    }

    /// A series in `z` alone.
    pub fn from_series(s: &Series, mark: Mark) -> Self {
        let mut b = Bivariate::zero(s.order(), mark);
        b.rows[0] = s.clone();
        b
    }

    /// `s(z) * mark^j`.
    pub fn from_row(s: &Series, j: usize, mark: Mark) -> Self {
        let mut b = Bivariate::zero(s.order(), mark);
        if j <= s.order() {
            b.rows[j] = s.clone();
        }
        b
    }

    pub fn one(order: usize, mark: Mark) -> Self {
        Bivariate::from_series(&Series::one(order), mark)
    }

    /// The second variable itself.
    pub fn second(order: usize, mark: Mark) -> Self {
        Bivariate::from_row(&Series::one(order), 1, mark)
    }

    pub fn from_fn(order: usize, mark: Mark, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut b = Bivariate::zero(order, mark);
        for j in 0..=order {
            for i in 0..=order {
                b.rows[j].coeffs[i] = f(i, j);
            }
        }
        b
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn mark(&self) -> Mark {
        self.mark
    }

    pub fn rows(&self) -> &[Series] {
        &self.rows
    }

    /// Coefficient of `z^i mark^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.rows
            .get(j)
            .map_or_else(Rational::zero, |row| row.coeff(i))
    }

    /// The slice `[z^i]`, as a vector indexed by the degree of the mark.
    pub fn z_slice(&self, i: usize) -> Vec<Rational> {
        self.rows.iter().map(|row| row.coeff(i)).collect()
    }

    fn same_shape(&self, rhs: &Bivariate) -> usize {
        assert_eq!(self.mark, rhs.mark, "series use different second variables");
        self.order().min(rhs.order())
    }

    pub fn mul_series(&self, s: &Series) -> Self {
        Bivariate {
            mark: self.mark,
            rows: self.rows.iter().map(|row| row * s).collect(),
        }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Self {
        let order = self.order();
        let inv0 = self.rows[0].inverse();
        let mut out = Bivariate::zero(order, self.mark);
        out.rows[0] = inv0.clone();
        for j in 1..=order {
            let mut acc = Series::zero(order);
            for k in 1..=j {
                if !self.rows[k].is_zero() && !out.rows[j - k].is_zero() {
                    acc = &acc + &(&self.rows[k] * &out.rows[j - k]);
                }
            }
            out.rows[j] = -&(&acc * &inv0);
        }
        out
    }

    /// `f(z, g(z, mark))`. `g` must have no `mark^0` part, so every power
    /// `g^k` starts at `mark^k` and only `k <= N` matters.
    pub fn substitute(&self, g: &Bivariate) -> Self {
        let order = self.same_shape(g);
        assert!(
            g.rows[0].is_zero(),
            "substituted series must vanish at mark = 0"
        );
        // Horner from the top row down
        let mut acc = Bivariate::from_series(&self.rows[order].truncate(order), self.mark);
        for j in (0..order).rev() {
            acc = &acc * g;
            acc.rows[0] = &acc.rows[0] + &self.rows[j].truncate(order);
        }
        acc
    }

    /// Sets the mark equal to `z`.
    pub fn diagonal(&self) -> Series {
        let order = self.order();
        let mut out = Series::zero(order);
        for (j, row) in self.rows.iter().enumerate() {
            for i in 0..=order - j {
                out.coeffs[i + j] += &row.coeffs[i];
            }
        }
        out
    }

    /// One `n,m <num>/<den>` line per coefficient, `n` the degree of `z`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let order = self.order();
        for n in 0..=order {
            for m in 0..=order {
                let c = &self.rows[m].coeffs[n];
                let _ = writeln!(out, "{n},{m} {}/{}", c.numer(), c.denom());
            }
        }
        out
    }
}

impl<'a> Add<&'a Bivariate> for &'a Bivariate {
    type Output = Bivariate;

    fn add(self, rhs: &Bivariate) -> Bivariate {
        let order = self.same_shape(rhs);
        Bivariate {
            mark: self.mark,
            rows: (0..=order).map(|j| &self.rows[j] + &rhs.rows[j]).collect(),
        }
    }
}

impl<'a> Sub<&'a Bivariate> for &'a Bivariate {
    type Output = Bivariate;

    fn sub(self, rhs: &Bivariate) -> Bivariate {
        let order = self.same_shape(rhs);
        Bivariate {
            mark: self.mark,
            rows: (0..=order).map(|j| &self.rows[j] - &rhs.rows[j]).collect(),
        }
    }
}

impl<'a> Mul<&'a Bivariate> for &'a Bivariate {
    type Output = Bivariate;

    fn mul(self, rhs: &Bivariate) -> Bivariate {
        let order = self.same_shape(rhs);
        let mut out = Bivariate::zero(order, self.mark);
        for a in 0..=order {
            if self.rows[a].is_zero() {
                continue;
            }
            for b in 0..=order - a {
                if rhs.rows[b].is_zero() {
                    continue;
                }
                out.rows[a + b] = &out.rows[a + b] + &(&self.rows[a] * &rhs.rows[b]);
            }
        }
        out
    }
}

/// Plane trees by size: the solution of `T = z + T^2` with `T(0) = 0`.
pub fn series_t(order: usize) -> Series {
    let mut coeffs = vec![Rational::zero(); order + 1];
    if order >= 1 {
        coeffs[1] = Rational::one();
    }
    // [z^n] T = [z^n] T^2 for n >= 2
    for n in 2..=order {
        let mut acc = Rational::zero();
        for k in 1..n {
            add_into(&mut acc, &coeffs[k], &coeffs[n - k]);
        }
        coeffs[n] = acc;
    }
    Series { coeffs }
}

/// Catalan-Stanley trees with `t` marking the rightmost leaf of every root
/// branch and `z` every other node: `S = z + z t / (1 - t - T^2)`.
pub fn series_s(order: usize) -> Bivariate {
    let t_sq = series_t(order).pow(2);
    let z = Series::var(order);
    let denominator = &(&Bivariate::one(order, Mark::T) - &Bivariate::second(order, Mark::T))
        - &Bivariate::from_series(&t_sq, Mark::T);
    let zt = Bivariate::from_row(&z, 1, Mark::T);
    &Bivariate::from_series(&z, Mark::T) + &(&zt * &denominator.inverse())
}

/// The expansion operator: all trees whose reduction lies in the family
/// counted by `f`, namely `1/(1-t) * f(z, t T^2 / (1-t))`.
pub fn phi_apply(f: &Bivariate) -> Bivariate {
    assert_eq!(
        f.mark(),
        Mark::T,
        "the expansion operator acts on t-marked series"
    );
    let order = f.order();
    let t_sq = series_t(order).pow(2);
    let t = Bivariate::second(order, Mark::T);
    let geometric = (&Bivariate::one(order, Mark::T) - &t).inverse();
    let inserted = (&t * &geometric).mul_series(&t_sq);
    &geometric * &f.substitute(&inserted)
}

/// `(1 - T^{2r}) / (1 - T^2)`.
fn chain_ratio(t: &Series, r: u32) -> Series {
    let order = t.order();
    let t_sq = t.pow(2);
    let numerator = &Series::one(order) - &t.pow(2 * r);
    &numerator * &(&Series::one(order) - &t_sq).inverse()
}

/// The `r`-fold expansion in closed form:
/// `1/D * f(z, t T^{2r} / D)` with `D = 1 - t (1 - T^{2r}) / (1 - T^2)`.
/// `r = 0` is the identity.
pub fn phi_power(f: &Bivariate, r: u32) -> Bivariate {
    assert_eq!(
        f.mark(),
        Mark::T,
        "the expansion operator acts on t-marked series"
    );
    if r == 0 {
        return f.clone();
    }
    let order = f.order();
    let t_series = series_t(order);
    let ratio = chain_ratio(&t_series, r);
    let t = Bivariate::second(order, Mark::T);
    let denominator = &Bivariate::one(order, Mark::T) - &t.mul_series(&ratio);
    let inv = denominator.inverse();
    let substituted = (&t * &inv).mul_series(&t_series.pow(2 * r));
    &inv * &f.substitute(&substituted)
}

/// Trees of age at most `r`: the `r`-fold expansion of the single node.
pub fn series_f_leq(r: u32, order: usize) -> Bivariate {
    phi_power(&Bivariate::from_series(&Series::var(order), Mark::T), r)
}

/// Trees of age at least `r >= 1` by size: `z (1 + T) T^{2r-1} / (1 + T^{2r-1})`.
pub fn series_f_geq(r: u32, order: usize) -> Series {
    assert!(r >= 1, "age at least 0 is every tree");
    let t = series_t(order);
    let one = Series::one(order);
    let power = t.pow(2 * r - 1);
    let z_one_plus_t = &Series::var(order) * &(&one + &t);
    &(&z_one_plus_t * &power) * &(&one + &power).inverse()
}

/// Trees by size (`z`) and size of their `r`-th ancestor (`v`), from the
/// closed form `A * S(zv, z T^{2r} A v)` with `A = 1 / (1 - z (1 - T^{2r}) / (1 - T^2))`.
pub fn series_g(r: u32, order: usize) -> Bivariate {
    let t = series_t(order);
    let z = Series::var(order);
    let a = (&Series::one(order) - &(&z * &chain_ratio(&t, r))).inverse();
    let leaf_weight = &(&z * &t.pow(2 * r)) * &a;
    // T(zv) and S(x, y) = x + x y / (1 - y - T(x)^2) with x = zv, y = leaf_weight * v
    let t_zv = Bivariate::from_fn(order, Mark::V, |i, j| {
        if i == j {
            t.coeff(i)
        } else {
            Rational::zero()
        }
    });
    let x = Bivariate::from_row(&z, 1, Mark::V);
    let y = Bivariate::from_row(&leaf_weight, 1, Mark::V);
    let denominator = &(&Bivariate::one(order, Mark::V) - &y) - &(&t_zv * &t_zv);
    let s = &x + &(&(&x * &y) * &denominator.inverse());
    s.mul_series(&a)
}
