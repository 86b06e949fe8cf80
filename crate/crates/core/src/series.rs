//! Truncated Laurent series in `t`, `x`, `y` with exact rational coefficients.
//!
//! A [`Series`] stores a sparse map from monomials to nonzero rationals
//! together with a truncation window. `t` may carry negative exponents;
//! `x` and `y` never do. Every arithmetic operation clips its result to the
//! intersection of the operand windows, so a product never invents terms the
//! inputs could not determine.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational coefficient.
pub type Q = BigRational;

/// One of the three formal symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    X,
    Y,
}

impl Var {
    pub fn symbol(self) -> char {
        match self {
            Var::T => 't',
            Var::X => 'x',
            Var::Y => 'y',
        }
    }
}

/// Exponent vector `t^t x^x y^y`. Ordered lexicographically by `(t, x, y)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub t: i64,
    pub x: i64,
    pub y: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { t: 0, x: 0, y: 0 };

    pub const fn new(t: i64, x: i64, y: i64) -> Self {
        Monomial { t, x, y }
    }

    pub const fn t(e: i64) -> Self {
        Monomial { t: e, x: 0, y: 0 }
    }

    pub const fn x(e: i64) -> Self {
        Monomial { t: 0, x: e, y: 0 }
    }

    pub const fn y(e: i64) -> Self {
        Monomial { t: 0, x: 0, y: e }
    }

    pub fn exponent(&self, var: Var) -> i64 {
        match var {
            Var::T => self.t,
            Var::X => self.x,
            Var::Y => self.y,
        }
    }

    fn with_exponent(mut self, var: Var, e: i64) -> Self {
        match var {
            Var::T => self.t = e,
            Var::X => self.x = e,
            Var::Y => self.y = e,
        }
        self
    }

    pub fn times(self, other: Monomial) -> Monomial {
        Monomial::new(self.t + other.t, self.x + other.x, self.y + other.y)
    }

    pub fn pow(self, n: i64) -> Monomial {
        Monomial::new(self.t * n, self.x * n, self.y * n)
    }
}

/// Inclusive exponent window per variable.
///
/// `x` and `y` are bounded below by zero. Variables a series does not use are
/// left unbounded, which lets it embed into any other window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub t_min: i64,
    pub t_max: i64,
    pub x_max: i64,
    pub y_max: i64,
}

impl Truncation {
    pub const UNBOUNDED: Truncation = Truncation {
        t_min: i64::MIN,
        t_max: i64::MAX,
        x_max: i64::MAX,
        y_max: i64::MAX,
    };

    pub fn new(t_min: i64, t_max: i64, x_max: i64, y_max: i64) -> Self {
        Truncation { t_min, t_max, x_max, y_max }
    }

    pub fn with_t(mut self, t_min: i64, t_max: i64) -> Self {
        self.t_min = t_min;
        self.t_max = t_max;
        self
    }

    pub fn with_x(mut self, x_max: i64) -> Self {
        self.x_max = x_max;
        self
    }

    pub fn with_y(mut self, y_max: i64) -> Self {
        self.y_max = y_max;
        self
    }

    /// Intersection of two windows.
    pub fn meet(self, other: Truncation) -> Truncation {
        Truncation {
            t_min: self.t_min.max(other.t_min),
            t_max: self.t_max.min(other.t_max),
            x_max: self.x_max.min(other.x_max),
            y_max: self.y_max.min(other.y_max),
        }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.t >= self.t_min
            && m.t <= self.t_max
            && m.x >= 0
            && m.x <= self.x_max
            && m.y >= 0
            && m.y <= self.y_max
    }

    fn upper(&self, var: Var) -> i64 {
        match var {
            Var::T => self.t_max,
            Var::X => self.x_max,
            Var::Y => self.y_max,
        }
    }

    fn lower(&self, var: Var) -> i64 {
        match var {
            Var::T => self.t_min,
            Var::X | Var::Y => 0,
        }
    }

    fn release(mut self, var: Var) -> Self {
        match var {
            Var::T => {
                self.t_min = i64::MIN;
                self.t_max = i64::MAX;
            }
            Var::X => self.x_max = i64::MAX,
            Var::Y => self.y_max = i64::MAX,
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("geometric expansion of {0:?} does not terminate: it has no positive x or y exponent")]
    NonTruncatingRatio(Monomial),
    #[error("requested {var:?}^{exponent} lies outside the truncation window [{lower}, {upper}]")]
    OutsideTruncation { var: Var, exponent: i64, lower: i64, upper: i64 },
    #[error("divisor must be a nonzero polynomial in t with nonnegative exponents")]
    InvalidDivisor,
    #[error("division leaves a nonzero remainder")]
    NonzeroRemainder,
}

/// Sparse truncated series; see the module docs.
///
/// Equality compares coefficients only, not windows.
#[derive(Clone, Debug)]
pub struct Series {
    trunc: Truncation,
    coeffs: BTreeMap<Monomial, Q>,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Series {}

fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

impl Series {
    pub fn zero(trunc: Truncation) -> Self {
        Series { trunc, coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Q::one(), Monomial::ONE, Truncation::UNBOUNDED)
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, Monomial::ONE, Truncation::UNBOUNDED)
    }

    pub fn monomial(c: Q, m: Monomial, trunc: Truncation) -> Self {
        let mut s = Series::zero(trunc);
        s.add_term(m, c);
        s
    }

    /// Builds a series from `(monomial, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I>(terms: I, trunc: Truncation) -> Self
    where
        I: IntoIterator<Item = (Monomial, Q)>,
    {
        let mut s = Series::zero(trunc);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Univariate polynomial in `t` from integer coefficients, lowest exponent `offset`.
    pub fn t_poly(coeffs: &[i64], offset: i64) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (Monomial::t(offset + i as i64), q_int(c))),
            Truncation::UNBOUNDED,
        )
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    /// Same coefficients, clipped to a narrower window.
    pub fn truncate(&self, trunc: Truncation) -> Series {
        let trunc = self.trunc.meet(trunc);
        Series {
            trunc,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| trunc.contains(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() || !self.trunc.contains(&m) {
            return;
        }
        match self.coeffs.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.coeffs.remove(&m);
                }
            }
            None => {
                self.coeffs.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.coeffs.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.coeffs.iter()
    }

    /// Lowest and highest exponent of `var` among stored terms.
    pub fn exponent_range(&self, var: Var) -> Option<(i64, i64)> {
        let mut it = self.coeffs.keys().map(|m| m.exponent(var));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// True if only `t` appears.
    pub fn is_univariate_t(&self) -> bool {
        self.coeffs.keys().all(|m| m.x == 0 && m.y == 0)
    }

    pub fn scale(&self, c: &Q) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, v) in &self.coeffs {
            out.add_term(*m, v * c);
        }
        out
    }

    /// Same coefficients placed in a new window; terms outside it are dropped.
    pub fn with_window(&self, trunc: Truncation) -> Series {
        let mut out = Series::zero(trunc);
        for (m, v) in &self.coeffs {
            out.add_term(*m, v.clone());
        }
        out
    }

    /// Multiplies by a monomial, keeping the window fixed.
    pub fn shift(&self, by: Monomial) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, v) in &self.coeffs {
            out.add_term(m.times(by), v.clone());
        }
        out
    }

    /// `Σ_{j≥0} (coeff·m)^j`, the expansion of `1/(1 − coeff·m)` inside `trunc`.
    pub fn expand_geometric(coeff: &Q, m: Monomial, trunc: Truncation) -> Result<Series, SeriesError> {
        if m.x <= 0 && m.y <= 0 {
            return Err(SeriesError::NonTruncatingRatio(m));
        }
        let mut out = Series::zero(trunc);
        let mut power = Monomial::ONE;
        let mut c = Q::one();
        while power.x <= trunc.x_max && power.y <= trunc.y_max {
            out.add_term(power, c.clone());
            power = power.times(m);
            c *= coeff;
        }
        Ok(out)
    }

    /// `(1 + coeff·m)^n` with exact binomial coefficients.
    pub fn pow_binomial(coeff: &Q, m: Monomial, n: u32, trunc: Truncation) -> Series {
        let mut out = Series::zero(trunc);
        let mut binom = BigInt::one();
        let mut c = Q::one();
        for j in 0..=i64::from(n) {
            out.add_term(m.pow(j), Q::from_integer(binom.clone()) * &c);
            binom = binom * BigInt::from(i64::from(n) - j) / BigInt::from(j + 1);
            c *= coeff;
        }
        out
    }

    /// Coefficient of the given exponent assignments, as a series in the
    /// remaining variables.
    pub fn coeff_extract(&self, assignments: &[(Var, i64)]) -> Result<Series, SeriesError> {
        for &(var, e) in assignments {
            let (lo, hi) = (self.trunc.lower(var), self.trunc.upper(var));
            if e < lo || e > hi {
                return Err(SeriesError::OutsideTruncation { var, exponent: e, lower: lo, upper: hi });
            }
        }
        let trunc = assignments.iter().fold(self.trunc, |t, &(v, _)| t.release(v));
        let mut out = Series::zero(trunc);
        'terms: for (m, c) in &self.coeffs {
            let mut reduced = *m;
            for &(var, e) in assignments {
                if m.exponent(var) != e {
                    continue 'terms;
                }
                reduced = reduced.with_exponent(var, 0);
            }
            out.add_term(reduced, c.clone());
        }
        Ok(out)
    }

    /// Exact quotient by a polynomial in `t`; fails unless the remainder vanishes.
    ///
    /// Each `(x, y)` slice is divided independently. The divisor must have
    /// nonnegative `t` exponents and no `x`, `y` dependence.
    pub fn exact_divide(&self, divisor: &Series) -> Result<Series, SeriesError> {
        if divisor.is_zero() || !divisor.is_univariate_t() {
            return Err(SeriesError::InvalidDivisor);
        }
        let (dlo, dhi) = divisor.exponent_range(Var::T).ok_or(SeriesError::InvalidDivisor)?;
        if dlo < 0 {
            return Err(SeriesError::InvalidDivisor);
        }
        let lead = divisor.coeff(&Monomial::t(dhi));

        let mut slices: BTreeMap<(i64, i64), BTreeMap<i64, Q>> = BTreeMap::new();
        for (m, c) in &self.coeffs {
            slices.entry((m.x, m.y)).or_default().insert(m.t, c.clone());
        }

        let mut out = Series::zero(self.trunc);
        for ((x, y), mut rem) in slices {
            // Descending long division: peel the top term until the slice is
            // shorter than the divisor.
            loop {
                let (top, low) = match (rem.keys().next_back(), rem.keys().next()) {
                    (Some(&top), Some(&low)) => (top, low),
                    _ => break,
                };
                if top - low < dhi - dlo {
                    return Err(SeriesError::NonzeroRemainder);
                }
                let q = rem[&top].clone() / &lead;
                let qe = top - dhi;
                for (dm, dc) in &divisor.coeffs {
                    let e = qe + dm.t;
                    let v = rem.entry(e).or_insert_with(Q::zero);
                    *v -= &q * dc;
                    if v.is_zero() {
                        rem.remove(&e);
                    }
                }
                out.add_term(Monomial::new(qe, x, y), q);
            }
        }
        Ok(out)
    }

    /// Exponents and coefficients of a univariate `t` series in ascending order.
    pub fn t_coefficients(&self) -> Vec<(i64, Q)> {
        self.coeffs.iter().map(|(m, c)| (m.t, c.clone())).collect()
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;

    fn add(self, rhs: &'a Series) -> Series {
        let mut out = Series::zero(self.trunc.meet(rhs.trunc));
        for (m, c) in self.coeffs.iter().chain(rhs.coeffs.iter()) {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;

    fn sub(self, rhs: &'a Series) -> Series {
        let mut out = Series::zero(self.trunc.meet(rhs.trunc));
        for (m, c) in &self.coeffs {
            out.add_term(*m, c.clone());
        }
        for (m, c) in &rhs.coeffs {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        self.scale(&-Q::one())
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;

    fn mul(self, rhs: &'a Series) -> Series {
        let trunc = self.trunc.meet(rhs.trunc);
        let mut out = Series::zero(trunc);
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &rhs.coeffs {
                let m = ma.times(*mb);
                if trunc.contains(&m) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Series> for Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn write_coeff(out: &mut String, c: &Q, first: bool, bare: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if bare && abs.is_one() {
        return Ok(());
    }
    write!(out, "{}", abs)?;
    if bare {
        out.push('*');
    }
    Ok(())
}

impl fmt::Display for Series {
    /// `1 + 4*t + 7*t^2`, terms sorted lexicographically by `(t, x, y)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.coeffs.iter().enumerate() {
            let vars: Vec<(char, i64)> = [(Var::T, m.t), (Var::X, m.x), (Var::Y, m.y)]
                .iter()
                .filter(|(_, e)| *e != 0)
                .map(|&(v, e)| (v.symbol(), e))
                .collect();
            write_coeff(&mut out, c, i == 0, !vars.is_empty())?;
            for (j, (sym, e)) in vars.iter().enumerate() {
                if j > 0 {
                    out.push('*');
                }
                out.push(*sym);
                if *e != 1 {
                    write!(out, "^{}", e)?;
                }
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(n: i64) -> Q {
        q_int(n)
    }

    fn trunc_x(n: i64) -> Truncation {
        Truncation::UNBOUNDED.with_x(n).with_y(0)
    }

    #[test]
    fn add_cancels_and_doubles() {
        let a = Series::from_terms([(Monomial::ONE, q(1)), (Monomial::new(1, 1, 0), q(1))], Truncation::UNBOUNDED);
        let s = &a + &Series::constant(q(-1));
        assert_eq!(s, Series::monomial(q(1), Monomial::new(1, 1, 0), Truncation::UNBOUNDED));

        let z = Series::zero(Truncation::UNBOUNDED);
        assert_eq!(&z + &a, a);

        let b = Series::t_poly(&[1, 1], 0);
        assert_eq!(&b + &b, Series::t_poly(&[2, 2], 0));
    }

    #[test]
    fn mul_examples() {
        let tx = Series::from_terms([(Monomial::ONE, q(1)), (Monomial::new(1, 1, 0), q(1))], trunc_x(2));
        let sq = &tx * &tx;
        let expected = Series::from_terms(
            [(Monomial::ONE, q(1)), (Monomial::new(1, 1, 0), q(2)), (Monomial::new(2, 2, 0), q(1))],
            trunc_x(2),
        );
        assert_eq!(sq, expected);

        let n = 5;
        let geom = Series::from_terms((0..=n).map(|m| (Monomial::x(m), q(1))), trunc_x(n));
        let one_minus_x = Series::from_terms([(Monomial::ONE, q(1)), (Monomial::x(1), q(-1))], trunc_x(n));
        assert_eq!(&one_minus_x * &geom, Series::one().truncate(trunc_x(n)));

        let p = &Series::t_poly(&[1, 1], 0) * &Series::t_poly(&[1, -1], 0);
        assert_eq!(p, Series::t_poly(&[1, 0, -1], 0));
    }

    #[test]
    fn geometric_examples() {
        let g = Series::expand_geometric(&q(1), Monomial::x(1), trunc_x(3)).unwrap();
        assert_eq!(g, Series::from_terms((0..=3).map(|m| (Monomial::x(m), q(1))), trunc_x(3)));

        let g = Series::expand_geometric(&q(1), Monomial::new(2, 1, 0), trunc_x(2)).unwrap();
        assert_eq!(g.to_string(), "1 + t^2*x + t^4*x^2");

        let g = Series::expand_geometric(&q(1), Monomial::new(-2, 1, 0), trunc_x(2)).unwrap();
        assert_eq!(g.to_string(), "t^-4*x^2 + t^-2*x + 1");

        assert!(matches!(
            Series::expand_geometric(&q(1), Monomial::t(2), trunc_x(2)),
            Err(SeriesError::NonTruncatingRatio(_))
        ));
    }

    #[test]
    fn binomial_examples() {
        let p = Series::pow_binomial(&q(1), Monomial::new(1, 1, 0), 4, Truncation::UNBOUNDED);
        assert_eq!(p.to_string(), "1 + 4*t*x + 6*t^2*x^2 + 4*t^3*x^3 + t^4*x^4");
        assert_eq!(Series::pow_binomial(&q(1), Monomial::new(1, 0, 1), 0, Truncation::UNBOUNDED), Series::one());
        assert_eq!(
            Series::pow_binomial(&q(1), Monomial::t(1), 4, Truncation::UNBOUNDED),
            Series::t_poly(&[1, 4, 6, 4, 1], 0)
        );
    }

    #[test]
    fn extraction_examples() {
        // (1+tx)^4/(1−x) to order x^1: coefficient of x is 1 + 4t.
        let tr = trunc_x(1);
        let s = &Series::pow_binomial(&q(1), Monomial::new(1, 1, 0), 4, tr)
            * &Series::expand_geometric(&q(1), Monomial::x(1), tr).unwrap();
        let c = s.coeff_extract(&[(Var::X, 1)]).unwrap();
        assert_eq!(c, Series::t_poly(&[1, 4], 0));

        let c0 = s.coeff_extract(&[(Var::X, 0)]).unwrap();
        assert_eq!(c0, Series::one());

        let s3 = Series::expand_geometric(&q(1), Monomial::x(1), trunc_x(3)).unwrap();
        assert!(matches!(s3.coeff_extract(&[(Var::X, 5)]), Err(SeriesError::OutsideTruncation { .. })));
    }

    #[test]
    fn division_examples() {
        let d = Series::t_poly(&[1, 0, -1], 0);
        assert_eq!(Series::t_poly(&[1, 0, 0, 0, -1], 0).exact_divide(&d).unwrap(), Series::t_poly(&[1, 0, 1], 0));
        assert_eq!(Series::t_poly(&[2, 0, -2], 0).exact_divide(&d).unwrap(), Series::constant(q(2)));
        assert_eq!(Series::t_poly(&[1, 1], 0).exact_divide(&d), Err(SeriesError::NonzeroRemainder));
        // Laurent slices divide too.
        let laurent = Series::t_poly(&[1, 0, 0, 0, -1], -3);
        assert_eq!(laurent.exact_divide(&d).unwrap(), Series::t_poly(&[1, 0, 1], -3));
    }

    #[test]
    fn rendering() {
        assert_eq!(Series::t_poly(&[1, 4, 7], 0).to_string(), "1 + 4*t + 7*t^2");
        assert_eq!(Series::t_poly(&[0, -1, 0, 2], 0).to_string(), "-t + 2*t^3");
        let half = Q::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(Series::monomial(half, Monomial::new(0, 2, 1), Truncation::UNBOUNDED).to_string(), "1/2*x^2*y");
        assert_eq!(Series::zero(Truncation::UNBOUNDED).to_string(), "0");
    }
}
