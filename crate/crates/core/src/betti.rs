//! Poincaré polynomials of the moduli space of τ-stable rank-2 Higgs pairs.
//!
//! The moduli space carries a circle action `θ ↦ zθ` whose moment map is a
//! perfect Morse function. Its critical set splits into the pairs locus `N₀`
//! (θ = 0), whose Poincaré polynomial is a coefficient extraction from a
//! rational generating function, and strata `N_d ≅ Sym^{n1} M × Sym^{n2} M`
//! shifted by their Morse index. [`total_poincare`] sums these directly;
//! [`theorem_extraction`] reproduces the same answer from the closed two-part
//! generating function as an independent cross-check.
//!
//! The stability threshold enters only through the normalized value
//! `τ̄ = Vol·τ/4π`; every floor is taken on that exact rational.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::series::{Monomial, Series, SeriesError, Truncation, Var, Q};
use crate::stability::{validate_params, Violation};
use crate::strata::{self, StratumDescriptor};

/// Genus, degree and normalized stability parameter of a rank-2 moduli problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliParams {
    pub genus: i64,
    pub degree: i64,
    pub tau_bar: BigRational,
}

impl ModuliParams {
    pub const RANK: i64 = 2;

    pub fn new(genus: i64, degree: i64, tau_bar: BigRational) -> Self {
        ModuliParams { genus, degree, tau_bar }
    }

    /// Convenience constructor for `τ̄ = num/den`.
    pub fn with_ratio(genus: i64, degree: i64, num: i64, den: i64) -> Self {
        Self::new(genus, degree, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Checks every standing assumption, returning `self` when all hold.
    pub fn validated(self) -> Result<Self, BettiError> {
        validate_params(&self).map_err(BettiError::InvalidParams)?;
        Ok(self)
    }

    /// `⌊τ̄⌋`, exact.
    pub fn floor_tau_bar(&self) -> i64 {
        self.tau_bar.floor().to_integer().to_i64().expect("τ̄ out of i64 range")
    }

    /// `μ(E) = k/2`.
    pub fn slope(&self) -> BigRational {
        BigRational::new(BigInt::from(self.degree), BigInt::from(Self::RANK))
    }
}

/// Errors from the Betti-number pipeline.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BettiError {
    #[error("invalid moduli parameters: {}", DisplayViolations(.0))]
    InvalidParams(Vec<Violation>),
    #[error("stratum d = {d} is outside the admissible range")]
    StratumOutOfRange { d: i64 },
    #[error("generating-function integrity: {0}")]
    Integrity(IntegrityError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

struct DisplayViolations<'a>(&'a [Violation]);

impl fmt::Display for DisplayViolations<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}

/// Ways a computed polynomial can fail to be a Poincaré polynomial.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntegrityError {
    #[error("(1 - t^2) does not divide the extracted numerator")]
    NonzeroRemainder,
    #[error("series still depends on x or y")]
    NotUnivariate,
    #[error("negative t exponent {0} survived")]
    NegativeExponent(i64),
    #[error("coefficient {coeff} of t^{exponent} is not a nonnegative integer")]
    BadCoefficient { exponent: i64, coeff: BigRational },
}

impl From<IntegrityError> for BettiError {
    fn from(e: IntegrityError) -> Self {
        BettiError::Integrity(e)
    }
}

/// A polynomial in `t` with nonnegative integer coefficients, stored densely.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PoincarePolynomial {
    coeffs: Vec<BigInt>,
}

impl PoincarePolynomial {
    pub fn from_coeffs<I: IntoIterator<Item = u64>>(coeffs: I) -> Self {
        let mut p = PoincarePolynomial { coeffs: coeffs.into_iter().map(BigInt::from).collect() };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Converts a univariate series, rejecting anything that is not a
    /// polynomial with nonnegative integer coefficients.
    pub fn try_from_series(s: &Series) -> Result<Self, IntegrityError> {
        if !s.is_univariate_t() {
            return Err(IntegrityError::NotUnivariate);
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (e, c) in s.t_coefficients() {
            if e < 0 {
                return Err(IntegrityError::NegativeExponent(e));
            }
            if !c.is_integer() || c.is_negative() {
                return Err(IntegrityError::BadCoefficient { exponent: e, coeff: c });
            }
            let idx = e as usize;
            if coeffs.len() <= idx {
                coeffs.resize(idx + 1, BigInt::zero());
            }
            coeffs[idx] = c.to_integer();
        }
        let mut p = PoincarePolynomial { coeffs };
        p.trim();
        Ok(p)
    }

    pub fn to_series(&self) -> Series {
        Series::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(e, c)| (Monomial::t(e as i64), Q::from_integer(c.clone()))),
            Truncation::UNBOUNDED,
        )
    }

    /// Betti number `b_i`.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest exponent with nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Sum of all Betti numbers.
    pub fn total_rank(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// Nonzero `(exponent, coefficient)` pairs, ascending.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut p = PoincarePolynomial {
            coeffs: (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
        };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::default();
        }
        let mut coeffs = alloc::vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PoincarePolynomial { coeffs }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return Self::default();
        }
        let mut coeffs = alloc::vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PoincarePolynomial { coeffs }
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_series().fmt(f)
    }
}

/// `1/(1 − m)` inside `trunc`.
fn geometric(m: Monomial, trunc: Truncation) -> Result<Series, SeriesError> {
    Series::expand_geometric(&Q::one(), m, trunc)
}

/// `(1 + m)^n` inside `trunc`.
fn binomial(m: Monomial, n: i64, trunc: Truncation) -> Series {
    Series::pow_binomial(&Q::one(), m, n as u32, trunc)
}

fn one_minus_t2() -> Series {
    Series::t_poly(&[1, 0, -1], 0)
}

/// `(1 + t·v)^{2g} / ((1 − v)(1 − t²v))` truncated at `v^{n}` for `v ∈ {x, y}`.
fn macdonald_kernel(var: Var, genus: i64, n: i64, trunc: Truncation) -> Result<Series, SeriesError> {
    let unit = match var {
        Var::X => Monomial::x(1),
        Var::Y => Monomial::y(1),
        Var::T => unreachable!("the Macdonald kernel is graded by x or y"),
    };
    let trunc = match var {
        Var::X => trunc.with_x(n),
        _ => trunc.with_y(n),
    };
    let num = binomial(unit.times(Monomial::t(1)), 2 * genus, trunc);
    let g1 = geometric(unit, trunc)?;
    let g2 = geometric(unit.times(Monomial::t(2)), trunc)?;
    Ok(&(&num * &g1) * &g2)
}

/// Poincaré polynomial of `Symⁿ M` for a genus-`g` surface (Macdonald).
pub fn sym_poincare(n: i64, genus: i64) -> Result<PoincarePolynomial, BettiError> {
    assert!(n >= 0 && genus >= 0, "sym_poincare needs n, g ≥ 0");
    let trunc = Truncation::UNBOUNDED.with_t(0, 2 * n).with_y(0);
    let kernel = macdonald_kernel(Var::X, genus, n, trunc)?;
    let c = kernel.coeff_extract(&[(Var::X, n)])?;
    Ok(PoincarePolynomial::try_from_series(&c)?)
}

/// Exponents appearing in the pairs generating function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairsExponents {
    /// `k − 1 − ⌊τ̄⌋`: the x-power divided out.
    pub x_shift: i64,
    /// `2(k − 1 − ⌊τ̄⌋)`.
    pub first_t: i64,
    /// `2(g + 1 − k + 2⌊τ̄⌋)`.
    pub second_t: i64,
}

pub fn pairs_exponents(p: &ModuliParams) -> PairsExponents {
    let fl = p.floor_tau_bar();
    let (g, k) = (p.genus, p.degree);
    PairsExponents {
        x_shift: k - 1 - fl,
        first_t: 2 * (k - 1 - fl),
        second_t: 2 * (g + 1 - k + 2 * fl),
    }
}

/// The pairs-locus numerator without the `1/(1 − t²)` factor, truncated at `x^{x_max}`.
fn pairs_numerator(p: &ModuliParams, x_max: i64, trunc: Truncation) -> Result<Series, SeriesError> {
    let g = p.genus;
    let e = pairs_exponents(p);
    let trunc = trunc.with_x(x_max);
    let jac = binomial(Monomial::t(1), 2 * g, trunc);
    let kernel = macdonald_kernel(Var::X, g, x_max, trunc)?;
    let first = geometric(Monomial::new(-2, 1, 0), trunc)?.shift(Monomial::t(e.first_t));
    let second = geometric(Monomial::new(4, 1, 0), trunc)?.shift(Monomial::t(e.second_t));
    Ok(&(&jac * &kernel) * &(&first - &second))
}

/// Safe `t` window for series whose x/y degree is at most `xy` and whose
/// explicit `t` prefactors are bounded by `extra` in absolute value.
fn t_window(genus: i64, xy: i64, extra: i64) -> Truncation {
    let hi = 2 * genus + 6 * xy + extra.abs() + 4;
    Truncation::UNBOUNDED.with_t(-(2 * xy + extra.abs() + 4), hi)
}

/// Poincaré polynomial of the pairs locus `N₀ = μ⁻¹(0)`.
pub fn pairs_poincare_n0(p: &ModuliParams) -> Result<PoincarePolynomial, BettiError> {
    let p = p.clone().validated()?;
    let e = pairs_exponents(&p);
    let trunc = t_window(p.genus, e.x_shift, e.first_t.abs().max(e.second_t.abs())).with_y(0);
    let num = pairs_numerator(&p, e.x_shift, trunc)?;
    let extracted = num.coeff_extract(&[(Var::X, e.x_shift)])?;
    let quotient = extracted
        .exact_divide(&one_minus_t2())
        .map_err(|_| IntegrityError::NonzeroRemainder)?;
    Ok(PoincarePolynomial::try_from_series(&quotient)?)
}

/// Contribution `t^{index}·P(Sym^{n1}M)·P(Sym^{n2}M)` of the stratum `N_d`.
pub fn stratum_poincare(p: &ModuliParams, d: i64) -> Result<PoincarePolynomial, BettiError> {
    let desc = strata::stratum_descriptor(p, d)?;
    stratum_poincare_for(&desc, p.genus)
}

fn stratum_poincare_for(desc: &StratumDescriptor, genus: i64) -> Result<PoincarePolynomial, BettiError> {
    let a = sym_poincare(desc.n1, genus)?;
    let b = sym_poincare(desc.n2, genus)?;
    Ok(a.mul(&b).shift(desc.index as usize))
}

/// Full breakdown of the Morse-theoretic sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseSum {
    pub n0: PoincarePolynomial,
    pub strata: Vec<(StratumDescriptor, PoincarePolynomial)>,
    pub total: PoincarePolynomial,
}

pub fn morse_sum(p: &ModuliParams) -> Result<MorseSum, BettiError> {
    let n0 = pairs_poincare_n0(p)?;
    let mut strata_polys = Vec::new();
    let mut total = n0.clone();
    for desc in strata::descriptors(p)? {
        let poly = stratum_poincare_for(&desc, p.genus)?;
        total = total.add(&poly);
        strata_polys.push((desc, poly));
    }
    Ok(MorseSum { n0, strata: strata_polys, total })
}

/// Poincaré polynomial of the whole moduli space: `N₀` plus every stratum.
pub fn total_poincare(p: &ModuliParams) -> Result<PoincarePolynomial, BettiError> {
    Ok(morse_sum(p)?.total)
}

/// Which y-prefactor to use for the strata part of the closed formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum YConvention {
    /// `y^{d − 2g}` as displayed.
    AsPrinted,
    /// `y^{d + 2g}`, consistent with the stratum parametrization.
    Corrected,
}

impl YConvention {
    pub fn name(self) -> &'static str {
        match self {
            YConvention::AsPrinted => "as_printed",
            YConvention::Corrected => "corrected",
        }
    }

    fn strata_y_exponent(self, d: i64, genus: i64) -> i64 {
        match self {
            YConvention::AsPrinted => d - 2 * genus,
            YConvention::Corrected => d + 2 * genus,
        }
    }
}

/// Outcome of extracting `P(t)` from the two-part generating function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    pub convention: YConvention,
    /// Extracted coefficient, a series in `t`.
    pub value: Series,
    /// `value − total_poincare`.
    pub diff: Series,
}

impl Extraction {
    pub fn matches(&self) -> bool {
        self.diff.is_zero()
    }
}

/// Coefficient of `x^{k+2g} y^{k+2g}` in the closed generating function.
///
/// The whole function is multiplied by `(1 − t²)` before extraction and the
/// factor divided out exactly afterwards, since `1/(1 − t²)` has no
/// truncating variable. Negative y-prefactors (possible with
/// [`YConvention::AsPrinted`]) are absorbed by a common shift of every term
/// and of the target exponent.
pub fn theorem_extraction(p: &ModuliParams, convention: YConvention) -> Result<Extraction, BettiError> {
    let p = p.clone().validated()?;
    let (g, k) = (p.genus, p.degree);
    let fl = p.floor_tau_bar();
    let target = k + 2 * g;
    let range = strata::d_range(&p)?;

    let y_shift = range
        .iter()
        .map(|&d| -convention.strata_y_exponent(d, g))
        .chain(core::iter::once(0))
        .max()
        .unwrap_or(0)
        .max(0);
    let y_target = target + y_shift;

    let e = pairs_exponents(&p);
    let extra = e.first_t.abs().max(e.second_t.abs()).max(4 * target);
    let trunc = t_window(g, target + y_target, extra).with_x(target).with_y(y_target);

    // Pairs part: x^{2g+1+⌊τ̄⌋} y^{k+2g} · numerator.
    let x0 = 2 * g + 1 + fl;
    let mut gf = Series::zero(trunc);
    if x0 <= target {
        let num = pairs_numerator(&p, target - x0, trunc)?;
        gf = &gf + &num.with_window(trunc).shift(Monomial::new(0, x0, k + 2 * g + y_shift));
    }

    // Strata part, times (1 − t²) to match the cleared denominator.
    let clear = one_minus_t2();
    for d in range {
        let desc = strata::stratum_descriptor(&p, d)?;
        let xe = 2 * d + 2;
        let ye = convention.strata_y_exponent(d, g) + y_shift;
        if xe > target || ye > y_target {
            continue;
        }
        let mx = macdonald_kernel(Var::X, g, target - xe, trunc)?;
        let my = macdonald_kernel(Var::Y, g, y_target - ye, trunc)?;
        let term = (&(&mx * &my) * &clear).with_window(trunc).shift(Monomial::new(desc.index, xe, ye));
        gf = &gf + &term;
    }

    let extracted = gf.coeff_extract(&[(Var::X, target), (Var::Y, y_target)])?;
    let value = extracted
        .exact_divide(&clear)
        .map_err(|_| IntegrityError::NonzeroRemainder)?;
    let total = total_poincare(&p)?.to_series();
    let diff = &value - &total;
    Ok(Extraction { convention, value, diff })
}

/// Complex dimension of the moduli space, read off as half the degree of `P(t)`.
pub fn half_degree(p: &PoincarePolynomial) -> Option<usize> {
    p.degree().map(|d| d / 2)
}

/// Integer Euler-characteristic style helper: `P(−1)`.
pub fn evaluate_at_minus_one(p: &PoincarePolynomial) -> BigInt {
    p.coeffs()
        .iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (i, c)| if i.is_even() { acc + c } else { acc - c })
}
