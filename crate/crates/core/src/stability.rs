//! Parameter validation and τ-stability of split rank-2 Higgs-pair models.
//!
//! A model is `E = L ⊕ Lc` with `Lc = L⁻¹ ⊗ det E`, a lower-triangular Higgs
//! field whose only possible entry is `ψ: L → Lc ⊗ K`, and a section `s`
//! sitting in one summand (or zero). Only the summands and `E` itself are
//! tested as subobjects; general sub-line-bundles of an extension would need
//! section-level data.
//!
//! All slopes are exact rationals and every comparison is strict.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::betti::ModuliParams;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

/// A violated standing assumption on `(g, k, τ̄)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    GenusTooSmall { genus: i64 },
    NotCoprime { degree: i64 },
    TauNotAboveSlope { tau_bar: BigRational, slope: BigRational },
    TauNotBelowMuPlus { tau_bar: BigRational, mu_plus: BigRational },
    TauIntegral { tau_bar: BigRational },
    TauEqualsSlope { tau_bar: BigRational },
    DegreeTooSmall { degree: i64, bound: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GenusTooSmall { genus } => write!(f, "genus {} < 2", genus),
            Violation::NotCoprime { degree } => write!(f, "gcd({}, 2) = {} ≠ 1", degree, degree.gcd(&2)),
            Violation::TauNotAboveSlope { tau_bar, slope } => {
                write!(f, "τ̄ = {} is not above μ(E) = {}", tau_bar, slope)
            }
            Violation::TauNotBelowMuPlus { tau_bar, mu_plus } => {
                write!(f, "τ̄ = {} is not below μ₊ = {}", tau_bar, mu_plus)
            }
            Violation::TauIntegral { tau_bar } => write!(f, "τ̄ = {} is an integer", tau_bar),
            Violation::TauEqualsSlope { tau_bar } => write!(f, "τ̄ = {} equals k/2", tau_bar),
            Violation::DegreeTooSmall { degree, bound } => {
                write!(f, "degree {} does not exceed 4g − 4 = {}", degree, bound)
            }
        }
    }
}

/// Every violated assumption, in a fixed order; `Ok` when none.
pub fn validate_params(p: &ModuliParams) -> Result<(), Vec<Violation>> {
    let mut v = Vec::new();
    let (g, k) = (p.genus, p.degree);
    let tau = &p.tau_bar;
    let slope = half(k);
    if g < 2 {
        v.push(Violation::GenusTooSmall { genus: g });
    }
    if k.gcd(&2) != 1 {
        v.push(Violation::NotCoprime { degree: k });
    }
    if *tau <= slope {
        v.push(Violation::TauNotAboveSlope { tau_bar: tau.clone(), slope: slope.clone() });
    }
    let mp = half(k + 1);
    if *tau >= mp {
        v.push(Violation::TauNotBelowMuPlus { tau_bar: tau.clone(), mu_plus: mp });
    }
    if tau.is_integer() {
        v.push(Violation::TauIntegral { tau_bar: tau.clone() });
    }
    if *tau == slope {
        v.push(Violation::TauEqualsSlope { tau_bar: tau.clone() });
    }
    if k <= 4 * g - 4 {
        v.push(Violation::DegreeTooSmall { degree: k, bound: 4 * g - 4 });
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StabilityError {
    #[error("μ₊ is only defined for odd degree, got {0}")]
    EvenDegree(i64),
}

/// Smallest Higgs-subbundle slope above `k/2` in the split rank-2 class.
pub fn mu_plus(k: i64) -> Result<BigRational, StabilityError> {
    if k.is_even() {
        return Err(StabilityError::EvenDegree(k));
    }
    Ok(half(k + 1))
}

/// Which summand carries the section `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SPlacement {
    InL,
    InLc,
    Zero,
}

impl SPlacement {
    pub const ALL: [SPlacement; 3] = [SPlacement::InL, SPlacement::InLc, SPlacement::Zero];

    pub fn name(self) -> &'static str {
        match self {
            SPlacement::InL => "in_L",
            SPlacement::InLc => "in_Lc",
            SPlacement::Zero => "zero",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("ψ ≠ 0 needs deg(L⁻²⊗det E⊗K) = {0} ≥ 0")]
    NegativePsiDegree(i64),
    #[error("a nonzero section of L needs deg L = {0} ≥ 0")]
    NegativeLDegree(i64),
    #[error("a nonzero section of Lc needs deg Lc = {0} ≥ 0")]
    NegativeLcDegree(i64),
    #[error("s in L frames L off its zeros, which forces ψ = 0")]
    PsiWithSInL,
    #[error("ψ ≠ 0 contradicts θ = 0")]
    PsiWithZeroTheta,
    #[error("divisor degree {found} does not match the required {expected}")]
    DivisorDegree { expected: i64, found: i64 },
}

/// Split rank-2 Higgs pair `(L ⊕ Lc, θ, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitHiggsPairModel {
    genus: i64,
    degree: i64,
    d_l: i64,
    psi_nonzero: bool,
    theta_zero: bool,
    s_placement: SPlacement,
    psi_divisor: Option<Vec<(u32, u32)>>,
    s_divisor: Option<Vec<(u32, u32)>>,
}

impl SplitHiggsPairModel {
    pub fn new(
        genus: i64,
        degree: i64,
        d_l: i64,
        psi_nonzero: bool,
        theta_zero: bool,
        s_placement: SPlacement,
    ) -> Result<Self, ModelError> {
        if psi_nonzero && theta_zero {
            return Err(ModelError::PsiWithZeroTheta);
        }
        let psi_deg = degree - 2 * d_l + 2 * genus - 2;
        if psi_nonzero && psi_deg < 0 {
            return Err(ModelError::NegativePsiDegree(psi_deg));
        }
        match s_placement {
            SPlacement::InL if psi_nonzero => return Err(ModelError::PsiWithSInL),
            SPlacement::InL if d_l < 0 => return Err(ModelError::NegativeLDegree(d_l)),
            SPlacement::InLc if degree - d_l < 0 => return Err(ModelError::NegativeLcDegree(degree - d_l)),
            _ => {}
        }
        Ok(SplitHiggsPairModel {
            genus,
            degree,
            d_l,
            psi_nonzero,
            theta_zero,
            s_placement,
            psi_divisor: None,
            s_divisor: None,
        })
    }

    /// Attaches zero divisors of `ψ` and `s` as `(label, multiplicity)` lists.
    pub fn with_divisors(
        mut self,
        psi: Vec<(u32, u32)>,
        s: Vec<(u32, u32)>,
    ) -> Result<Self, ModelError> {
        let deg = |d: &[(u32, u32)]| d.iter().map(|&(_, m)| i64::from(m)).sum::<i64>();
        let expected_psi = if self.psi_nonzero { self.psi_degree() } else { 0 };
        if deg(&psi) != expected_psi {
            return Err(ModelError::DivisorDegree { expected: expected_psi, found: deg(&psi) });
        }
        let expected_s = match self.s_placement {
            SPlacement::InL => self.d_l,
            SPlacement::InLc => self.degree - self.d_l,
            SPlacement::Zero => 0,
        };
        if deg(&s) != expected_s {
            return Err(ModelError::DivisorDegree { expected: expected_s, found: deg(&s) });
        }
        self.psi_divisor = Some(psi);
        self.s_divisor = Some(s);
        Ok(self)
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn d_l(&self) -> i64 {
        self.d_l
    }
    pub fn psi_nonzero(&self) -> bool {
        self.psi_nonzero
    }
    pub fn theta_zero(&self) -> bool {
        self.theta_zero
    }
    pub fn s_placement(&self) -> SPlacement {
        self.s_placement
    }
    pub fn psi_divisor(&self) -> Option<&[(u32, u32)]> {
        self.psi_divisor.as_deref()
    }
    pub fn s_divisor(&self) -> Option<&[(u32, u32)]> {
        self.s_divisor.as_deref()
    }

    /// `deg(L⁻² ⊗ det E ⊗ K)`.
    pub fn psi_degree(&self) -> i64 {
        self.degree - 2 * self.d_l + 2 * self.genus - 2
    }

    pub fn slope_of(&self, sub: Subbundle) -> BigRational {
        match sub {
            Subbundle::L => rat(self.d_l),
            Subbundle::Lc => rat(self.degree - self.d_l),
            Subbundle::E => half(self.degree),
        }
    }

    /// `μ(E/F)` for a proper summand `F`.
    pub fn quotient_slope(&self, sub: Subbundle) -> Option<BigRational> {
        match sub {
            Subbundle::L => Some(rat(self.degree - self.d_l)),
            Subbundle::Lc => Some(rat(self.d_l)),
            Subbundle::E => None,
        }
    }

    fn contains_s(&self, sub: Subbundle) -> bool {
        match (self.s_placement, sub) {
            (SPlacement::Zero, _) => true,
            (SPlacement::InL, Subbundle::L) | (SPlacement::InLc, Subbundle::Lc) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subbundle {
    L,
    Lc,
    E,
}

impl Subbundle {
    pub fn name(self) -> &'static str {
        match self {
            Subbundle::L => "L",
            Subbundle::Lc => "Lc",
            Subbundle::E => "E",
        }
    }
}

/// Higgs-invariant summands with their slopes.
pub fn invariant_subbundles(m: &SplitHiggsPairModel) -> Vec<(Subbundle, BigRational)> {
    let subs: &[Subbundle] = if m.psi_nonzero { &[Subbundle::Lc] } else { &[Subbundle::L, Subbundle::Lc] };
    subs.iter().map(|&s| (s, m.slope_of(s))).collect()
}

/// The two slope inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// `μ(F) < τ̄`.
    SubSlope,
    /// `μ(E/F) > τ̄` for `F ∋ s`.
    QuotientSlope,
}

impl Condition {
    pub fn number(self) -> u8 {
        match self {
            Condition::SubSlope => 1,
            Condition::QuotientSlope => 2,
        }
    }
}

/// A failed inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub subbundle: Subbundle,
    pub condition: Condition,
    /// `μ(F)` for condition (1), `μ(E/F)` for condition (2).
    pub slope: BigRational,
    pub tau_bar: BigRational,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.subbundle.name();
        match self.condition {
            Condition::SubSlope => write!(
                f,
                "F={}: μ(F)={} ≥ {} violates condition (1)",
                name, self.slope, self.tau_bar
            ),
            Condition::QuotientSlope => write!(
                f,
                "F={}: μ(E/F)={} ≤ {} violates condition (2)",
                name, self.slope, self.tau_bar
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub stable: bool,
    /// First failure found; present iff unstable.
    pub witness: Option<Witness>,
    /// Every failure, witness first.
    pub violations: Vec<Witness>,
    /// Set when `s = 0`. Such pairs are excluded analytically, not by the
    /// slope inequalities, so this never affects `stable`.
    pub s_zero_advisory: bool,
}

/// τ-stability against the summand subbundles and `E`.
///
/// Quotient conditions are scanned before slope conditions, so the reported
/// witness is the quotient failure whenever one exists.
pub fn is_tau_stable_split(m: &SplitHiggsPairModel, tau_bar: &BigRational) -> StabilityVerdict {
    let inv = invariant_subbundles(m);
    let mut violations = Vec::new();
    for (sub, _) in &inv {
        if !m.contains_s(*sub) {
            continue;
        }
        let q = m.quotient_slope(*sub).expect("summands are proper");
        if q <= *tau_bar {
            violations.push(Witness {
                subbundle: *sub,
                condition: Condition::QuotientSlope,
                slope: q,
                tau_bar: tau_bar.clone(),
            });
        }
    }
    for (sub, slope) in inv.into_iter().chain(core::iter::once((Subbundle::E, m.slope_of(Subbundle::E)))) {
        if slope >= *tau_bar {
            violations.push(Witness { subbundle: sub, condition: Condition::SubSlope, slope, tau_bar: tau_bar.clone() });
        }
    }
    StabilityVerdict {
        stable: violations.is_empty(),
        witness: violations.first().cloned(),
        violations,
        s_zero_advisory: m.s_placement == SPlacement::Zero,
    }
}

/// Slope stability of the underlying Higgs bundle: every invariant summand
/// has slope `< k/2`.
pub fn check_higgs_stability(m: &SplitHiggsPairModel) -> bool {
    let mu = half(m.degree);
    invariant_subbundles(m).iter().all(|(_, s)| *s < mu)
}

/// Every constructible model with `|dL| ≤ bound`, over all flag combinations.
pub fn enumerate_models(genus: i64, degree: i64, bound: i64) -> Vec<SplitHiggsPairModel> {
    let mut out = Vec::new();
    for d_l in -bound..=bound {
        for (psi, theta_zero) in [(true, false), (false, false), (false, true)] {
            for place in SPlacement::ALL {
                if let Ok(m) = SplitHiggsPairModel::new(genus, degree, d_l, psi, theta_zero, place) {
                    out.push(m);
                }
            }
        }
    }
    out
}
