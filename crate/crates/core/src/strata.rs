//! Fixed-point strata `N_d` of the circle action and their divisor models.
//!
//! A point of `N_d` is determined, up to scale, by the zero divisors of `ψ`
//! and `s`. Points of the surface are abstract `u32` labels; nothing here
//! needs coordinates.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::betti::{BettiError, ModuliParams};
use crate::stability::{validate_params, ModelError, SPlacement, SplitHiggsPairModel, Violation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrataError {
    #[error("invalid moduli parameters ({} violations)", .0.len())]
    InvalidParams(Vec<Violation>),
    #[error("stratum d = {d} is outside the admissible range")]
    OutOfRange { d: i64 },
    #[error("divisor degrees ({deg_d}, {deg_dp}) do not match the stratum ({n1}, {n2})")]
    DegreeMismatch { deg_d: i64, deg_dp: i64, n1: i64, n2: i64 },
    #[error("multiplicities must be at least 1")]
    ZeroMultiplicity,
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<StrataError> for BettiError {
    fn from(e: StrataError) -> Self {
        match e {
            StrataError::InvalidParams(v) => BettiError::InvalidParams(v),
            StrataError::OutOfRange { d } => BettiError::StratumOutOfRange { d },
            other => unreachable!("descriptor lookups cannot fail with {other:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StratumDescriptor {
    pub d: i64,
    pub n1: i64,
    pub n2: i64,
    pub index: i64,
    pub dim: i64,
}

impl StratumDescriptor {
    /// Bookkeeping for `deg L = d`, without any range check.
    pub fn raw(genus: i64, degree: i64, d: i64) -> Self {
        let n1 = -2 * d + degree + 2 * genus - 2;
        let n2 = degree - d;
        StratumDescriptor { d, n1, n2, index: 2 * (2 * d + genus - degree - 1), dim: n1 + n2 }
    }
}

/// `⌊m⌋` with `m = min(k, g − 1 + k/2)`.
pub fn floor_m(p: &ModuliParams) -> i64 {
    let (g, k) = (p.genus, p.degree);
    k.min((2 * (g - 1) + k).div_euclid(2))
}

/// Admissible `d`: `⌊τ̄⌋ + 1 ≤ d ≤ ⌊m⌋`.
pub fn d_range(p: &ModuliParams) -> Result<Vec<i64>, StrataError> {
    validate_params(p).map_err(StrataError::InvalidParams)?;
    Ok((p.floor_tau_bar() + 1..=floor_m(p)).collect())
}

pub fn stratum_descriptor(p: &ModuliParams, d: i64) -> Result<StratumDescriptor, StrataError> {
    if !d_range(p)?.contains(&d) {
        return Err(StrataError::OutOfRange { d });
    }
    let desc = StratumDescriptor::raw(p.genus, p.degree, d);
    assert!(desc.n1 >= 0 && desc.n2 >= 0, "stratum exponents must be nonnegative: {desc:?}");
    Ok(desc)
}

/// Descriptors for every admissible `d`, ascending.
pub fn descriptors(p: &ModuliParams) -> Result<Vec<StratumDescriptor>, StrataError> {
    d_range(p)?.into_iter().map(|d| stratum_descriptor(p, d)).collect()
}

/// Effective divisors `(D, D′)`: zeros of `ψ` and of `s`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DivisorPair {
    pub d: BTreeMap<u32, u32>,
    pub dp: BTreeMap<u32, u32>,
}

impl DivisorPair {
    pub fn new(d: BTreeMap<u32, u32>, dp: BTreeMap<u32, u32>) -> Result<Self, StrataError> {
        if d.values().chain(dp.values()).any(|&m| m == 0) {
            return Err(StrataError::ZeroMultiplicity);
        }
        Ok(DivisorPair { d, dp })
    }

    /// Builds from `(label, multiplicity)` lists, merging repeated labels.
    pub fn from_points(d: &[(u32, u32)], dp: &[(u32, u32)]) -> Result<Self, StrataError> {
        let collect = |pts: &[(u32, u32)]| {
            let mut m = BTreeMap::new();
            for &(p, k) in pts {
                *m.entry(p).or_insert(0) += k;
            }
            m
        };
        Self::new(collect(d), collect(dp))
    }

    pub fn deg_d(&self) -> i64 {
        self.d.values().map(|&m| i64::from(m)).sum()
    }

    pub fn deg_dp(&self) -> i64 {
        self.dp.values().map(|&m| i64::from(m)).sum()
    }

    fn check(&self, desc: &StratumDescriptor) -> Result<(), StrataError> {
        if self.deg_d() != desc.n1 || self.deg_dp() != desc.n2 {
            return Err(StrataError::DegreeMismatch {
                deg_d: self.deg_d(),
                deg_dp: self.deg_dp(),
                n1: desc.n1,
                n2: desc.n2,
            });
        }
        Ok(())
    }

    /// The admissible stratum whose degrees this pair matches, if any.
    pub fn stratum(&self, p: &ModuliParams) -> Result<StratumDescriptor, StrataError> {
        let descs = descriptors(p)?;
        descs
            .iter()
            .find(|desc| self.check(desc).is_ok())
            .copied()
            .ok_or(StrataError::DegreeMismatch {
                deg_d: self.deg_d(),
                deg_dp: self.deg_dp(),
                n1: descs.first().map_or(0, |x| x.n1),
                n2: descs.first().map_or(0, |x| x.n2),
            })
    }
}

/// Degree of `O(D′)² ⊗ O(D)⁻¹ ⊗ K`; equals `k` for every admissible pair.
pub fn divisor_bundle_map(pair: &DivisorPair, p: &ModuliParams) -> Result<i64, StrataError> {
    pair.stratum(p)?;
    Ok(2 * pair.deg_dp() - pair.deg_d() + 2 * p.genus - 2)
}

/// The split model `L ⊕ L⁻¹det E` with `deg L = d`, `ψ` vanishing on `D` and
/// `s ∈ H⁰(L⁻¹ ⊗ det E)` vanishing on `D′`.
///
/// Only degree consistency is required, so models one step below the
/// admissible range can be built and shown to be unstable.
pub fn fixed_point_model(pair: &DivisorPair, p: &ModuliParams, d: i64) -> Result<SplitHiggsPairModel, StrataError> {
    let desc = StratumDescriptor::raw(p.genus, p.degree, d);
    if desc.n1 < 0 {
        return Err(ModelError::NegativePsiDegree(desc.n1).into());
    }
    if desc.n2 < 0 {
        return Err(ModelError::NegativeLcDegree(desc.n2).into());
    }
    pair.check(&desc)?;
    let list = |m: &BTreeMap<u32, u32>| m.iter().map(|(&a, &b)| (a, b)).collect::<Vec<_>>();
    Ok(SplitHiggsPairModel::new(p.genus, p.degree, d, true, false, SPlacement::InLc)?
        .with_divisors(list(&pair.d), list(&pair.dp))?)
}

/// Every effective divisor of degree `n` on points `0..points`, as sorted
/// `(label, multiplicity)` maps.
pub fn enumerate_divisors(n: u32, points: u32) -> Vec<BTreeMap<u32, u32>> {
    fn go(n: u32, next: u32, points: u32, cur: &mut BTreeMap<u32, u32>, out: &mut Vec<BTreeMap<u32, u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if next >= points {
            return;
        }
        for m in (1..=n).rev() {
            cur.insert(next, m);
            go(n - m, next + 1, points, cur, out);
            cur.remove(&next);
        }
        go(n, next + 1, points, cur, out);
    }
    let mut out = Vec::new();
    go(n, 0, points, &mut BTreeMap::new(), &mut out);
    out
}
