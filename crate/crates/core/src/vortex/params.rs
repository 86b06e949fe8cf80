//! Ranks, degrees, area and coupling constants.

use core::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ParamsError {
    #[error("area must be positive, got {0}")]
    NonPositiveVolume(f64),
    #[error("ranks must lie in 1..=4, got ({0}, {1})")]
    BadRank(usize, usize),
    #[error("τ rank E₁ + τ′ rank E₂ = {lhs} but 4π(d₁ + d₂)/vol = {rhs}")]
    TauPrimeMismatch { lhs: f64, rhs: f64 },
    #[error("σ needs (r₁+r₂)τ/4π > (d₁+d₂)/vol, i.e. τ > {tau_min}; got τ = {tau}")]
    SigmaDenominator { tau: f64, tau_min: f64 },
}

/// Coupling data for the doubly-coupled vortex equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VortexParams {
    pub r1: usize,
    pub r2: usize,
    pub d1: i64,
    pub d2: i64,
    pub vol: f64,
    pub tau: f64,
    pub tau_prime: f64,
}

impl VortexParams {
    /// Degree-zero bundles; `τ′` follows from `τ r₁ + τ′ r₂ = 0`.
    pub fn new(r1: usize, r2: usize, vol: f64, tau: f64) -> Result<Self, ParamsError> {
        Self::with_degrees(r1, r2, 0, 0, vol, tau)
    }

    pub fn with_degrees(r1: usize, r2: usize, d1: i64, d2: i64, vol: f64, tau: f64) -> Result<Self, ParamsError> {
        if !(vol > 0.0) {
            return Err(ParamsError::NonPositiveVolume(vol));
        }
        if !(1..=4).contains(&r1) || !(1..=4).contains(&r2) {
            return Err(ParamsError::BadRank(r1, r2));
        }
        let tau_prime = (4.0 * PI * (d1 + d2) as f64 / vol - tau * r1 as f64) / r2 as f64;
        let p = VortexParams { r1, r2, d1, d2, vol, tau, tau_prime };
        p.check_tau_prime()?;
        Ok(p)
    }

    /// Verifies `τ r₁ + τ′ r₂ = 4π(d₁ + d₂)/vol`.
    pub fn check_tau_prime(&self) -> Result<(), ParamsError> {
        let lhs = self.tau * self.r1 as f64 + self.tau_prime * self.r2 as f64;
        let rhs = 4.0 * PI * (self.d1 + self.d2) as f64 / self.vol;
        if (lhs - rhs).abs() > 1e-12 * (1.0 + rhs.abs() + self.tau.abs()) {
            return Err(ParamsError::TauPrimeMismatch { lhs, rhs });
        }
        Ok(())
    }

    pub fn is_degree_zero(&self) -> bool {
        self.d1 == 0 && self.d2 == 0
    }
}

/// `σ = 2r₂ / ((r₁+r₂)τ/4π − (d₁+d₂)/vol)`.
pub fn sigma_of(p: &VortexParams) -> Result<f64, ParamsError> {
    let r = (p.r1 + p.r2) as f64;
    let denom = r * p.tau / (4.0 * PI) - (p.d1 + p.d2) as f64 / p.vol;
    if !(denom > 0.0) {
        let tau_min = 4.0 * PI * (p.d1 + p.d2) as f64 / (p.vol * r);
        return Err(ParamsError::SigmaDenominator { tau: p.tau, tau_min });
    }
    Ok(2.0 * p.r2 as f64 / denom)
}

/// The constants `(c, c − 4π/σ)` of the dimensionally reduced equations,
/// `c = 2π(σ(d₁+d₂) + 2r₂·vol) / (σ(r₁+r₂)·vol)`. They should equal
/// `(τ/2, τ′/2)`.
pub fn coupling_constants(p: &VortexParams) -> Result<(f64, f64), ParamsError> {
    let sigma = sigma_of(p)?;
    let r = (p.r1 + p.r2) as f64;
    let c = 2.0 * PI * (sigma * (p.d1 + p.d2) as f64 + 2.0 * p.r2 as f64 * p.vol) / (sigma * r * p.vol);
    Ok((c, c - 4.0 * PI / sigma))
}
