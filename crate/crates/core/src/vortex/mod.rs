//! Doubly-coupled τ-vortex equations on a flat torus.
//!
//! Two trivial bundles `E₁`, `E₂` of ranks `r₁`, `r₂` over a flat square
//! torus carry unitary connections, Higgs fields `θᵢ = Θᵢ dz` and morphisms
//! `φ: E₂ → E₁`, `ψ: E₁ → E₂`. The Higgs-pair specialization takes `r₂ = 1`,
//! `θ₂ = 0` and `ψ = 0`, so that `s = φ` is a section of `E₁`.
//!
//! Fields are discretized spectrally (see [`spectral`]) and the solver runs
//! gradient descent on the residual functional.

pub mod checks;
pub mod energy;
pub mod gradient;
pub mod mat;
pub mod params;
pub mod solver;
pub mod spectral;
pub mod state;

pub use checks::{l4_identity_check, CheckError, L4Identity};
pub use energy::{decomposition_check, residual_breakdown, residual_energy, ymh_energy, Fault, ResidualBreakdown};
pub use params::{sigma_of, VortexParams};
pub use solver::{flow_step, solve, trace_floor, SolveError, SolveOptions, SolveReport, StepRule, StopReason};
pub use spectral::Grid;
pub use state::{Branch, LatticeState, RandomSpec};
