//! Higgs pairs on Riemann surfaces.
//!
//! Exact Betti-number computations for the moduli space of τ-stable Higgs
//! pairs of rank 2, a slope-stability checker for split Higgs-pair models,
//! and a lattice solver for the doubly-coupled τ-vortex equations on a flat
//! torus.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and reporting live in the companion `higgspair-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod betti;
pub mod oracle;
pub mod series;
pub mod stability;
pub mod strata;
pub mod vortex;

pub use betti::{ModuliParams, PoincarePolynomial};
pub use series::{Monomial, Series, Truncation, Var, Q};
