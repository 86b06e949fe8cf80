//! The Yang–Mills–Higgs functional and its residual form.
//!
//! Conventions: `z = x + iy`, `ω = dx∧dy`, `|dz|² = 2`, connections are
//! anti-Hermitian potentials and `θ = Θ dz`. The full connection
//! `D = d_A + θ + θ*` has components `𝒜ₓ = Aₓ + Θ + Θ†` and
//! `𝒜ᵧ = Aᵧ + i(Θ − Θ†)`.
//!
//! [`ymh_energy`] works with `𝒜` directly. [`residual_energy`] splits the
//! curvature as `R = F − 2i[Θ,Θ†] + 2i(W − W†)` with `W = ∇_z̄Θ` and measures
//! `D″ = ∂̄_A + θ` on the morphisms. The two agree configuration-wise
//! whenever the Higgs fields are holomorphic and the bundles have degree 0.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::mat::{Mat, C};
use super::params::VortexParams;
use super::spectral::{Field, Grid};
use super::state::LatticeState;

const I: C = C::new(0.0, 1.0);

/// Deliberate corruptions used to check that the test suite notices them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Flips the sign of `τ` inside the first moment-map deviation of YMH.
    DeviationSignFlip,
}

/// `a² Σ |f|²`.
fn l2(g: &Grid, f: &[Mat]) -> f64 {
    g.l2_sqr(f)
}

/// Curvature route through the full connection `𝒜`.
fn full_connection(ax: &[Mat], ay: &[Mat], th: &[Mat]) -> (Field, Field) {
    let cx = ax.iter().zip(th).map(|(a, t)| *a + *t + t.adj()).collect();
    let cy = ay.iter().zip(th).map(|(a, t)| *a + (*t - t.adj()).scale(I)).collect();
    (cx, cy)
}

fn curvature(g: &Grid, cx: &[Mat], cy: &[Mat]) -> Field {
    let dxcy = g.dx(cy);
    let dycx = g.dy(cx);
    (0..cx.len()).map(|s| dxcy[s] - dycx[s] + cx[s].comm(&cy[s])).collect()
}

/// `∂u + L·u − u·R` for a morphism `u` between two bundles.
fn hom_derivative(du: &[Mat], left: &[Mat], u: &[Mat], right: &[Mat]) -> Field {
    (0..u.len()).map(|s| du[s] + left[s] * u[s] - u[s] * right[s]).collect()
}

/// YMH as six `L²` norms of the full connection plus the two deviation terms.
pub fn ymh_energy(s: &LatticeState, p: &VortexParams) -> f64 {
    ymh_energy_with(s, p, Fault::None)
}

pub fn ymh_energy_with(s: &LatticeState, p: &VortexParams, fault: Fault) -> f64 {
    let g = &s.grid;
    let f = &s.fields;
    let (c1x, c1y) = full_connection(&f.a1[0], &f.a1[1], &f.theta1);
    let (c2x, c2y) = full_connection(&f.a2[0], &f.a2[1], &f.theta2);
    let r1 = curvature(g, &c1x, &c1y);
    let r2 = curvature(g, &c2x, &c2y);

    let xphi = hom_derivative(&g.dx(&f.phi), &c1x, &f.phi, &c2x);
    let yphi = hom_derivative(&g.dy(&f.phi), &c1y, &f.phi, &c2y);
    let xpsi = hom_derivative(&g.dx(&f.psi), &c2x, &f.psi, &c1x);
    let ypsi = hom_derivative(&g.dy(&f.psi), &c2y, &f.psi, &c1y);

    let tau1 = match fault {
        Fault::None => p.tau,
        Fault::DeviationSignFlip => -p.tau,
    };
    let id1 = Mat::identity(f.r1);
    let id2 = Mat::identity(f.r2);
    let dev1: Field = (0..g.sites())
        .map(|i| f.phi[i] * f.phi[i].adj() - f.psi[i].adj() * f.psi[i] - id1.scale_re(tau1))
        .collect();
    let dev2: Field = (0..g.sites())
        .map(|i| f.psi[i] * f.psi[i].adj() - f.phi[i].adj() * f.phi[i] - id2.scale_re(p.tau_prime))
        .collect();

    l2(g, &r1)
        + l2(g, &r2)
        + l2(g, &xphi)
        + l2(g, &yphi)
        + l2(g, &xpsi)
        + l2(g, &ypsi)
        + 0.25 * l2(g, &dev1)
        + 0.25 * l2(g, &dev2)
}

/// Intermediates of one bundle `(Aₓ, Aᵧ, Θ)`.
#[derive(Clone, Debug)]
pub(crate) struct BundleTerms {
    /// `∂ₓAᵧ − ∂ᵧAₓ + [Aₓ, Aᵧ]`.
    pub f: Field,
    /// `∇ₓΘ`, `∇ᵧΘ`.
    pub gx: Field,
    pub gy: Field,
    /// `∇_z̄Θ`.
    pub w: Field,
    /// `F − 2i[Θ,Θ†] + 2i(W − W†)`, the curvature of `D`.
    pub r: Field,
}

pub(crate) fn bundle_terms(g: &Grid, ax: &[Mat], ay: &[Mat], th: &[Mat]) -> BundleTerms {
    let dxay = g.dx(ay);
    let dyax = g.dy(ax);
    let dxth = g.dx(th);
    let dyth = g.dy(th);
    let n = ax.len();
    let mut out = BundleTerms {
        f: Vec::with_capacity(n),
        gx: Vec::with_capacity(n),
        gy: Vec::with_capacity(n),
        w: Vec::with_capacity(n),
        r: Vec::with_capacity(n),
    };
    for s in 0..n {
        let f = dxay[s] - dyax[s] + ax[s].comm(&ay[s]);
        let gx = dxth[s] + ax[s].comm(&th[s]);
        let gy = dyth[s] + ay[s].comm(&th[s]);
        let w = (gx + gy.scale(I)).scale_re(0.5);
        let c = th[s] * th[s].adj() - th[s].adj() * th[s];
        let r = f - c.scale(2.0 * I) + (w - w.adj()).scale(2.0 * I);
        out.f.push(f);
        out.gx.push(gx);
        out.gy.push(gy);
        out.w.push(w);
        out.r.push(r);
    }
    out
}

/// Intermediates of a morphism `u: E_R → E_L`.
#[derive(Clone, Debug)]
pub(crate) struct HomTerms {
    /// `∇_z̄u`.
    pub z: Field,
    /// `Θ_L u − u Θ_R`.
    pub p: Field,
}

pub(crate) fn hom_terms(
    g: &Grid,
    u: &[Mat],
    (lx, ly, lt): (&[Mat], &[Mat], &[Mat]),
    (rx, ry, rt): (&[Mat], &[Mat], &[Mat]),
) -> HomTerms {
    let nx = hom_derivative(&g.dx(u), lx, u, rx);
    let ny = hom_derivative(&g.dy(u), ly, u, ry);
    HomTerms {
        z: (0..u.len()).map(|s| (nx[s] + ny[s].scale(I)).scale_re(0.5)).collect(),
        p: (0..u.len()).map(|s| lt[s] * u[s] - u[s] * rt[s]).collect(),
    }
}

/// Everything the residual and its gradient need.
#[derive(Clone, Debug)]
pub(crate) struct Forward {
    /// `iR₁ + ½φφ† − ½ψ†ψ − τ/2`.
    pub m1: Field,
    /// `iR₂ − ½φ†φ + ½ψψ† − τ′/2`.
    pub m2: Field,
    pub phi: HomTerms,
    pub psi: HomTerms,
}

pub(crate) fn forward(s: &LatticeState, p: &VortexParams) -> Forward {
    let g = &s.grid;
    let f = &s.fields;
    let b1 = bundle_terms(g, &f.a1[0], &f.a1[1], &f.theta1);
    let b2 = bundle_terms(g, &f.a2[0], &f.a2[1], &f.theta2);
    let e1 = (&f.a1[0][..], &f.a1[1][..], &f.theta1[..]);
    let e2 = (&f.a2[0][..], &f.a2[1][..], &f.theta2[..]);
    let phi = hom_terms(g, &f.phi, e1, e2);
    let psi = hom_terms(g, &f.psi, e2, e1);
    let id1 = Mat::identity(f.r1);
    let id2 = Mat::identity(f.r2);
    let n = g.sites();
    let m1 = (0..n)
        .map(|i| {
            b1.r[i].scale(I) + (f.phi[i] * f.phi[i].adj()).scale_re(0.5)
                - (f.psi[i].adj() * f.psi[i]).scale_re(0.5)
                - id1.scale_re(0.5 * p.tau)
        })
        .collect();
    let m2 = (0..n)
        .map(|i| {
            b2.r[i].scale(I) - (f.phi[i].adj() * f.phi[i]).scale_re(0.5)
                + (f.psi[i] * f.psi[i].adj()).scale_re(0.5)
                - id2.scale_re(0.5 * p.tau_prime)
        })
        .collect();
    Forward { m1, m2, phi, psi }
}

/// Split of the residual functional into its pieces.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ResidualBreakdown {
    /// `‖iΛR₁ + ½φφ* − ½ψ*ψ − τ/2‖²`.
    pub eq1: f64,
    /// `‖iΛR₂ − ½φ*φ + ½ψψ* − τ′/2‖²`.
    pub eq2: f64,
    /// `2‖D″φ‖²`.
    pub holo_phi: f64,
    /// `2‖D″ψ‖²`.
    pub holo_psi: f64,
    /// Largest pointwise `|M₁|`.
    pub eq1_max: f64,
    /// Largest pointwise `|M₂|`.
    pub eq2_max: f64,
    /// Largest pointwise `|θ·s|`, the action of the Higgs fields on the live
    /// morphism.
    pub theta_s_max: f64,
}

impl ResidualBreakdown {
    pub fn total(&self) -> f64 {
        self.eq1 + self.eq2 + self.holo_phi + self.holo_psi
    }

    /// `‖D″s‖²` for the live morphism.
    pub fn d_double_prime(&self) -> f64 {
        0.5 * (self.holo_phi + self.holo_psi)
    }
}

fn sup(f: &[Mat]) -> f64 {
    f.iter().map(|m| libm::sqrt(m.norm_sqr())).fold(0.0, f64::max)
}

pub(crate) fn breakdown_of(g: &Grid, fw: &Forward) -> ResidualBreakdown {
    ResidualBreakdown {
        eq1: l2(g, &fw.m1),
        eq2: l2(g, &fw.m2),
        holo_phi: 4.0 * (l2(g, &fw.phi.z) + l2(g, &fw.phi.p)),
        holo_psi: 4.0 * (l2(g, &fw.psi.z) + l2(g, &fw.psi.p)),
        eq1_max: sup(&fw.m1),
        eq2_max: sup(&fw.m2),
        theta_s_max: sup(&fw.phi.p).max(sup(&fw.psi.p)),
    }
}

pub fn residual_breakdown(s: &LatticeState, p: &VortexParams) -> ResidualBreakdown {
    breakdown_of(&s.grid, &forward(s, p))
}

/// The residual form: both vortex-equation residuals plus `2‖D″φ‖² + 2‖D″ψ‖²`.
pub fn residual_energy(s: &LatticeState, p: &VortexParams) -> f64 {
    residual_breakdown(s, p).total()
}

/// `2π(τ d₁ + τ′ d₂)`; the second Chern character terms vanish in real
/// dimension two.
pub fn topological_term(p: &VortexParams) -> f64 {
    2.0 * PI * (p.tau * p.d1 as f64 + p.tau_prime * p.d2 as f64)
}

/// `|YMH − residual − topological| / (1 + YMH)`.
pub fn decomposition_check(s: &LatticeState, p: &VortexParams) -> f64 {
    decomposition_check_with(s, p, Fault::None)
}

pub fn decomposition_check_with(s: &LatticeState, p: &VortexParams, fault: Fault) -> f64 {
    let ymh = ymh_energy_with(s, p, fault);
    let res = residual_energy(s, p);
    (ymh - res - topological_term(p)).abs() / (1.0 + ymh)
}
