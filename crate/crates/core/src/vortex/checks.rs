//! Integrated pointwise identities that hold at solutions.
//!
//! Both are the integrals of Weitzenböck-type identities on the flat torus,
//! where the Laplacian term integrates to zero and there is no Ricci term.
//! Form norms use `|dz|² = 2` and `|dz∧dz̄|² = 4`.

use super::energy::residual_energy;
use super::mat::{Mat, C};
use super::params::VortexParams;
use super::spectral::Field;
use super::state::{Branch, LatticeState};

const I: C = C::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CheckError {
    #[error("state is not a solution: residual {residual:e} exceeds {tol:e}")]
    NotConverged { residual: f64, tol: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct L4Identity {
    /// `|∫ 2‖∂ᴬs‖² + 2‖θ*s‖² + ‖s‖⁴ − τ‖s‖²|`.
    pub res1: f64,
    /// `|∫ 2‖∇¹'⁰θ‖² + 2‖[θ,θ*]‖² + ‖θ*s‖²|`.
    pub res2: f64,
}

/// The live morphism with the connections and Higgs fields of its target
/// (left) and source (right) bundles, and the constant it is normalized to.
struct Section<'a> {
    u: &'a Field,
    left: (&'a Field, &'a Field, &'a Field),
    right: (&'a Field, &'a Field, &'a Field),
    tau: f64,
}

fn section<'a>(s: &'a LatticeState, p: &VortexParams) -> Section<'a> {
    let f = &s.fields;
    let e1 = (&f.a1[0], &f.a1[1], &f.theta1);
    let e2 = (&f.a2[0], &f.a2[1], &f.theta2);
    match s.branch {
        Branch::Phi => Section { u: &f.phi, left: e1, right: e2, tau: p.tau },
        Branch::Psi => Section { u: &f.psi, left: e2, right: e1, tau: p.tau_prime },
    }
}

/// Both integrated identities at a state with residual at most `tol`.
pub fn l4_identity_check(s: &LatticeState, p: &VortexParams, tol: f64) -> Result<L4Identity, CheckError> {
    let residual = residual_energy(s, p);
    if !(residual <= tol) {
        return Err(CheckError::NotConverged { residual, tol });
    }
    let g = &s.grid;
    let sec = section(s, p);
    let u = sec.u;
    let (lx, ly, lt) = sec.left;
    let (rx, ry, rt) = sec.right;
    let (dxu, dyu) = (g.dx(u), g.dy(u));
    let cov = |du: &Field, l: &Field, r: &Field, i: usize| du[i] + l[i] * u[i] - u[i] * r[i];

    let f = &s.fields;
    let th = &f.theta1;
    let (ax, ay) = (&f.a1[0], &f.a1[1]);
    let (dxth, dyth) = (g.dx(th), g.dy(th));

    let mut int1 = 0.0;
    let mut int2 = 0.0;
    for i in 0..g.sites() {
        let nz: Mat = (cov(&dxu, lx, rx, i) - cov(&dyu, ly, ry, i).scale(I)).scale_re(0.5);
        let theta_star_s = lt[i].adj() * u[i] - u[i] * rt[i].adj();
        let uu = u[i] * u[i].adj();
        let norm2 = uu.trace().re;
        int1 += 4.0 * nz.norm_sqr() + 4.0 * theta_star_s.norm_sqr() + uu.norm_sqr() - sec.tau * norm2;

        let gx = dxth[i] + ax[i].comm(&th[i]);
        let gy = dyth[i] + ay[i].comm(&th[i]);
        let dz_th = (gx - gy.scale(I)).scale_re(0.5);
        let c = th[i].comm(&th[i].adj());
        int2 += 8.0 * dz_th.norm_sqr() + 8.0 * c.norm_sqr() + 2.0 * theta_star_s.norm_sqr();
    }
    let w = g.weight();
    Ok(L4Identity { res1: (w * int1).abs(), res2: (w * int2).abs() })
}
