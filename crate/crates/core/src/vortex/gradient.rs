//! Exact `L²` gradient of the residual functional, by reverse accumulation.
//!
//! With `δE = a² Σ Re tr(Ḡ† δX)` the adjoint of each elementary operation
//! is, for a constant `c`:
//!
//! | forward         | adjoint                                  |
//! |-----------------|------------------------------------------|
//! | `X = c·U·V`     | `Ū += c̄·X̄·V†`, `V̄ += c̄·U†·X̄`             |
//! | `X = c·U·V†`    | `Ū += c̄·X̄·V`, `V̄ += c·X̄†·U`              |
//! | `X = c·U†·V`    | `Ū += c·V·X̄†`, `V̄ += c̄·U·X̄`              |
//! | `X = c·U†`      | `Ū += c·X̄†`                              |
//! | `X = c·∂U`      | `Ū −= ∂(c̄·X̄)` (∂ is antisymmetric)       |
//!
//! Connection gradients are finally restricted to anti-Hermitian directions.

use alloc::vec;

use super::energy::{breakdown_of, forward, HomTerms};
use super::mat::{Mat, C};
use super::params::VortexParams;
use super::spectral::{add_into, Field, Grid};
use super::state::{Block, Fields, LatticeState};

const I: C = C::new(0.0, 1.0);

struct BundleBar {
    ax: Field,
    ay: Field,
    th: Field,
}

fn zeros_like(f: &[Mat]) -> Field {
    let (r, c) = f[0].shape();
    vec![Mat::zeros(r, c); f.len()]
}

fn neg_into(dst: &mut [Mat], src: &[Mat]) {
    dst.iter_mut().zip(src).for_each(|(a, b)| *a -= *b);
}

/// Pulls `R̄` back through `R = F − 2i[Θ,Θ†] + 2i(W − W†)`.
fn bundle_backward(g: &Grid, rbar: &[Mat], ax: &[Mat], ay: &[Mat], th: &[Mat]) -> BundleBar {
    let n = rbar.len();
    let mut out = BundleBar { ax: zeros_like(ax), ay: zeros_like(ay), th: zeros_like(th) };
    let mut gxbar = zeros_like(th);
    let mut gybar = zeros_like(th);
    for s in 0..n {
        let fbar = rbar[s];
        let cbar = rbar[s].scale(2.0 * I);
        let wbar = (rbar[s] + rbar[s].adj()).scale(-2.0 * I);
        let csym = cbar + cbar.adj();
        out.th[s] += csym * th[s] - th[s] * csym;

        gxbar[s] = wbar.scale_re(0.5);
        gybar[s] = wbar.scale(-0.5 * I);
        // ∇Θ = ∂Θ + [A, Θ], sitewise part.
        let (gx, gy) = (gxbar[s], gybar[s]);
        out.ax[s] += gx * th[s].adj() - th[s].adj() * gx;
        out.ay[s] += gy * th[s].adj() - th[s].adj() * gy;
        out.th[s] += ax[s].adj() * gx - gx * ax[s].adj();
        out.th[s] += ay[s].adj() * gy - gy * ay[s].adj();
        // F = ∂ₓAᵧ − ∂ᵧAₓ + [Aₓ, Aᵧ], sitewise part.
        out.ax[s] += fbar * ay[s].adj() - ay[s].adj() * fbar;
        out.ay[s] += ax[s].adj() * fbar - fbar * ax[s].adj();
    }
    neg_into(&mut out.th, &g.dx(&gxbar));
    neg_into(&mut out.th, &g.dy(&gybar));
    neg_into(&mut out.ay, &g.dx(rbar));
    add_into(&mut out.ax, &g.dy(rbar));
    out
}

struct HomBar {
    u: Field,
    left: BundleBar,
    right: BundleBar,
}

type Side<'a> = (&'a [Mat], &'a [Mat], &'a [Mat]);

/// Pulls `Z̄ = ∂E/∂(∇_z̄u)` and `P̄ = ∂E/∂(Θ_L u − uΘ_R)` back to the fields.
fn hom_backward(g: &Grid, zbar: &[Mat], pbar: &[Mat], u: &[Mat], (lx, ly, lt): Side, (rx, ry, rt): Side) -> HomBar {
    let n = u.len();
    let mut out = HomBar {
        u: zeros_like(u),
        left: BundleBar { ax: zeros_like(lx), ay: zeros_like(ly), th: zeros_like(lt) },
        right: BundleBar { ax: zeros_like(rx), ay: zeros_like(ry), th: zeros_like(rt) },
    };
    let mut nxbar = zeros_like(u);
    let mut nybar = zeros_like(u);
    for s in 0..n {
        let nx = zbar[s].scale_re(0.5);
        let ny = zbar[s].scale(-0.5 * I);
        nxbar[s] = nx;
        nybar[s] = ny;
        let ua = u[s].adj();
        out.left.ax[s] += nx * ua;
        out.left.ay[s] += ny * ua;
        out.u[s] += lx[s].adj() * nx + ly[s].adj() * ny;
        out.u[s] -= nx * rx[s].adj() + ny * ry[s].adj();
        out.right.ax[s] -= ua * nx;
        out.right.ay[s] -= ua * ny;

        let p = pbar[s];
        out.left.th[s] += p * ua;
        out.u[s] += lt[s].adj() * p - p * rt[s].adj();
        out.right.th[s] -= ua * p;
    }
    neg_into(&mut out.u, &g.dx(&nxbar));
    neg_into(&mut out.u, &g.dy(&nybar));
    out
}

fn accumulate(dst: &mut BundleBar, src: &BundleBar) {
    add_into(&mut dst.ax, &src.ax);
    add_into(&mut dst.ay, &src.ay);
    add_into(&mut dst.th, &src.th);
}

/// Residual energy and its `L²` gradient, before any band projection.
pub fn residual_gradient(s: &LatticeState, p: &VortexParams) -> (f64, Fields) {
    let g = &s.grid;
    let f = &s.fields;
    let fw = forward(s, p);
    let energy = breakdown_of(g, &fw).total();
    let n = g.sites();

    let mbar1: Field = fw.m1.iter().map(|m| m.scale_re(2.0)).collect();
    let mbar2: Field = fw.m2.iter().map(|m| m.scale_re(2.0)).collect();
    let rbar1: Field = mbar1.iter().map(|m| m.scale(-I)).collect();
    let rbar2: Field = mbar2.iter().map(|m| m.scale(-I)).collect();

    let mut phibar = zeros_like(&f.phi);
    let mut psibar = zeros_like(&f.psi);
    for i in 0..n {
        let (m1, m2) = (mbar1[i], mbar2[i]);
        let (ph, ps) = (f.phi[i], f.psi[i]);
        phibar[i] += (m1 + m1.adj()) * ph.scale_re(0.5);
        psibar[i] -= ps * (m1 + m1.adj()).scale_re(0.5);
        phibar[i] -= ph * (m2 + m2.adj()).scale_re(0.5);
        psibar[i] += (m2 + m2.adj()) * ps.scale_re(0.5);
    }

    let mut b1 = bundle_backward(g, &rbar1, &f.a1[0], &f.a1[1], &f.theta1);
    let mut b2 = bundle_backward(g, &rbar2, &f.a2[0], &f.a2[1], &f.theta2);

    let e1: Side = (&f.a1[0], &f.a1[1], &f.theta1);
    let e2: Side = (&f.a2[0], &f.a2[1], &f.theta2);
    let hom = |t: &HomTerms, u: &[Mat], l: Side, r: Side| {
        let zbar: Field = t.z.iter().map(|m| m.scale_re(8.0)).collect();
        let pbar: Field = t.p.iter().map(|m| m.scale_re(8.0)).collect();
        hom_backward(g, &zbar, &pbar, u, l, r)
    };
    let hphi = hom(&fw.phi, &f.phi, e1, e2);
    let hpsi = hom(&fw.psi, &f.psi, e2, e1);
    add_into(&mut phibar, &hphi.u);
    add_into(&mut psibar, &hpsi.u);
    accumulate(&mut b1, &hphi.left);
    accumulate(&mut b2, &hphi.right);
    accumulate(&mut b1, &hpsi.right);
    accumulate(&mut b2, &hpsi.left);

    let ah = |f: Field| -> Field { f.iter().map(Mat::anti_hermitian_part).collect() };
    let grad = Fields {
        r1: f.r1,
        r2: f.r2,
        a1: [ah(b1.ax), ah(b1.ay)],
        a2: [ah(b2.ax), ah(b2.ay)],
        theta1: b1.th,
        theta2: b2.th,
        phi: phibar,
        psi: psibar,
    };
    (energy, grad)
}

/// Which blocks the descent may move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrozenBlocks {
    pub a1: bool,
    pub a2: bool,
    pub theta1: bool,
    pub theta2: bool,
    pub phi: bool,
    pub psi: bool,
}

impl FrozenBlocks {
    pub const NONE: FrozenBlocks =
        FrozenBlocks { a1: false, a2: false, theta1: false, theta2: false, phi: false, psi: false };

    pub fn is_frozen(&self, b: Block) -> bool {
        match b {
            Block::A1 => self.a1,
            Block::A2 => self.a2,
            Block::Theta1 => self.theta1,
            Block::Theta2 => self.theta2,
            Block::Phi => self.phi,
            Block::Psi => self.psi,
        }
    }
}

/// Projects a raw gradient onto the band and zeroes frozen blocks.
pub fn constrain(grid: &Grid, grad: &mut Fields, frozen: &FrozenBlocks) {
    for b in Block::ALL {
        if frozen.is_frozen(b) {
            grad.zero_block(b);
        } else {
            grad.map_block(b, |f| grid.project(f));
        }
    }
}
