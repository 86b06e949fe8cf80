//! Gradient descent on the residual functional with Armijo backtracking.

use alloc::vec::Vec;

use super::energy::{residual_breakdown, residual_energy, ResidualBreakdown};
use super::gradient::{constrain, residual_gradient, FrozenBlocks};
use super::params::VortexParams;
use super::spectral::{add_into, Field, Grid};
use super::state::{Branch, Fields, LatticeState};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("state ranks ({0}, {1}) do not match parameters ({2}, {3})")]
    RankMismatch(usize, usize, usize, usize),
    #[error("only degree-zero bundles are supported on the lattice")]
    NonzeroDegree,
    #[error("no step satisfied the sufficient-decrease test after {backtracks} halvings from {step}")]
    LineSearch { step: f64, backtracks: usize },
}

/// Armijo constant and backtracking budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSearch {
    pub armijo: f64,
    pub shrink: f64,
    pub max_backtracks: usize,
}

impl Default for LineSearch {
    fn default() -> Self {
        LineSearch { armijo: 1e-4, shrink: 0.5, max_backtracks: 60 }
    }
}

/// Blocks frozen in the Higgs-pair specialization: `θ₂ = 0` and the dead
/// morphism.
pub fn default_frozen(branch: Branch) -> FrozenBlocks {
    FrozenBlocks {
        theta2: true,
        phi: branch == Branch::Psi,
        psi: branch == Branch::Phi,
        ..FrozenBlocks::NONE
    }
}

/// An accepted descent step.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub state: LatticeState,
    pub energy_before: f64,
    pub energy_after: f64,
    /// `‖∇E‖²` of the constrained gradient.
    pub gradient_norm_sqr: f64,
    pub step: f64,
}

fn check_compat(s: &LatticeState, p: &VortexParams) -> Result<(), SolveError> {
    if s.r1() != p.r1 || s.r2() != p.r2 {
        return Err(SolveError::RankMismatch(s.r1(), s.r2(), p.r1, p.r2));
    }
    if !p.is_degree_zero() {
        return Err(SolveError::NonzeroDegree);
    }
    Ok(())
}

fn divergence(g: &Grid, a: &[Field; 2]) -> Field {
    let mut d = g.dx(&a[0]);
    add_into(&mut d, &g.dy(&a[1]));
    d
}

/// Coulomb gauge-fixing term `λ‖∂ₓAₓ + ∂ᵧAᵧ‖²` summed over both bundles,
/// with its gradient. Used only to steer the descent direction: the residual
/// is invariant along gauge directions in the continuum, and on the band
/// those directions become nearly flat, which stalls plain descent.
pub fn gauge_penalty(s: &LatticeState, lambda: f64) -> (f64, Fields) {
    let g = &s.grid;
    let f = &s.fields;
    let mut grad = Fields::zeros(g.sites(), f.r1, f.r2);
    if lambda == 0.0 {
        return (0.0, grad);
    }
    let mut value = 0.0;
    for (a, out) in [(&f.a1, &mut grad.a1), (&f.a2, &mut grad.a2)] {
        let d = divergence(g, a);
        value += lambda * g.l2_sqr(&d);
        // ∂ is antisymmetric, so the adjoint of D ↦ ∂D is −∂.
        let scaled: Field = d.iter().map(|m| m.scale_re(-2.0 * lambda)).collect();
        out[0] = g.dx(&scaled);
        out[1] = g.dy(&scaled);
    }
    (value, grad)
}

fn moved(s: &LatticeState, dir: &Fields, alpha: f64) -> LatticeState {
    let mut t = s.clone();
    t.fields.axpy(-alpha, dir);
    t
}

/// `‖∇E‖²` below which a state is treated as critical.
pub const ZERO_GRADIENT: f64 = 1e-24;

/// Descent direction at a state, before the line search.
struct Direction {
    energy: f64,
    /// `‖∇E‖²` of the constrained residual gradient.
    gn2: f64,
    dir: Fields,
    /// `⟨∇E, dir⟩`, positive whenever `gn2` is.
    slope: f64,
}

/// The residual gradient plus the gradient of [`gauge_penalty`] with weight
/// `gauge`, with any part of the latter that opposes the residual gradient
/// removed.
fn direction(s: &LatticeState, p: &VortexParams, frozen: &FrozenBlocks, gauge: f64) -> Direction {
    let w = s.grid.weight();
    let (energy, mut grad) = residual_gradient(s, p);
    constrain(&s.grid, &mut grad, frozen);
    let gn2 = w * grad.dot(&grad);
    let mut slope = gn2;
    let mut dir = grad.clone();
    if gauge != 0.0 && gn2 > ZERO_GRADIENT {
        let (_, mut gg) = gauge_penalty(s, gauge);
        constrain(&s.grid, &mut gg, frozen);
        let overlap = w * grad.dot(&gg);
        if overlap < 0.0 {
            gg.axpy(-overlap / gn2, &grad);
        } else {
            slope += overlap;
        }
        dir.axpy(1.0, &gg);
    }
    Direction { energy, gn2, dir, slope }
}

fn search(s: &LatticeState, p: &VortexParams, d: &Direction, step: f64, ls: &LineSearch) -> Result<Step, SolveError> {
    if d.gn2 <= ZERO_GRADIENT {
        let e = d.energy;
        return Ok(Step { state: s.clone(), energy_before: e, energy_after: e, gradient_norm_sqr: d.gn2, step: 0.0 });
    }
    let mut alpha = step;
    for _ in 0..=ls.max_backtracks {
        let trial = moved(s, &d.dir, alpha);
        let e1 = residual_energy(&trial, p);
        if e1 <= d.energy - ls.armijo * alpha * d.slope {
            return Ok(Step { state: trial, energy_before: d.energy, energy_after: e1, gradient_norm_sqr: d.gn2, step: alpha });
        }
        alpha *= ls.shrink;
    }
    Err(SolveError::LineSearch { step, backtracks: ls.max_backtracks })
}

/// One backtracking step starting from `step`, along the residual gradient
/// steered by [`gauge_penalty`] with weight `gauge` (any part of the gauge
/// gradient opposing the residual gradient is removed). The Armijo test is
/// on the residual alone, so the residual never increases. A state whose
/// constrained residual gradient is numerically zero is returned unchanged.
pub fn flow_step(
    s: &LatticeState,
    p: &VortexParams,
    step: f64,
    frozen: &FrozenBlocks,
    ls: &LineSearch,
    gauge: f64,
) -> Result<Step, SolveError> {
    check_compat(s, p)?;
    search(s, p, &direction(s, p, frozen, gauge), step, ls)
}

/// How the first trial step of each line search is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepRule {
    /// Twice the previously accepted step.
    Doubling,
    /// Barzilai–Borwein estimate from the last two directions, falling back
    /// to doubling when the estimate is not positive.
    BarzilaiBorwein,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Converged once the residual is at most this.
    pub tol: f64,
    pub max_iter: usize,
    /// Stop as stalled once `‖∇E‖²` falls below this without convergence.
    pub grad_tol: f64,
    pub initial_step: f64,
    pub max_step: f64,
    pub line_search: LineSearch,
    /// Weight of [`gauge_penalty`] in the descent direction.
    pub gauge: f64,
    pub step_rule: StepRule,
    /// Overrides [`default_frozen`].
    pub frozen: Option<FrozenBlocks>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-14,
            max_iter: 20_000,
            grad_tol: 1e-26,
            initial_step: 1e-2,
            max_step: 100.0,
            line_search: LineSearch::default(),
            gauge: 3.0,
            step_rule: StepRule::BarzilaiBorwein,
            frozen: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StopReason {
    Converged,
    MaxIterations,
    /// Gradient vanished above tolerance: a critical point that is not a solution.
    Stalled,
    LineSearchFailed,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::MaxIterations => "max_iterations",
            StopReason::Stalled => "stalled",
            StopReason::LineSearchFailed => "line_search_failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub state: LatticeState,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub iterations: usize,
    pub residual: f64,
    pub breakdown: ResidualBreakdown,
    /// `‖θ₁‖²_{L²}`, the moment map of the circle action.
    pub moment_map: f64,
    /// `max | |s|² − τ |` over sites, for the live morphism.
    pub section_deviation: f64,
    /// `|½∫|s|² − (τ/2)·r₁·vol|`: the integrated trace of the first equation.
    pub trace_identity_error: f64,
    pub gradient_norm_sqr: f64,
    /// Residual after every accepted step, starting with the initial value.
    /// Non-increasing.
    pub history: Vec<f64>,
}

/// Lower bound on the residual from integrating the traces of both
/// equations at degree 0 (Cauchy–Schwarz on `∫ tr M₁` and `∫ tr M₂`).
/// Zero when the bound is vacuous.
pub fn trace_floor(p: &VortexParams, branch: Branch) -> f64 {
    let (r1, r2) = (p.r1 as f64, p.r2 as f64);
    // Live morphism norm S ≥ 0 enters the traces as ±S; the sign of τ
    // decides whether S can cancel the constant part.
    let t = p.tau * r1 * p.vol / 2.0;
    let obstructed = match branch {
        Branch::Phi => t < 0.0,
        Branch::Psi => t > 0.0,
    };
    if obstructed {
        t * t * (1.0 / r1 + 1.0 / r2) / p.vol
    } else {
        0.0
    }
}

pub(crate) fn section_deviation(s: &LatticeState, p: &VortexParams) -> f64 {
    let target = match s.branch {
        Branch::Phi => p.tau,
        Branch::Psi => p.tau_prime,
    };
    s.section_norm_sqr().iter().map(|&x| (x - target).abs()).fold(0.0, f64::max)
}

pub(crate) fn trace_identity_error(s: &LatticeState, p: &VortexParams) -> f64 {
    let half_norm = 0.5 * s.grid.weight() * s.section_norm_sqr().iter().sum::<f64>();
    (half_norm - 0.5 * p.tau * p.r1 as f64 * s.grid.vol()).abs()
}

/// Runs descent until the residual drops below `tol`, the gradient vanishes,
/// the line search fails, or `max_iter` steps are taken. Never panics on
/// non-convergence; the report says why it stopped.
pub fn solve(s0: &LatticeState, p: &VortexParams, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    check_compat(s0, p)?;
    let frozen = opts.frozen.unwrap_or_else(|| default_frozen(s0.branch));
    let mut state = s0.clone();
    let mut residual = residual_energy(&state, p);
    let mut history = alloc::vec![residual];
    let mut step = opts.initial_step;
    let mut gn2 = f64::INFINITY;
    let mut iterations = 0;
    let mut prev: Option<(Fields, f64)> = None;
    let reason = loop {
        if residual <= opts.tol {
            break StopReason::Converged;
        }
        if iterations >= opts.max_iter {
            break StopReason::MaxIterations;
        }
        let d = direction(&state, p, &frozen, opts.gauge);
        gn2 = d.gn2;
        if gn2 <= opts.grad_tol.max(ZERO_GRADIENT) {
            break StopReason::Stalled;
        }
        if let (StepRule::BarzilaiBorwein, Some((pd, alpha))) = (opts.step_rule, &prev) {
            // x_k − x_{k−1} = −α d_{k−1}, so BB1 = α‖d_{k−1}‖² / ⟨d_{k−1}, d_{k−1} − d_k⟩.
            let dd = pd.dot(pd);
            let denom = dd - pd.dot(&d.dir);
            if denom > 0.0 {
                step = (alpha * dd / denom).min(opts.max_step);
            }
        }
        match search(&state, p, &d, step, &opts.line_search) {
            Ok(st) => {
                state = st.state;
                residual = st.energy_after;
                history.push(residual);
                step = (2.0 * st.step).min(opts.max_step);
                prev = Some((d.dir, st.step));
                iterations += 1;
            }
            Err(SolveError::LineSearch { .. }) => break StopReason::LineSearchFailed,
            Err(e) => return Err(e),
        }
    };
    let breakdown = residual_breakdown(&state, p);
    Ok(SolveReport {
        converged: reason == StopReason::Converged,
        stop_reason: reason,
        iterations,
        residual,
        breakdown,
        moment_map: state.moment_map(),
        section_deviation: section_deviation(&state, p),
        trace_identity_error: trace_identity_error(&state, p),
        gradient_norm_sqr: gn2,
        history,
        state,
    })
}
