use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use higgspair::vortex::{solve, trace_floor, Branch, Grid, LatticeState, RandomSpec, SolveOptions, SolveReport, VortexParams};
use serde_json::json;

use crate::report::{invalid, Failure, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BranchArg {
    Phi,
    Psi,
}

#[derive(Clone, Debug, clap::Args)]
pub struct SolveArgs {
    /// Rank of the first bundle.
    #[arg(long, default_value_t = 1)]
    pub rank1: usize,
    /// Rank of the second bundle.
    #[arg(long, default_value_t = 1)]
    pub rank2: usize,
    /// Grid points per side, even and at least 8.
    #[arg(long, default_value_t = 16)]
    pub grid: usize,
    /// Area of the torus.
    #[arg(long, default_value_t = 16.0)]
    pub vol: f64,
    /// Vortex parameter tau.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub tau: f64,
    /// Convergence threshold on the residual functional.
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
    /// Iteration cap.
    #[arg(long, default_value_t = 20_000)]
    pub max_iter: usize,
    /// Seed of the random initial configuration.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Which morphism is live.
    #[arg(long, value_enum, default_value = "phi")]
    pub branch: BranchArg,
    /// Also write the JSON result to this file.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Write the final fields in binary (see the README for the layout).
    #[arg(long, value_name = "PATH")]
    pub dump_fields: Option<PathBuf>,
}

/// Amplitudes of the initial configuration: a small perturbation of a
/// constant unit morphism.
const START: RandomSpec =
    RandomSpec { connection: 0.1, higgs: 0.1, morphism: 0.1, morphism_offset: 0.5, holomorphic_higgs: false };

pub fn solve_cmd(args: &SolveArgs) -> Result<Output, Failure> {
    if !(args.tol > 0.0) || !args.tau.is_finite() {
        return Err(invalid("--tol must be positive and --tau finite"));
    }
    let branch = match args.branch {
        BranchArg::Phi => Branch::Phi,
        BranchArg::Psi => Branch::Psi,
    };
    let grid = Grid::new(args.grid, args.vol).map_err(invalid)?;
    let p = VortexParams::new(args.rank1, args.rank2, args.vol, args.tau).map_err(invalid)?;
    let s0 = LatticeState::random(grid, args.rank1, args.rank2, branch, args.seed, START).into_higgs_pair();
    let opts = SolveOptions { tol: args.tol, max_iter: args.max_iter, ..SolveOptions::default() };
    let r = solve(&s0, &p, &opts).map_err(invalid)?;
    let floor = trace_floor(&p, branch);
    let note = (floor > 0.0).then(|| {
        format!(
            "obstructed: integrating the traces of both equations bounds the residual below by {floor}, \
             so no solution exists for tau = {} on the {} branch",
            p.tau,
            branch.name()
        )
    });
    if let Some(path) = &args.dump_fields {
        dump(&r, path).map_err(|e| invalid(format!("writing {}: {e}", path.display())))?;
    }

    let b = &r.breakdown;
    let json = json!({
        "params": {
            "rank1": p.r1, "rank2": p.r2, "grid": args.grid, "vol": p.vol, "tau": p.tau,
            "tau_prime": p.tau_prime, "tol": args.tol, "max_iter": args.max_iter,
            "seed": args.seed, "branch": branch.name(),
        },
        "converged": r.converged,
        "stop_reason": r.stop_reason.name(),
        "iterations": r.iterations,
        "residual": r.residual,
        "breakdown": {
            "eq1": b.eq1, "eq2": b.eq2, "holo_phi": b.holo_phi, "holo_psi": b.holo_psi,
            "eq1_sup": b.eq1_max, "eq2_sup": b.eq2_max, "theta_s_sup": b.theta_s_max,
        },
        "moment_map": r.moment_map,
        "section_deviation": r.section_deviation,
        "trace_identity_error": r.trace_identity_error,
        "trace_floor": floor,
        "note": note,
    });
    let mut pretty = String::new();
    writeln!(
        pretty,
        "{} after {} iterations ({}), residual {:e}",
        if r.converged { "converged" } else { "not converged" },
        r.iterations,
        r.stop_reason.name(),
        r.residual
    )
    .unwrap();
    writeln!(pretty, "  eq1 {:e}  eq2 {:e}  D''phi {:e}  D''psi {:e}", b.eq1, b.eq2, b.holo_phi, b.holo_psi).unwrap();
    writeln!(pretty, "  sup|theta s| {:e}  |theta|^2 {:e}", b.theta_s_max, r.moment_map).unwrap();
    writeln!(pretty, "  max||s|^2 - tau| {:e}", r.section_deviation).unwrap();
    if let Some(n) = &note {
        writeln!(pretty, "  {n}").unwrap();
    }
    if let Some(path) = &args.out {
        let text = serde_json::to_string_pretty(&json).expect("values are serializable") + "\n";
        std::fs::write(path, text).map_err(|e| invalid(format!("writing {}: {e}", path.display())))?;
    }
    Ok(Output { json, pretty, csv: None })
}

/// Layout, all little-endian: magic `HPVF`, then `u32` version, `N`, `r1`,
/// `r2` and field count; per field a `u8` name length, the name and `u32`
/// rows and cols; then every field in turn, sites in storage order, each
/// matrix row-major as `(re, im)` pairs of `f64`.
fn dump(r: &SolveReport, path: &PathBuf) -> std::io::Result<()> {
    const NAMES: [&str; 8] = ["A1x", "A1y", "A2x", "A2y", "theta1", "theta2", "phi", "psi"];
    let s = &r.state;
    let slots = s.fields.slots();
    let mut out = Vec::new();
    out.extend_from_slice(b"HPVF");
    for v in [1, s.grid.n(), s.r1(), s.r2(), slots.len()] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for (name, f) in NAMES.iter().zip(slots) {
        let (rows, cols) = f[0].shape();
        out.push(name.len() as u8);
        out.extend_from_slice(name.as_bytes());
        out.extend_from_slice(&(rows as u32).to_le_bytes());
        out.extend_from_slice(&(cols as u32).to_le_bytes());
    }
    for f in slots {
        for m in f {
            for c in m.entries() {
                out.extend_from_slice(&c.re.to_le_bytes());
                out.extend_from_slice(&c.im.to_le_bytes());
            }
        }
    }
    std::fs::File::create(path)?.write_all(&out)
}
