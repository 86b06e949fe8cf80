//! Release criteria, one line each.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails if any criterion fails other than those listed in
//! `KNOWN_FAILURES`, and also if a listed one unexpectedly passes, so the
//! list cannot go stale.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use higgspair::betti::{
    pairs_poincare_n0, stratum_poincare, sym_poincare, theorem_extraction, total_poincare, ModuliParams,
    PoincarePolynomial, YConvention,
};
use higgspair::oracle::{fd_gradient_check, pairs_betti, sym_betti};
use higgspair::stability::{check_higgs_stability, enumerate_models, is_tau_stable_split};
use higgspair::strata::{d_range, descriptors, divisor_bundle_map, fixed_point_model, DivisorPair, StratumDescriptor};
use higgspair::vortex::*;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion 8 cannot pass with this discretization; see the README.
const KNOWN_FAILURES: &[u32] = &[8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// `τ̄ = k/2 + 1/4`, the middle of the admissible chamber.
fn mid(g: i64, k: i64) -> ModuliParams {
    ModuliParams::with_ratio(g, k, 2 * k + 1, 4)
}

/// The (g, k) grid of criteria 2–4: g ∈ {2, 3}, odd k ∈ [4g − 3, 4g + 3].
fn grid() -> Vec<(i64, i64)> {
    [2, 3].into_iter().flat_map(|g| (4 * g - 3..=4 * g + 3).step_by(2).map(move |k| (g, k))).collect()
}

fn ints(p: &PoincarePolynomial) -> Vec<BigInt> {
    p.coeffs().to_vec()
}

fn c1_macdonald() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for g in 0..=4 {
        for n in 0..=12 {
            count += 1;
            if ints(&sym_poincare(n, g).unwrap()) != sym_betti(n, g) {
                bad.push((n, g));
            }
        }
    }
    let el = t.elapsed();
    outcome(
        bad.is_empty() && el < Duration::from_secs(1),
        format!("{count} (n,g) pairs, mismatches {bad:?}, {}", secs(el)),
    )
}

fn c2_extraction() -> Outcome {
    let mut report = String::new();
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    let mut as_printed_hits = 0;
    let cases = grid();
    for &(g, k) in &cases {
        let p = mid(g, k);
        let t = Instant::now();
        let total = total_poincare(&p).unwrap();
        let corrected = theorem_extraction(&p, YConvention::Corrected).unwrap();
        slowest = slowest.max(t.elapsed());
        ok &= corrected.matches() && corrected.value == total.to_series();
        let printed = theorem_extraction(&p, YConvention::AsPrinted).unwrap();
        if printed.matches() {
            as_printed_hits += 1;
        }
        writeln!(report, "g={g} k={k} tau_bar={}", p.tau_bar).unwrap();
        writeln!(report, "  total      {total}").unwrap();
        writeln!(report, "  as_printed {}", printed.value).unwrap();
        writeln!(report, "  difference {}", printed.diff).unwrap();
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("as_printed_report.txt");
    let archived = std::fs::write(&path, &report).is_ok();
    outcome(
        ok && archived && slowest < Duration::from_secs(10),
        format!(
            "corrected == total on {} (g,k); as_printed matches {as_printed_hits}/{}; report {}; slowest {}",
            cases.len(),
            cases.len(),
            path.display(),
            secs(slowest)
        ),
    )
}

fn c3_integrity() -> Outcome {
    let mut bad = Vec::new();
    for (g, k) in grid() {
        let p = mid(g, k);
        let n0 = pairs_poincare_n0(&p);
        let (_, q) = pairs_betti(&p);
        let agrees = match (&n0, q.and_then(|q| q.to_dense())) {
            (Ok(n0), Some(q)) => {
                let mut a = ints(n0);
                let mut b = q;
                a.resize(a.len().max(b.len()), BigInt::zero());
                b.resize(a.len(), BigInt::zero());
                a == b
            }
            _ => false,
        };
        if !agrees {
            bad.push((g, k));
        }
    }
    outcome(bad.is_empty(), format!("{} (g,k) divisible, nonnegative, equal to oracle; failures {bad:?}", grid().len()))
}

fn random_pair(rng: &mut ChaCha8Rng, desc: &StratumDescriptor) -> DivisorPair {
    let pts = |n: i64, rng: &mut ChaCha8Rng| (0..n).map(|_| (rng.random_range(0..6u32), 1)).collect::<Vec<_>>();
    let d = pts(desc.n1, rng);
    let dp = pts(desc.n2, rng);
    DivisorPair::from_points(&d, &dp).unwrap()
}

fn c4_strata() -> Outcome {
    let mut bad = Vec::new();
    let mut strata = 0;
    for (g, k) in grid() {
        let p = mid(g, k);
        for desc in descriptors(&p).unwrap() {
            strata += 1;
            let poly = stratum_poincare(&p, desc.d).unwrap();
            let lo = poly.lowest_degree().map(|x| x as i64);
            let hi = poly.degree().map(|x| x as i64);
            if lo != Some(desc.index) || hi != Some(desc.index + 2 * desc.dim) {
                bad.push((g, k, desc.d));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cases = grid();
    let mut map_bad = 0;
    for _ in 0..1000 {
        let (g, k) = cases[rng.random_range(0..cases.len())];
        let p = mid(g, k);
        let descs = descriptors(&p).unwrap();
        let desc = descs[rng.random_range(0..descs.len())];
        let pair = random_pair(&mut rng, &desc);
        if divisor_bundle_map(&pair, &p) != Ok(k) {
            map_bad += 1;
        }
    }
    outcome(
        bad.is_empty() && map_bad == 0,
        format!("{strata} strata, degree failures {bad:?}; divisor map off in {map_bad}/1000 pairs"),
    )
}

fn c5_stability() -> Outcome {
    let t = Instant::now();
    let mut models = 0;
    let mut counterexamples = 0;
    let mut fixed_bad = Vec::new();
    let mut fixed_checked = 0;
    for g in [2i64, 3] {
        for k in (1..=15).step_by(2).filter(|&k| k > 4 * g - 4) {
            let p = mid(g, k);
            for m in enumerate_models(g, k, 10) {
                models += 1;
                if is_tau_stable_split(&m, &p.tau_bar).stable && !check_higgs_stability(&m) {
                    counterexamples += 1;
                }
            }
            let range = d_range(&p).unwrap();
            for d in range[0] - 2..=range[range.len() - 1] + 2 {
                let desc = StratumDescriptor::raw(g, k, d);
                if desc.n1 < 0 || desc.n2 < 0 {
                    continue;
                }
                let pair = DivisorPair::from_points(&[(0, desc.n1 as u32)][..(desc.n1 > 0) as usize], &[(1, desc.n2 as u32)][..(desc.n2 > 0) as usize]).unwrap();
                let Ok(m) = fixed_point_model(&pair, &p, d) else { continue };
                fixed_checked += 1;
                if is_tau_stable_split(&m, &p.tau_bar).stable != range.contains(&d) {
                    fixed_bad.push((g, k, d));
                }
            }
        }
    }
    let el = t.elapsed();
    outcome(
        counterexamples == 0 && fixed_bad.is_empty() && el < Duration::from_secs(5),
        format!(
            "{models} models, {counterexamples} counterexamples; {fixed_checked} fixed-point models, mismatches {fixed_bad:?}; {}",
            secs(el)
        ),
    )
}

fn c6_energy_identity() -> Outcome {
    let g = Grid::new(8, 16.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (r1, r2) in [(1, 1), (2, 1)] {
        let p = VortexParams::new(r1, r2, 16.0, 0.9).unwrap();
        for seed in 0..100 {
            let s = LatticeState::random(g.clone(), r1, r2, Branch::Phi, seed, RandomSpec::default());
            worst = worst.max(decomposition_check(&s, &p));
            count += 1;
        }
    }
    outcome(worst <= 1e-10, format!("{count} random states, worst relative error {worst:.2e}"))
}

fn small_start(n: usize, seed: u64) -> LatticeState {
    let g = Grid::new(n, 16.0).unwrap();
    let spec = RandomSpec { connection: 0.1, higgs: 0.1, morphism: 0.1, morphism_offset: 0.5, holomorphic_higgs: false };
    LatticeState::random(g, 1, 1, Branch::Phi, seed, spec).into_higgs_pair()
}

fn c7_convergence() -> Outcome {
    let p = VortexParams::new(1, 1, 16.0, 1.0).unwrap();
    let t = Instant::now();
    let r = solve(&small_start(16, 7), &p, &SolveOptions::default()).unwrap();
    let el = t.elapsed();
    let theta = r.moment_map.sqrt();
    let trace_ok = r.trace_identity_error <= 1e-4 * p.vol;
    let pos = r.converged && r.section_deviation <= 1e-5 && theta <= 1e-6 && trace_ok && el < Duration::from_secs(30);

    let q = VortexParams::new(1, 1, 16.0, -1.0).unwrap();
    let opts = SolveOptions { max_iter: 2000, ..SolveOptions::default() };
    let neg = solve(&small_start(16, 7), &q, &opts).unwrap();
    let floor = q.tau * q.tau * q.vol / 8.0;
    let neg_ok = !neg.converged && neg.residual >= floor * (1.0 - 1e-9);

    let mut sweep = Vec::new();
    for tau in [-1.0, -0.1, 0.1, 1.0] {
        let q = VortexParams::new(1, 1, 16.0, tau).unwrap();
        let r = solve(&small_start(8, 3), &q, &opts).unwrap();
        sweep.push((tau, r.converged));
    }
    let sweep_ok = sweep.iter().all(|&(tau, c)| c == (tau > 0.0));
    outcome(
        pos && neg_ok && sweep_ok,
        format!(
            "tau=1: converged {} in {} its, max||s|^2-1| {:.1e}, |theta| {:.1e}, trace err {:.1e}, {}; \
             tau=-1: converged {}, residual {:.3} vs floor {:.3}; sign sweep {sweep:?}",
            r.converged,
            r.iterations,
            r.section_deviation,
            theta,
            r.trace_identity_error,
            secs(el),
            neg.converged,
            neg.residual,
            floor
        ),
    )
}

fn c8_richardson() -> Outcome {
    let p = VortexParams::new(1, 1, 16.0, 1.0).unwrap();
    let mut res = Vec::new();
    for n in [16, 32] {
        let r = solve(&small_start(n, 7), &p, &SolveOptions::default()).unwrap();
        match l4_identity_check(&r.state, &p, SolveOptions::default().tol) {
            Ok(id) => res.push(id.res1),
            Err(e) => return outcome(false, format!("N={n}: {e}")),
        }
    }
    let ratio = res[1] / res[0];
    let pass = (ratio - 0.25).abs() <= 0.25 * 0.25;
    outcome(pass, format!("res1(16) {:.2e}, res1(32) {:.2e}, ratio {ratio:.3} (target 0.25 ± 25%)", res[0], res[1]))
}

fn c9_gradient() -> Outcome {
    let g = Grid::new(8, 4.0).unwrap();
    let shapes = [(1, 1, Branch::Phi), (2, 1, Branch::Phi), (2, 1, Branch::Psi), (1, 2, Branch::Phi)];
    let spec = RandomSpec { holomorphic_higgs: false, ..RandomSpec::default() };
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let (r1, r2, branch) = shapes[seed as usize % shapes.len()];
        let p = VortexParams::new(r1, r2, 4.0, 0.7).unwrap();
        let s = LatticeState::random(g.clone(), r1, r2, branch, 100 + seed, spec);
        for (_, err) in fd_gradient_check(&s, &p, 1e-5) {
            worst = worst.max(err);
        }
    }
    outcome(worst <= 1e-6, format!("20 random states, all blocks, worst relative error {worst:.2e}"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "Macdonald oracle equivalence", c1_macdonald),
        (2, "generating-function extraction", c2_extraction),
        (3, "formula integrity", c3_integrity),
        (4, "strata bookkeeping", c4_strata),
        (5, "stability suite", c5_stability),
        (6, "energy identity", c6_energy_identity),
        (7, "vortex convergence", c7_convergence),
        (8, "integrated identity Richardson ratio", c8_richardson),
        (9, "gradient check", c9_gradient),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let o = run();
        let known = KNOWN_FAILURES.contains(&id);
        let tag = match (o.pass, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (listed as known failure)",
        };
        println!("criterion {id} {tag:<12} {name}: {}", o.detail);
        if o.pass == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
