use std::fmt::Write as _;

use higgspair::betti::sym_poincare;
use higgspair::oracle::{fd_gradient_check, sym_betti};
use higgspair::vortex::energy::decomposition_check_with;
use higgspair::vortex::{Branch, Fault, Grid, LatticeState, RandomSpec, VortexParams};
use higgspair::{Monomial, Series, Truncation, Q};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::Output;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum InjectFault {
    /// Flip the sign of tau inside the first deviation term of the energy.
    DeviationSignFlip,
}

struct Group {
    name: &'static str,
    cases: usize,
    failures: usize,
    /// Largest error seen, for the floating-point groups.
    worst: Option<f64>,
}

impl Group {
    fn pass(&self) -> bool {
        self.failures == 0
    }
}

fn random_series(rng: &mut ChaCha8Rng) -> Series {
    let window = Truncation::new(-6, 12, 4, 4);
    let n = rng.random_range(0..6);
    let terms = (0..n).map(|_| {
        let m = Monomial::new(rng.random_range(-3..6), rng.random_range(0..3), rng.random_range(0..3));
        (m, Q::from_integer(BigInt::from(rng.random_range(-5i64..6))))
    });
    Series::from_terms(terms.collect::<Vec<_>>(), window)
}

fn series_group(rng: &mut ChaCha8Rng) -> Group {
    let cases = 32;
    let mut failures = 0;
    for _ in 0..cases {
        let (a, b, c) = (random_series(rng), random_series(rng), random_series(rng));
        let divisor = Series::t_poly(&[1, rng.random_range(-3..4), 1], 0);
        let wide = a.with_window(Truncation::new(-20, 40, 4, 4));
        let ok = &a + &b == &b + &a
            && &a * &b == &b * &a
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && (&wide * &divisor).exact_divide(&divisor).as_ref() == Ok(&wide);
        failures += usize::from(!ok);
    }
    Group { name: "series", cases, failures, worst: None }
}

fn macdonald_group() -> Group {
    let mut cases = 0;
    let mut failures = 0;
    for g in 0..=3 {
        for n in 0..=10 {
            cases += 1;
            let ok = sym_poincare(n, g).map(|p| p.coeffs().to_vec() == sym_betti(n, g)).unwrap_or(false);
            failures += usize::from(!ok);
        }
    }
    Group { name: "macdonald", cases, failures, worst: None }
}

fn states(rng: &mut ChaCha8Rng, count: usize, spec: RandomSpec) -> Vec<(LatticeState, VortexParams)> {
    let shapes = [(1, 1, Branch::Phi), (2, 1, Branch::Phi), (2, 1, Branch::Psi), (1, 2, Branch::Phi)];
    (0..count)
        .map(|i| {
            let (r1, r2, branch) = shapes[i % shapes.len()];
            let tau = rng.random_range(-2.0..2.0);
            let p = VortexParams::new(r1, r2, 4.0, tau).expect("fixed shapes are valid");
            let g = Grid::new(8, 4.0).expect("fixed grid is valid");
            (LatticeState::random(g, r1, r2, branch, rng.random(), spec), p)
        })
        .collect()
}

fn float_group(name: &'static str, errors: Vec<f64>, tol: f64) -> Group {
    let failures = errors.iter().filter(|e| !(**e <= tol)).count();
    let worst = errors.iter().copied().fold(0.0, f64::max);
    Group { name, cases: errors.len(), failures, worst: Some(worst) }
}

pub fn selftest(seed: u64, fault: Option<InjectFault>) -> (Output, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fault = match fault {
        Some(InjectFault::DeviationSignFlip) => Fault::DeviationSignFlip,
        None => Fault::None,
    };
    let mut groups = vec![series_group(&mut rng), macdonald_group()];
    let decomposition =
        states(&mut rng, 12, RandomSpec::default()).iter().map(|(s, p)| decomposition_check_with(s, p, fault)).collect();
    groups.push(float_group("decomposition", decomposition, 1e-10));
    let spec = RandomSpec { holomorphic_higgs: false, ..RandomSpec::default() };
    let gradient = states(&mut rng, 4, spec)
        .iter()
        .flat_map(|(s, p)| fd_gradient_check(s, p, 1e-5).into_iter().map(|(_, e)| e))
        .collect();
    groups.push(float_group("gradient", gradient, 1e-6));

    let pass = groups.iter().all(Group::pass);
    let json = json!({
        "seed": seed,
        "fault": match fault { Fault::None => "none", Fault::DeviationSignFlip => "deviation-sign-flip" },
        "pass": pass,
        "groups": groups.iter().map(|g| json!({
            "name": g.name, "pass": g.pass(), "cases": g.cases, "failures": g.failures,
            "worst": g.worst.map_or(Value::Null, |w| json!(w)),
        })).collect::<Vec<_>>(),
    });
    let mut pretty = String::new();
    for g in &groups {
        let worst = g.worst.map(|w| format!(", worst {w:e}")).unwrap_or_default();
        let tag = if g.pass() { "pass" } else { "FAIL" };
        writeln!(pretty, "{tag} {:<14} {}/{} cases{worst}", g.name, g.cases - g.failures, g.cases).unwrap();
    }
    (Output { json, pretty, csv: None }, pass)
}
