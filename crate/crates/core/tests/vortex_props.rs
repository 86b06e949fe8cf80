use higgspair::oracle::fd_gradient_check;
use higgspair::vortex::solver::{default_frozen, flow_step, LineSearch};
use higgspair::vortex::state::random_unitary;
use higgspair::vortex::*;
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = (usize, usize, Branch)> {
    prop_oneof![
        Just((1, 1, Branch::Phi)),
        Just((2, 1, Branch::Phi)),
        Just((1, 2, Branch::Phi)),
        Just((2, 1, Branch::Psi)),
        Just((2, 2, Branch::Phi)),
    ]
}

fn setup(r1: usize, r2: usize, branch: Branch, tau: f64, seed: u64) -> (LatticeState, VortexParams) {
    let g = Grid::new(8, 4.0).unwrap();
    let p = VortexParams::new(r1, r2, 4.0, tau).unwrap();
    (LatticeState::random(g, r1, r2, branch, seed, RandomSpec::default()), p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_identity_holds_per_configuration((r1, r2, branch) in shape(), tau in -2.0f64..2.0, seed in any::<u64>()) {
        let (s, p) = setup(r1, r2, branch, tau, seed);
        prop_assert!(decomposition_check(&s, &p) <= 1e-10);
    }

    #[test]
    fn energies_are_invariant_under_global_gauge((r1, r2, branch) in shape(), seed in any::<u64>()) {
        let (s, p) = setup(r1, r2, branch, 0.8, seed);
        let u = random_unitary(r1, seed ^ 1);
        let v = random_unitary(r2, seed ^ 2);
        let t = s.gauge_transform(&u, &v);
        for f in [ymh_energy, residual_energy] {
            let (a, b) = (f(&s, &p), f(&t, &p));
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{} vs {}", a, b);
        }
    }

    #[test]
    fn descent_step_never_increases_the_residual((r1, r2, branch) in shape(), seed in any::<u64>(), step in 1e-3f64..1.0) {
        let (s, p) = setup(r1, r2, branch, 0.8, seed);
        let frozen = default_frozen(branch);
        let st = flow_step(&s, &p, step, &frozen, &LineSearch::default(), 3.0).unwrap();
        prop_assert!(st.energy_after <= st.energy_before);
        prop_assert!(st.energy_after < st.energy_before || st.gradient_norm_sqr <= 1e-20);
        prop_assert!(st.state.invariant_defect() < 1e-12);
        prop_assert!(st.state.band_defect() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn gradient_matches_central_differences((r1, r2, branch) in shape(), seed in any::<u64>()) {
        let g = Grid::new(8, 4.0).unwrap();
        let p = VortexParams::new(r1, r2, 4.0, 0.7).unwrap();
        let spec = RandomSpec { holomorphic_higgs: false, ..RandomSpec::default() };
        let s = LatticeState::random(g, r1, r2, branch, seed, spec);
        for (block, err) in fd_gradient_check(&s, &p, 1e-5) {
            prop_assert!(err <= 1e-6, "{:?}: {}", block, err);
        }
    }
}
