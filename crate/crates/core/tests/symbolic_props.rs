use higgspair::betti::{pairs_poincare_n0, stratum_poincare, total_poincare, ModuliParams};
use higgspair::stability::{check_higgs_stability, is_tau_stable_split, SPlacement, SplitHiggsPairModel};
use higgspair::strata::{d_range, descriptors, divisor_bundle_map, DivisorPair};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Valid `(g, k, τ̄)` with `τ̄ = k/2 + num/(2·den)` strictly inside `(k/2, (k+1)/2)`.
fn params() -> impl Strategy<Value = ModuliParams> {
    (2i64..=4, 0i64..4, 1i64..40, 2i64..41).prop_filter_map("τ̄ inside the chamber", |(g, j, num, den)| {
        (num < den).then(|| {
            let k = 4 * g - 3 + 2 * j;
            ModuliParams::with_ratio(g, k, k * den + num, 2 * den)
        })
    })
}

/// A divisor of degree `n` on at most five points.
fn divisor(n: i64) -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::vec(0u32..5, n as usize).prop_map(|pts| pts.into_iter().map(|p| (p, 1)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stratum_indices_are_even_and_at_least_2g(p in params()) {
        for desc in descriptors(&p).unwrap() {
            prop_assert_eq!(desc.index % 2, 0);
            prop_assert!(desc.index >= 2 * p.genus);
            prop_assert!(desc.n1 >= 0 && desc.n2 >= 0);
        }
    }

    #[test]
    fn d_range_depends_only_on_the_chamber(p in params(), num in 1i64..40, den in 2i64..41) {
        prop_assume!(num < den);
        let k = p.degree;
        let other = ModuliParams::with_ratio(p.genus, k, k * den + num, 2 * den);
        prop_assert_eq!(d_range(&p).unwrap(), d_range(&other).unwrap());
    }

    #[test]
    fn divisor_map_has_degree_k(
        (p, pair) in params().prop_flat_map(|p| {
            let descs = descriptors(&p).unwrap();
            (Just(p), 0..descs.len(), Just(descs))
        }).prop_flat_map(|(p, i, descs)| {
            let desc = descs[i];
            (Just(p), divisor(desc.n1), divisor(desc.n2))
        }).prop_map(|(p, d, dp)| (p, DivisorPair::from_points(&d, &dp).unwrap()))
    ) {
        prop_assert_eq!(divisor_bundle_map(&pair, &p).unwrap(), p.degree);
    }

    #[test]
    fn poincare_polynomials_are_palindromic_and_nonnegative(p in params()) {
        let n0 = pairs_poincare_n0(&p).unwrap();
        prop_assert!(n0.is_palindromic());
        for d in d_range(&p).unwrap() {
            let s = stratum_poincare(&p, d).unwrap();
            prop_assert!(s.coeffs().iter().all(|c| *c >= BigInt::from(0)));
        }
        let total = total_poincare(&p).unwrap();
        prop_assert_eq!(total.coeff(0), BigInt::from(1));
    }

    #[test]
    fn tau_stable_split_models_are_higgs_stable(
        g in 2i64..=3, j in 0i64..4, d_l in -10i64..=10,
        flags in 0usize..3, place in 0usize..3, num in 1i64..9,
    ) {
        let k = 4 * g - 3 + 2 * j;
        let (psi, theta_zero) = [(true, false), (false, false), (false, true)][flags];
        let Ok(m) = SplitHiggsPairModel::new(g, k, d_l, psi, theta_zero, SPlacement::ALL[place]) else {
            return Ok(());
        };
        let tau = BigRational::new(BigInt::from(k * 10 + num), BigInt::from(20));
        if is_tau_stable_split(&m, &tau).stable {
            prop_assert!(check_higgs_stability(&m));
        }
    }

    #[test]
    fn stability_without_section_persists_as_tau_grows(
        g in 2i64..=3, j in 0i64..4, d_l in -10i64..=10, flags in 0usize..3, place in 0usize..3,
        a in 1i64..9, b in 1i64..9,
    ) {
        // With s = 0 there are no quotient conditions, and the subobject ones
        // only weaken as τ̄ grows.
        let k = 4 * g - 3 + 2 * j;
        let (psi, theta_zero) = [(true, false), (false, false), (false, true)][flags];
        let Ok(m) = SplitHiggsPairModel::new(g, k, d_l, psi, theta_zero, SPlacement::ALL[place]) else {
            return Ok(());
        };
        prop_assume!(m.s_placement() == SPlacement::Zero);
        let (lo, hi) = (a.min(b), a.max(b));
        let t = |n: i64| BigRational::new(BigInt::from(k * 10 + n), BigInt::from(20));
        if is_tau_stable_split(&m, &t(lo)).stable {
            prop_assert!(is_tau_stable_split(&m, &t(hi)).stable);
        }
    }
}
