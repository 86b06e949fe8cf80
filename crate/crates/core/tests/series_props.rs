use higgspair::series::{Monomial, Series, Truncation, Var, Q};
use num_bigint::BigInt;
use proptest::prelude::*;

const WINDOW: Truncation = Truncation { t_min: -6, t_max: 12, x_max: 4, y_max: 4 };

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn series() -> impl Strategy<Value = Series> {
    prop::collection::vec(((-3i64..6, 0i64..3, 0i64..3), -5i64..6), 0..8).prop_map(|terms| {
        Series::from_terms(terms.into_iter().map(|((t, x, y), c)| (Monomial::new(t, x, y), q(c))), WINDOW)
    })
}

fn t_divisor() -> impl Strategy<Value = Series> {
    prop::collection::vec(-3i64..4, 1..4)
        .prop_filter("nonzero leading coefficient", |c| *c.last().unwrap() != 0)
        .prop_map(|c| Series::t_poly(&c, 0))
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_is_commutative_associative_distributive(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Series::one(), a.clone());
    }

    #[test]
    fn geometric_series_inverts_one_minus(c in -3i64..4, dt in -2i64..3, dx in 0i64..3, dy in 0i64..3) {
        prop_assume!(dx > 0 || dy > 0);
        let m = Monomial::new(dt, dx, dy);
        let trunc = Truncation::new(-40, 40, 4, 4);
        let g = Series::expand_geometric(&q(c), m, trunc).unwrap();
        let one_minus = &Series::one() - &Series::monomial(q(c), m, trunc);
        prop_assert_eq!(&one_minus * &g, Series::one().truncate(trunc));
    }

    #[test]
    fn exact_division_undoes_multiplication(a in series(), d in t_divisor()) {
        let wide = a.with_window(Truncation::new(-20, 40, 4, 4));
        let prod = &wide * &d;
        prop_assert_eq!(prod.exact_divide(&d).unwrap(), wide);
    }

    #[test]
    fn extraction_is_linear_and_commutes_with_t_shift(a in series(), b in series(), ex in 0i64..3, ey in 0i64..3, s in -2i64..3) {
        let at = [(Var::X, ex), (Var::Y, ey)];
        let lhs = (&a + &b).coeff_extract(&at).unwrap();
        let rhs = &a.coeff_extract(&at).unwrap() + &b.coeff_extract(&at).unwrap();
        prop_assert_eq!(lhs, rhs);
        let wide = Truncation::new(-20, 40, 4, 4);
        let shifted = a.with_window(wide).shift(Monomial::t(s)).coeff_extract(&at).unwrap();
        let later = a.with_window(wide).coeff_extract(&at).unwrap().shift(Monomial::t(s));
        prop_assert_eq!(shifted, later);
    }

    #[test]
    fn binomial_power_matches_repeated_product(c in -2i64..3, n in 0u32..6) {
        let m = Monomial::new(1, 1, 0);
        let trunc = Truncation::new(-10, 10, 8, 0);
        let base = &Series::one() + &Series::monomial(q(c), m, trunc);
        let mut prod = Series::one().truncate(trunc);
        for _ in 0..n {
            prod = &prod * &base;
        }
        prop_assert_eq!(Series::pow_binomial(&q(c), m, n, trunc), prod);
    }
}
