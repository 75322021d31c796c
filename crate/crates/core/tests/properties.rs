use monosob::calculus::{bump, WeightedMeasure};
use monosob::{
    effective_dimension, monomial_c, monomial_weight, sobolev_exponent, trace_bounds, ExponentTuple,
};
use proptest::prelude::*;

fn tuple_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..4.0f64, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimension_ignores_order(mut v in tuple_strategy()) {
        let d = effective_dimension(&ExponentTuple::new(v.clone()).unwrap());
        v.reverse();
        let r = effective_dimension(&ExponentTuple::new(v.clone()).unwrap());
        prop_assert!((d - r).abs() <= 1e-12 * d);
        prop_assert!((d - v.len() as f64 - v.iter().sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn weight_is_homogeneous(v in tuple_strategy(), lambda in 0.1..10.0f64, seed in 0.1..3.0f64) {
        let a = ExponentTuple::new(v.clone()).unwrap();
        let x: Vec<f64> = (0..v.len()).map(|i| seed + i as f64 * 0.37 - 0.5).collect();
        let scaled: Vec<f64> = x.iter().map(|xi| lambda * xi).collect();
        let w = monomial_weight(&a, &x).unwrap();
        let ws = monomial_weight(&a, &scaled).unwrap();
        let expected = lambda.powf(a.sum()) * w;
        prop_assert!((ws - expected).abs() <= 1e-10 * expected.abs().max(1e-300));
    }

    #[test]
    fn sobolev_exponent_balances_dimensions(v in tuple_strategy(), t in 0.05..0.95f64) {
        let a = ExponentTuple::new(v).unwrap();
        let d = a.effective_dimension();
        prop_assume!(d > 1.2);
        let p = 1.0 + t * (d - 1.0);
        let q = sobolev_exponent(&a, &a, p).unwrap();
        prop_assert!((1.0 / q - (1.0 / p - 1.0 / d)).abs() < 1e-12);
        prop_assert!(monomial_c(&a, p).unwrap() > 0.0);
    }

    #[test]
    fn trace_upper_factor_at_least_one(p in 1.01..2.9f64, q in 1.01..1e6f64) {
        let a = ExponentTuple::new(vec![0.0, 0.0, 0.0]).unwrap();
        let b = ExponentTuple::new(vec![0.0, 0.0]).unwrap();
        let bounds = trace_bounds(&a, &b, p, q).unwrap();
        prop_assert!(bounds.q_factor >= 1.0);
        prop_assert!(bounds.w_lower <= bounds.w_upper);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn norm_is_absolutely_homogeneous(c in -5.0..5.0f64, p in 1.0..8.0f64) {
        prop_assume!(c.abs() > 1e-3);
        let a = ExponentTuple::new(vec![1.0, 0.5]).unwrap();
        let measure = WeightedMeasure::new(a);
        let u = bump(1.0).unwrap();
        let n = measure.lp_norm(&u, p).unwrap().value;
        let nc = measure.lp_norm(&u.scaled(c), p).unwrap().value;
        prop_assert!((nc - c.abs() * n).abs() <= 1e-10 * c.abs() * n);
    }
}
