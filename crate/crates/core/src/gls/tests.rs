use super::*;
use crate::calculus::{bump, dilate, gaussian, plateau, power_tail, tent};
use crate::constants::{monomial_c, monomial_c1};
use crate::monomial::{p_from_q, q_from_p};

fn t(v: &[f64]) -> ExponentTuple {
    ExponentTuple::new(v.to_vec()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn stub(
    f: impl Fn(f64) -> f64 + Sync + Send,
) -> impl Fn(f64) -> Result<(f64, QuadDiagnostics)> + Sync + Send {
    move |p| Ok((f(p), QuadDiagnostics::default()))
}

/// Dense brute force over the closed inset, the oracle for the optimizer.
fn brute_force(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let eps = support_inset(a, b);
    let (lo, hi) = ((a + eps).ln(), (b - eps).ln());
    (0..n)
        .map(|i| f((lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn constant_objective() {
    let s = maximize_over_support(1.0, 2.0, stub(|_| 0.731), &GlsOptions::default()).unwrap();
    assert_eq!(s.value, 0.731);
    assert!(!s.infinite);
}

#[test]
fn increasing_objective_sits_on_the_upper_edge() {
    let f = |p: f64| (p - 1.0).sqrt() + p.ln();
    let s = maximize_over_support(1.0, 3.0, stub(f), &GlsOptions::default()).unwrap();
    assert!(s.at_boundary);
    let oracle = brute_force(1.0, 3.0, 100_000, f);
    assert!(rel(s.value, oracle) < 1e-12);
    assert!(rel(s.value, f(3.0)) < 1e-8);
}

#[test]
fn interior_maximum_is_refined() {
    let f = |p: f64| (-(p - 2.345_678).powi(2)).exp();
    let s = maximize_over_support(1.5, 4.0, stub(f), &GlsOptions::default()).unwrap();
    assert!(!s.at_boundary);
    assert!((s.argmax - 2.345_678).abs() < 1e-6);
    assert!(rel(s.value, 1.0) < 1e-12);
}

#[test]
fn endpoint_blow_up_is_infinite() {
    let s = maximize_over_support(
        1.0,
        3.0,
        stub(|p| (3.0 - p).powf(-0.5)),
        &GlsOptions::default(),
    )
    .unwrap();
    assert!(s.infinite && s.value.is_infinite());
    let log =
        maximize_over_support(2.0, 5.0, stub(|p| -(p - 2.0).ln()), &GlsOptions::default()).unwrap();
    assert!(log.infinite);
    let unbounded =
        maximize_over_support(2.0, f64::INFINITY, stub(|p| p), &GlsOptions::default()).unwrap();
    assert!(unbounded.infinite);
    let bounded = maximize_over_support(
        2.0,
        f64::INFINITY,
        stub(|p| 1.0 - 1.0 / p),
        &GlsOptions::default(),
    )
    .unwrap();
    assert!(!bounded.infinite && bounded.at_boundary);
}

#[test]
fn divergent_norm_is_an_infinite_outcome() {
    // |f|_p for (1+ρ²)^{−1} in D = 3 is finite only for p > 3/2
    let u = power_tail(2.0).unwrap();
    let psi = PsiFunction::constant(1.0, 3.0).unwrap();
    let s = gls_norm(&u, &psi, &t(&[0.0, 0.0, 0.0])).unwrap();
    assert!(s.infinite);
}

#[test]
fn sequential_and_parallel_agree() {
    let u = bump(1.0).unwrap();
    let psi = PsiFunction::power_endpoint(1.2, 4.5, 0.5, 0.5).unwrap();
    let a = t(&[1.0, 2.0]);
    let par = gls_norm_with(&u, Component::Value, &psi, &a, &GlsOptions::default()).unwrap();
    let seq = gls_norm_with(
        &u,
        Component::Value,
        &psi,
        &a,
        &GlsOptions {
            exec: Execution::Sequential,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(par.value.to_bits(), seq.value.to_bits());
}

#[test]
fn norm_is_homogeneous() {
    let u = gaussian(0.8).unwrap();
    let psi = PsiFunction::power_endpoint(1.0, 6.0, 1.0, 1.0).unwrap();
    let a = t(&[1.0, 0.0]);
    let n = gls_norm(&u, &psi, &a).unwrap().value;
    let n37 = gls_norm(&u.scaled(3.7), &psi, &a).unwrap().value;
    assert!(rel(n37, 3.7 * n) < 1e-12);
}

#[test]
fn norm_matches_dense_grid() {
    let u = bump(1.5).unwrap();
    let psi = PsiFunction::power_endpoint(1.0, 5.0, 0.3, 0.7).unwrap();
    let a = t(&[0.5, 1.0]);
    let measure = WeightedMeasure::new(a.clone());
    let s = gls_norm(&u, &psi, &a).unwrap();
    let oracle = brute_force(1.0, 5.0, 2000, |p| {
        measure.lp_norm(&u, p).unwrap().value / psi.eval(p)
    });
    assert!(s.value >= oracle * (1.0 - 1e-10));
    assert!(rel(s.value, oracle) < 1e-6);
}

#[test]
fn larger_psi_gives_smaller_norm() {
    let a = t(&[1.0, 1.0]);
    let pairs = [
        (
            PsiFunction::constant(1.1, 3.9).unwrap(),
            PsiFunction::power_endpoint(1.1, 3.9, 0.5, 0.5).unwrap(),
        ),
        (
            PsiFunction::constant(1.5, 3.0).unwrap(),
            PsiFunction::tabulated(&[[1.5, 1.0], [2.0, 4.0], [3.0, 9.0]]).unwrap(),
        ),
        (
            PsiFunction::constant(2.0, 8.0).unwrap(),
            PsiFunction::power_endpoint(2.0, 8.0, 0.0, 1.0).unwrap(),
        ),
    ];
    for (u, (small, large)) in [
        bump(1.0).unwrap(),
        tent(2.0).unwrap(),
        gaussian(1.0).unwrap(),
    ]
    .iter()
    .zip(&pairs)
    {
        for i in 1..50 {
            let (lo, hi) = small.support();
            let p = lo + (hi - lo) * i as f64 / 50.0;
            assert!(small.eval(p) <= large.eval(p) + 1e-12);
        }
        let n_small = gls_norm(u, small, &a).unwrap().value;
        let n_large = gls_norm(u, large, &a).unwrap().value;
        assert!(n_small >= n_large, "{}: {n_small} < {n_large}", u.label());
    }
}

#[test]
fn fundamental_function_examples() {
    for psi in [
        PsiFunction::constant(1.5, 4.0).unwrap(),
        PsiFunction::power_endpoint(1.0, 3.0, 1.0, 2.0).unwrap(),
        PsiFunction::tabulated(&[[2.0, 3.0], [3.0, 1.5], [4.0, 2.0]]).unwrap(),
    ] {
        let phi = fundamental_function(&psi, 1.0).unwrap();
        assert!(rel(phi.value, 1.0) < 1e-9, "{psi:?}: {}", phi.value);
    }
    let (a, b) = (1.5, 4.0);
    let psi = PsiFunction::constant(a, b).unwrap();
    for delta in [1e-3, 0.5] {
        let phi = fundamental_function(&psi, delta).unwrap();
        assert!(phi.at_boundary);
        assert!(rel(phi.value, delta.powf(1.0 / b)) < 1e-7);
    }
    let phi = fundamental_function(&psi, 1e3).unwrap();
    assert!(rel(phi.value, 1e3f64.powf(1.0 / a)) < 1e-7);
    assert!(fundamental_function(&psi, 0.0).is_err());
}

#[test]
fn fundamental_function_is_nondecreasing() {
    let psi = PsiFunction::power_endpoint(1.0, 6.0, 0.5, 1.0).unwrap();
    let values: Vec<f64> = (0..30)
        .map(|i| {
            fundamental_function(&psi, 10f64.powf(-4.0 + 8.0 * i as f64 / 29.0))
                .unwrap()
                .value
        })
        .collect();
    assert!(values.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn zeta_limits() {
    let a = t(&[1.0, 2.0]);
    let d = a.effective_dimension();
    let psi = PsiFunction::constant(1.0, d).unwrap();
    let z = zeta_transform(&psi, &a).unwrap();
    let c1 = monomial_c1(&a).unwrap();
    assert!(rel(z.eval(q_from_p(d, 1.0 + 1e-7)), c1) < 1e-4);
    // ζ(q)·(D − p(q))^{1−1/D} settles as q → ∞
    let scaled = |q: f64| z.eval(q) * (d - p_from_q(d, q)).powf(1.0 - 1.0 / d);
    let (s1, s2) = (scaled(1e6), scaled(1e8));
    assert!(rel(s1, s2) < 1e-3);
    assert!(z.eval(1e8) > z.eval(1e6));
}

#[test]
fn sobolev_transfers_pointwise_on_a_grid() {
    // |∇u|_p ≤ ψ(p) for ψ = |∇u|_p itself, hence |u|_q ≤ C(p)ψ(p) = ζ(q)
    let a = t(&[1.0, 1.0]);
    let d = a.effective_dimension();
    let measure = WeightedMeasure::new(a.clone());
    for u in [bump(1.0).unwrap(), plateau(2.0, 0.7).unwrap()] {
        for i in 1..20 {
            let p = 1.0 + (d - 1.0) * i as f64 / 20.0;
            let psi_p = measure.gradient_norm(&u, p).unwrap().value;
            let lhs = measure.lp_norm(&u, q_from_p(d, p)).unwrap().value;
            assert!(lhs <= monomial_c(&a, p).unwrap() * psi_p * (1.0 + 1e-9));
        }
    }
}

#[test]
fn gls_sobolev_passes_on_a_bump() {
    let a = t(&[1.0, 1.0]);
    let d = a.effective_dimension();
    let psi = PsiFunction::constant(1.0 + 1e-3, d - 1e-3).unwrap();
    let u = bump(1.0).unwrap();
    let r = verify_gls_sobolev(&u, &psi, &a).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(r.ratio > 0.0);
    let scaled = verify_gls_sobolev(&u.scaled(-2.5), &psi, &a).unwrap();
    assert!(rel(scaled.ratio, r.ratio) < 1e-12);
    assert!((r.ratio * r.constant * r.rhs - r.lhs).abs() <= 1e-12 * r.lhs);
}

#[test]
fn gls_sobolev_with_infinite_rhs_is_inconclusive() {
    let a = t(&[0.0, 0.0, 0.0]);
    let psi = PsiFunction::constant(1.0, 3.0).unwrap();
    // |∇u|_p of (1+ρ²)^{−1/4} is finite only for p > 2
    let u = power_tail(0.5).unwrap();
    let r = verify_gls_sobolev(&u, &psi, &a).unwrap();
    assert_eq!(r.status, crate::report::Status::Inconclusive);
    assert!(!r.pass);
}

#[test]
fn morrey_bound_is_finite_and_positive() {
    let a = t(&[0.5]);
    let psi = PsiFunction::constant(2.0, 5.0).unwrap();
    let u = bump(1.0).unwrap();
    for delta in [1e-3, 1e-1, 1.0] {
        let b = morrey_bound(&u, &psi, &a, 1.0, delta).unwrap();
        assert!(b.bound.is_finite() && b.bound > 0.0);
    }
    let twice = morrey_bound(&u, &psi, &a, 2.0, 0.1).unwrap().bound;
    let once = morrey_bound(&u, &psi, &a, 1.0, 0.1).unwrap().bound;
    assert!(rel(twice, 2.0 * once) < 1e-12);
    assert!(morrey_bound(&u, &PsiFunction::constant(1.0, 1.2).unwrap(), &a, 1.0, 0.1).is_err());
}

#[test]
fn narrow_support_reduces_to_single_exponent() {
    let a = t(&[1.0, 0.0]);
    let p0 = 4.5;
    let u = bump(1.2).unwrap();
    let delta = 0.3;
    let single = single_exponent_morrey_bound(&u, &a, 1.0, p0, delta).unwrap();
    let mut last = f64::INFINITY;
    for eps in [1e-1, 1e-2, 1e-3] {
        let psi = PsiFunction::constant(p0 - eps, p0 + eps).unwrap();
        let b = morrey_bound(&u, &psi, &a, 1.0, delta).unwrap().bound;
        let gap = rel(b, single);
        assert!(gap < last);
        last = gap;
    }
    assert!(last < 1e-2);
}

#[test]
fn calibration_covers_its_battery() {
    let a = t(&[0.5, 0.0]);
    let psi = PsiFunction::constant(3.0, 6.0).unwrap();
    let cases: Vec<MorreyCase> = [
        bump(1.0).unwrap(),
        tent(1.0).unwrap(),
        dilate(&bump(1.0).unwrap(), 4.0).unwrap(),
    ]
    .into_iter()
    .flat_map(|u| {
        [0.05, 0.5].map(|delta| MorreyCase {
            profile: u.clone(),
            delta,
        })
    })
    .collect();
    let cal = calibrate_c2(&cases, &psi, &a, &GlsOptions::default()).unwrap();
    assert!(cal.c2 > 0.0);
    assert!(cal.c2 <= radial_c2_ceiling(&psi, &a).unwrap());
    for case in &cases {
        let r = check_morrey(
            &case.profile,
            &psi,
            &a,
            cal.c2,
            case.delta,
            &GlsOptions::default(),
            1e-9,
        )
        .unwrap();
        assert!(r.pass, "{}", case.profile.label());
    }
}
