use super::*;
use crate::calculus::{bump, dilate, gaussian, tent};
use crate::monomial::sobolev_exponent;
use crate::report::Status;

fn t(v: &[f64]) -> ExponentTuple {
    ExponentTuple::new(v.to_vec()).unwrap()
}

#[test]
fn extremal_profile_shape() {
    let (d, p) = (3.5, 2.0);
    let u = extremal_profile(d, p).unwrap();
    assert_eq!(u.value(0.0), 1.0);
    let tail = (p / (p - 1.0)) * (d - p) / p;
    for r in [1e3, 1e4] {
        let ratio = u.value(r) / r.powf(-tail);
        assert!((ratio - 1.0).abs() < 1e-2, "{r}: {ratio}");
    }
    // derivative against a central difference
    let h = 1e-6;
    let fd = (u.value(1.3 + h) - u.value(1.3 - h)) / (2.0 * h);
    assert!((fd - u.derivative(1.3)).abs() < 1e-8);
    assert!(extremal_profile(2.0, 2.5).is_err());
}

#[test]
fn sobolev_ratio_is_dilation_invariant() {
    let a = t(&[1.0, 2.0]);
    let u = bump(1.0).unwrap();
    let r1 = check_sobolev(&u, &a, 2.5).unwrap();
    let r2 = check_sobolev(&dilate(&u, 3.7).unwrap(), &a, 2.5).unwrap();
    assert!(r1.pass);
    assert!(((r1.ratio - r2.ratio) / r1.ratio).abs() < 1e-8);
}

#[test]
fn sobolev_rejects_exponents_outside_range() {
    let a = t(&[1.0]);
    assert!(check_sobolev(&bump(1.0).unwrap(), &a, 2.0).is_err());
    assert!(check_sobolev(&bump(1.0).unwrap(), &a, 1.0).is_err());
}

#[test]
fn talenti_case_is_logged() {
    let a = t(&[0.0, 0.0, 0.0]);
    let r = check_sobolev(&gaussian(1.0).unwrap(), &a, 2.0).unwrap();
    assert!(r.details.contains_key("talenti"));
    assert!(r.notes.iter().any(|n| n.contains("compactly")));
}

#[test]
fn scaling_fit_matches_exponents() {
    let a = t(&[1.0, 2.0]);
    let b = t(&[0.5, 1.0]);
    let p = 2.0;
    let q = sobolev_exponent(&a, &b, p).unwrap();
    let lambdas = [0.5, 1.0, 2.0, 4.0];
    let fit = fit_scaling_exponents(&tent(1.0).unwrap(), &a, &b, p, q, &lambdas).unwrap();
    assert!(fit.balanced);
    assert!((fit.slope_lhs - fit.expected_lhs).abs() < 1e-8);
    assert!((fit.slope_rhs - fit.expected_rhs).abs() < 1e-8);

    // a wrong q leaves a gap of D(B)(1/q − 1/q̃)
    let wrong = 1.1 * q;
    let off = fit_scaling_exponents(&tent(1.0).unwrap(), &a, &b, p, wrong, &lambdas).unwrap();
    assert!(!off.balanced);
    let gap = off.slope_lhs - off.slope_rhs;
    let expected = b.effective_dimension() * (1.0 / q - 1.0 / wrong);
    assert!((gap - expected).abs() < 1e-8, "{gap} vs {expected}");
}

#[test]
fn scaling_needs_two_dilations() {
    let a = t(&[1.0, 2.0]);
    let err =
        fit_scaling_exponents(&bump(1.0).unwrap(), &a, &a, 2.0, 4.0, &[2.0, 2.0]).unwrap_err();
    assert!(matches!(err, Error::Input(_)));
}

#[test]
fn scaling_report_passes_when_balanced() {
    let a = t(&[1.0, 2.0]);
    let q = sobolev_exponent(&a, &a, 2.0).unwrap();
    let r = check_scaling(
        &bump(1.0).unwrap(),
        &a,
        &a,
        2.0,
        q,
        &[0.5, 2.0],
        &VerifyOptions::default(),
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn trace_ratio_ignores_amplitude() {
    let a = t(&[1.0, 0.0, 0.5]);
    let b = t(&[1.0, 0.0]);
    let g = bump(1.5).unwrap();
    let r1 = check_trace_radial(&g, &a, &b, 2.0).unwrap();
    let r2 = check_trace_radial(&g.scaled(4.2), &a, &b, 2.0).unwrap();
    assert!(((r1.ratio - r2.ratio) / r1.ratio).abs() < 1e-10);
    assert!(r1.details.contains_key("bounds"));
}

#[test]
fn corrected_trace_bracket_holds() {
    let a = t(&[1.0, 0.0, 0.5]);
    let b = t(&[1.0, 0.0]);
    for g in [
        bump(1.0).unwrap(),
        gaussian(1.0).unwrap(),
        tent(2.0).unwrap(),
    ] {
        for p in [1.5, 2.0, 2.75] {
            let r = check_trace_radial_with(
                &g,
                &a,
                &b,
                p,
                TraceFormulaVariant::Corrected,
                &VerifyOptions::default(),
            )
            .unwrap();
            assert!(r.pass, "{} p={p}: {}", g.label(), r.ratio);
        }
    }
}

#[test]
fn invalid_trace_exponent_is_rejected() {
    let a = t(&[0.0, 0.0, 1.0]);
    let b = t(&[0.0]);
    assert!(check_trace_radial(&bump(1.0).unwrap(), &a, &b, 1.5).is_err());
}

#[test]
fn empty_campaign_has_no_reports() {
    let out = run_campaign(&CampaignConfig::default()).unwrap();
    assert!(out.reports.is_empty());
    assert!(out.all_passed());
}

#[test]
fn campaign_output_is_reproducible() {
    let cfg = CampaignConfig::from_toml(
        r#"
        seed = 11
        [[checks]]
        kind = "sobolev"
        A = [1.0, 2.0]
        p = [2.0]
        family = { kind = "bump", bounds = [[0.5, 3.0]] }
        count = 3
        "#,
    )
    .unwrap();
    let a = reports_to_jsonl(&run_campaign(&cfg).unwrap().reports);
    let b = reports_to_jsonl(&run_campaign(&cfg).unwrap().reports);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 3);
}

#[test]
fn default_campaign_covers_every_check() {
    let out = run_campaign(&CampaignConfig::default_campaign()).unwrap();
    for id in InequalityId::ALL {
        assert!(
            out.reports.iter().any(|r| r.inequality_id == id),
            "{id:?} missing"
        );
    }
    assert_eq!(
        out.passed + out.failed + out.inconclusive,
        out.reports.len()
    );
    let csv = reports_to_csv(&out.reports);
    assert_eq!(csv.lines().count(), out.reports.len() + 1);
}

#[test]
fn unknown_keys_are_config_errors() {
    let bad = "seed = 1\nbogus = 2\n";
    assert!(matches!(
        CampaignConfig::from_toml(bad),
        Err(Error::Config(_))
    ));
    let bad_check = "[[checks]]\nkind = \"sobolev\"\nA = [1.0]\np = [1.5]\nwhatever = 1\n";
    assert!(matches!(
        CampaignConfig::from_toml(bad_check),
        Err(Error::Config(_))
    ));
}

#[test]
fn invalid_campaign_fails_before_running() {
    let cfg = CampaignConfig::from_toml(
        "[[checks]]\nkind = \"sobolev\"\nA = [1.0]\np = [1.5]\nprofiles = [\"bump:1\", \"nonsense:3\"]\n",
    )
    .unwrap();
    assert!(run_campaign(&cfg).is_err());
}

#[test]
fn degenerate_profile_is_inconclusive() {
    let a = t(&[1.0, 2.0]);
    let r = check_sobolev(&bump(1.0).unwrap().scaled(0.0), &a, 2.0).unwrap();
    assert_eq!(r.status, Status::Inconclusive);
}
