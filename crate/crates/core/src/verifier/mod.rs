//! Numerical checks of the inequalities on concrete radial profiles.

mod campaign;
mod family;

pub use campaign::{
    reports_to_csv, reports_to_jsonl, run_campaign, CampaignConfig, CampaignOutcome, CheckSpec,
    ProfileSource, DEFAULT_CAMPAIGN,
};
pub use family::{radical_inverse, FamilyKind, ProfileFamily};

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::calculus::{radial_ln_moment, Component, RadialProfile, SupportHint, WeightedMeasure};
use crate::constants::{monomial_c, talenti_constant, trace_bounds_with, TraceFormulaVariant};
use crate::error::{Error, Result};
use crate::gls::GlsOptions;
use crate::monomial::{trace_exponent, ExponentTuple};
use crate::quadrature::QuadDiagnostics;
use crate::report::{InequalityId, Tolerances, VerificationReport, DEFAULT_SLACK};

/// Largest allowed gap between the two fitted dilation slopes.
pub const SLOPE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub gls: GlsOptions,
    pub slack: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            gls: GlsOptions::default(),
            slack: DEFAULT_SLACK,
        }
    }
}

impl VerifyOptions {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            quad_rel_tol: self.gls.quad.rel_tol,
            slack: self.slack,
        }
    }
}

/// ln(1 + e^x) without overflow.
fn ln1p_exp(x: f64) -> f64 {
    if x > 35.0 {
        x + (-x).exp()
    } else {
        x.exp().ln_1p()
    }
}

/// (1 + ρ^{p'})^{(p−D)/p}, the Talenti-type candidate extremal.
pub fn extremal_profile(d: f64, p: f64) -> Result<RadialProfile> {
    if !(p > 1.0 && p < d && d.is_finite()) {
        return Err(Error::input(format!(
            "extremal profile needs 1 < p < D, got D = {d}, p = {p}"
        )));
    }
    let pc = p / (p - 1.0);
    let e = (p - d) / p;
    let value = move |r: f64| {
        if r == 0.0 {
            return 1.0;
        }
        (e * ln1p_exp(pc * r.ln())).exp()
    };
    let derivative = move |r: f64| {
        if r == 0.0 {
            return 0.0;
        }
        let ln_r = r.ln();
        // e·p'·ρ^{p'−1}·(1 + ρ^{p'})^{e−1}
        e * pc * ((pc - 1.0) * ln_r + (e - 1.0) * ln1p_exp(pc * ln_r)).exp()
    };
    RadialProfile::new(
        format!("extremal({d},{p})"),
        Arc::new(value),
        Arc::new(derivative),
        SupportHint::Decaying {
            tail_exponent: pc * (d - p) / p,
            from_radius: 1.0,
        },
    )
}

fn norm_or_infinite(
    measure: &WeightedMeasure,
    u: &RadialProfile,
    component: Component,
    p: f64,
) -> Result<(f64, QuadDiagnostics)> {
    match measure.norm(u, component, p) {
        Ok(n) => Ok((n.value, n.diagnostics)),
        Err(Error::Divergent(_)) => Ok((f64::INFINITY, QuadDiagnostics::default())),
        Err(e) => Err(e),
    }
}

/// |u|_{q,μ_A} ≤ C(p)|∇u|_{p,μ_A} with q = Dp/(D−p).
pub fn check_sobolev_with(
    u: &RadialProfile,
    a: &ExponentTuple,
    p: f64,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let d = a.effective_dimension();
    if !(p > 1.0 && p < d) {
        return Err(Error::domain(format!(
            "p = {p} must lie in (1, D(A) = {d})"
        )));
    }
    let q = d * p / (d - p);
    let c = monomial_c(a, p)?;
    let inputs = json!({ "profile": u.label(), "A": a.entries(), "p": p });
    let measure = WeightedMeasure::with_options(a.clone(), opts.gls.quad);
    let (rhs, rd) = norm_or_infinite(&measure, u, Component::Gradient, p)?;
    let (lhs, ld) = norm_or_infinite(&measure, u, Component::Value, q)?;
    let mut report = if rhs == 0.0 || !rhs.is_finite() || !lhs.is_finite() {
        VerificationReport::inconclusive(
            InequalityId::Sobolev,
            opts.tolerances(),
            inputs,
            format!("degenerate norms: |u|_q = {lhs}, |∇u|_p = {rhs}"),
        )
    } else {
        VerificationReport::new(
            InequalityId::Sobolev,
            lhs,
            rhs,
            c,
            opts.tolerances(),
            ld.merge(rd),
            inputs,
        )
    };
    report = report.with_detail("q", q).with_detail("C", c);
    if a.is_zero() && a.dim() >= 3 {
        if let Ok(t) = talenti_constant(a.dim(), p) {
            report = report.with_detail("talenti", t);
        }
    }
    if let SupportHint::Decaying { .. } = u.support() {
        report = report.with_note("profile is not compactly supported");
    }
    Ok(report)
}

pub fn check_sobolev(u: &RadialProfile, a: &ExponentTuple, p: f64) -> Result<VerificationReport> {
    check_sobolev_with(u, a, p, &VerifyOptions::default())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ScalingPoint {
    pub lambda: f64,
    pub ln_lhs: Option<f64>,
    pub ln_rhs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ScalingFit {
    /// d ln|u_λ|_{q,μ_B} / d ln λ
    pub slope_lhs: f64,
    /// d ln|∇u_λ|_{p,μ_A} / d ln λ
    pub slope_rhs: f64,
    /// −D(B)/q
    pub expected_lhs: f64,
    /// 1 − D(A)/p
    pub expected_rhs: f64,
    pub balanced: bool,
    pub points: Vec<ScalingPoint>,
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Least-squares slopes of ln L_λ and ln R_λ against ln λ, where
/// L_λ = |u(λ·)|_{q,μ_B} and R_λ = |∇u(λ·)|_{p,μ_A}. The dilation acts on
/// the radial integrals directly, so each point is exact up to quadrature.
pub fn fit_scaling_exponents_with(
    u: &RadialProfile,
    a: &ExponentTuple,
    b: &ExponentTuple,
    p: f64,
    q: f64,
    lambdas: &[f64],
    opts: &VerifyOptions,
) -> Result<ScalingFit> {
    let distinct = {
        let mut l: Vec<f64> = lambdas.to_vec();
        l.sort_by(f64::total_cmp);
        l.dedup();
        l.len()
    };
    if distinct < 2 {
        return Err(Error::input(
            "a scaling fit needs at least two distinct dilation factors",
        ));
    }
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::domain(format!(
            "exponents p = {p}, q = {q} must be at least 1"
        )));
    }
    if a.dim() != b.dim() {
        return Err(Error::input("A and B must have the same dimension"));
    }
    let ma = WeightedMeasure::with_options(a.clone(), opts.gls.quad);
    let mb = WeightedMeasure::with_options(b.clone(), opts.gls.quad);
    let points: Vec<ScalingPoint> = crate::par::map(opts.gls.exec, lambdas, |&lambda| {
        let run = || -> Result<(f64, f64)> {
            let v = crate::calculus::dilate(u, lambda)?;
            let l = mb.lp_norm(&v, q)?.value;
            let r = ma.gradient_norm(&v, p)?.value;
            Ok((l.ln(), r.ln()))
        };
        match run() {
            Ok((l, r)) => ScalingPoint {
                lambda,
                ln_lhs: Some(l),
                ln_rhs: Some(r),
                error: None,
            },
            Err(e) => ScalingPoint {
                lambda,
                ln_lhs: None,
                ln_rhs: None,
                error: Some(e.to_string()),
            },
        }
    });
    let ok: Vec<&ScalingPoint> = points.iter().filter(|pt| pt.error.is_none()).collect();
    let usable = {
        let mut l: Vec<f64> = ok.iter().map(|pt| pt.lambda).collect();
        l.dedup();
        l.len()
    };
    if usable < 2 {
        return Err(Error::Numerical {
            message: format!(
                "only {} of {} dilation points could be evaluated",
                ok.len(),
                points.len()
            ),
            diagnostics: QuadDiagnostics::default(),
        });
    }
    let xs: Vec<f64> = ok.iter().map(|pt| pt.lambda.ln()).collect();
    let ls: Vec<f64> = ok.iter().map(|pt| pt.ln_lhs.unwrap()).collect();
    let rs: Vec<f64> = ok.iter().map(|pt| pt.ln_rhs.unwrap()).collect();
    let slope_lhs = least_squares_slope(&xs, &ls);
    let slope_rhs = least_squares_slope(&xs, &rs);
    Ok(ScalingFit {
        slope_lhs,
        slope_rhs,
        expected_lhs: -b.effective_dimension() / q,
        expected_rhs: 1.0 - a.effective_dimension() / p,
        balanced: (slope_lhs - slope_rhs).abs() <= SLOPE_TOLERANCE,
        points,
    })
}

pub fn fit_scaling_exponents(
    u: &RadialProfile,
    a: &ExponentTuple,
    b: &ExponentTuple,
    p: f64,
    q: f64,
    lambdas: &[f64],
) -> Result<ScalingFit> {
    fit_scaling_exponents_with(u, a, b, p, q, lambdas, &VerifyOptions::default())
}

/// Dilation balance as a report: lhs is the slope gap and constant·rhs the
/// allowed gap, so ratio ≤ 1 exactly when the fit is balanced.
pub fn check_scaling(
    u: &RadialProfile,
    a: &ExponentTuple,
    b: &ExponentTuple,
    p: f64,
    q: f64,
    lambdas: &[f64],
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let fit = fit_scaling_exponents_with(u, a, b, p, q, lambdas, opts)?;
    let inputs = json!({
        "profile": u.label(),
        "A": a.entries(),
        "B": b.entries(),
        "p": p,
        "q": q,
        "lambdas": lambdas,
    });
    let gap = (fit.slope_lhs - fit.slope_rhs).abs();
    Ok(VerificationReport::new(
        InequalityId::Scaling,
        gap,
        1.0,
        SLOPE_TOLERANCE,
        Tolerances {
            quad_rel_tol: opts.gls.quad.rel_tol,
            slack: 0.0,
        },
        QuadDiagnostics::default(),
        inputs,
    )
    .with_detail("fit", fit))
}

/// The one-dimensional trace reduction
/// [∫ s^{D_r−1}|g|^q ds]^{1/q} ≤ W·[∫ s^{D−1}|g'|^p ds]^{1/p}
/// against W ≤ M·Q, with q the trace exponent and g vanishing at infinity.
pub fn check_trace_radial_with(
    g: &RadialProfile,
    a: &ExponentTuple,
    b: &ExponentTuple,
    p: f64,
    variant: TraceFormulaVariant,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let q = trace_exponent(a, b, p)?;
    let bounds = trace_bounds_with(a, b, p, q, variant)?;
    let inputs = json!({
        "profile": g.label(),
        "A": a.entries(),
        "B": b.entries(),
        "p": p,
        "variant": variant,
    });
    let moment = |component, dim, e| match radial_ln_moment(g, component, dim, e, &opts.gls.quad) {
        Err(Error::Divergent(msg)) => Err(Error::domain(format!("trace integral diverges: {msg}"))),
        other => other,
    };
    let (ln_l, ld) = moment(Component::Value, b.effective_dimension(), q)?;
    let (ln_r, rd) = moment(Component::Gradient, a.effective_dimension(), p)?;
    let lhs = (ln_l / q).exp();
    let rhs = (ln_r / p).exp();
    let constant = bounds.w_upper;
    Ok(VerificationReport::new(
        InequalityId::Trace,
        lhs,
        rhs,
        constant,
        opts.tolerances(),
        ld.merge(rd),
        inputs,
    )
    .with_detail("q", q)
    .with_detail("bounds", bounds)
    .with_detail("w-sample", lhs / rhs))
}

pub fn check_trace_radial(
    g: &RadialProfile,
    a: &ExponentTuple,
    b: &ExponentTuple,
    p: f64,
) -> Result<VerificationReport> {
    check_trace_radial_with(
        g,
        a,
        b,
        p,
        TraceFormulaVariant::default(),
        &VerifyOptions::default(),
    )
}

#[cfg(test)]
mod tests;
