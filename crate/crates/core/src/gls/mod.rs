//! Grand Lebesgue norms sup_p |f|_p / ψ(p), the fundamental function, the
//! Sobolev inequality in G(ψ) form and the Morrey-type continuity bound.

mod psi;

pub use psi::{psi_d_transform, zeta_transform, PsiConfig, PsiFamily, PsiFunction};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::calculus::{
    modulus_of_continuity, Component, RadialProfile, WeightedMeasure, DEFAULT_MODULUS_SAMPLES,
};
use crate::error::{Error, Result};
use crate::monomial::ExponentTuple;
use crate::par::{self, Execution};
use crate::quadrature::{QuadDiagnostics, QuadOptions};
use crate::report::{InequalityId, Tolerances, VerificationReport, DEFAULT_SLACK};

pub const GRID_POINTS: usize = 64;
pub const REFINE_REL_TOL: f64 = 1e-8;

/// Inset of the open support: max(1e-8, 1e-8·(b − a)).
pub fn support_inset(a: f64, b: f64) -> f64 {
    if b.is_infinite() {
        1e-8f64.max(1e-8 / a)
    } else {
        1e-8f64.max(1e-8 * (b - a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlsOptions {
    pub quad: QuadOptions,
    pub exec: Execution,
    pub grid_points: usize,
    pub refine_rel_tol: f64,
}

impl Default for GlsOptions {
    fn default() -> Self {
        GlsOptions {
            quad: QuadOptions::default(),
            exec: Execution::default(),
            grid_points: GRID_POINTS,
            refine_rel_tol: REFINE_REL_TOL,
        }
    }
}

/// Outcome of a supremum over the exponent interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Supremum {
    /// +∞ when `infinite` is set.
    pub value: f64,
    pub argmax: f64,
    /// The maximizer sits on the inset edge: the sup is an endpoint limit.
    pub at_boundary: bool,
    pub infinite: bool,
    pub evaluations: usize,
    pub diagnostics: QuadDiagnostics,
}

impl Supremum {
    fn infinite_at(p: f64, evaluations: usize, diagnostics: QuadDiagnostics) -> Self {
        Supremum {
            value: f64::INFINITY,
            argmax: p,
            at_boundary: false,
            infinite: true,
            evaluations,
            diagnostics,
        }
    }
}

/// Grid coordinate: ln p on bounded supports, t = 1/p when b = ∞.
#[derive(Clone, Copy)]
enum Coord {
    Log,
    Reciprocal,
}

impl Coord {
    fn to_p(self, s: f64) -> f64 {
        match self {
            Coord::Log => s.exp(),
            Coord::Reciprocal => 1.0 / s,
        }
    }
}

/// sup over p ∈ (a, b) of `objective(p)`, which returns a non-negative value
/// (possibly +∞) with the quadrature bookkeeping that produced it. A
/// divergent objective counts as +∞.
pub fn maximize_over_support<F>(a: f64, b: f64, objective: F, opts: &GlsOptions) -> Result<Supremum>
where
    F: Fn(f64) -> Result<(f64, QuadDiagnostics)> + Sync + Send,
{
    if !(a.is_finite() && b > a) {
        return Err(Error::input(format!(
            "exponent interval ({a}, {b}) is empty"
        )));
    }
    if opts.grid_points < 3 {
        return Err(Error::input("supremum grid needs at least three points"));
    }
    let eps = support_inset(a, b);
    let (coord, s_lo, s_hi) = if b.is_infinite() {
        (Coord::Reciprocal, eps, 1.0 / a - eps)
    } else {
        (Coord::Log, (a + eps).ln(), (b - eps).ln())
    };
    if !(s_hi > s_lo) {
        return Err(Error::input(format!(
            "exponent interval ({a}, {b}) is narrower than its inset"
        )));
    }
    let eval = |s: f64| -> Result<(f64, QuadDiagnostics)> {
        let p = coord.to_p(s);
        match objective(p) {
            Ok((v, d)) if v.is_nan() => Err(Error::Numerical {
                message: format!("objective is NaN at p = {p}"),
                diagnostics: d,
            }),
            Ok(r) => Ok(r),
            Err(Error::Divergent(_)) => Ok((f64::INFINITY, QuadDiagnostics::default())),
            Err(e) => Err(e),
        }
    };

    let n = opts.grid_points;
    let span = s_hi - s_lo;
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                s_hi
            } else {
                s_lo + span * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let values = par::map(opts.exec, &grid, |&s| eval(s));
    let mut diag = QuadDiagnostics::default();
    let mut fs = Vec::with_capacity(n);
    for v in values {
        let (f, d) = v?;
        diag = diag.merge(d);
        fs.push(f);
    }
    let mut evaluations = n;
    if let Some(i) = fs.iter().position(|f| f.is_infinite()) {
        return Ok(Supremum::infinite_at(
            coord.to_p(grid[i]),
            evaluations,
            diag,
        ));
    }
    let mut best_i = 0;
    for (i, f) in fs.iter().enumerate() {
        if *f > fs[best_i] {
            best_i = i;
        }
    }
    let mut best = (grid[best_i], fs[best_i]);

    // golden section on the neighbouring grid cells
    let mut lo = grid[best_i.saturating_sub(1)];
    let mut hi = grid[(best_i + 1).min(n - 1)];
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, dc) = eval(c)?;
    let (mut fd, dd) = eval(d)?;
    diag = diag.merge(dc).merge(dd);
    evaluations += 2;
    while hi - lo > opts.refine_rel_tol * span {
        if fc.is_infinite() || fd.is_infinite() {
            let s = if fc.is_infinite() { c } else { d };
            return Ok(Supremum::infinite_at(coord.to_p(s), evaluations, diag));
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            let (f, dg) = eval(c)?;
            fc = f;
            diag = diag.merge(dg);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            let (f, dg) = eval(d)?;
            fd = f;
            diag = diag.merge(dg);
        }
        evaluations += 1;
    }
    for (s, f) in [(c, fc), (d, fd)] {
        if f.is_infinite() {
            return Ok(Supremum::infinite_at(coord.to_p(s), evaluations, diag));
        }
        if f > best.1 {
            best = (s, f);
        }
    }

    let edge_tol = 2.0 * opts.refine_rel_tol * span;
    let edge = if best.0 - s_lo <= edge_tol {
        Some(s_lo)
    } else if s_hi - best.0 <= edge_tol {
        Some(s_hi)
    } else {
        None
    };
    if let Some(edge) = edge {
        // Probe two tighter insets outside the closed one; sustained growth
        // means the open-interval supremum is infinite.
        let p_edge = coord.to_p(edge);
        let toward_a = match coord {
            Coord::Log => edge == s_lo,
            Coord::Reciprocal => edge == s_hi,
        };
        let probe = |shrink: f64| -> f64 {
            let e = eps * shrink;
            match (coord, toward_a) {
                (Coord::Log, true) => (a + e).ln(),
                (Coord::Log, false) => (b - e).ln(),
                (Coord::Reciprocal, true) => 1.0 / a - e,
                (Coord::Reciprocal, false) => e,
            }
        };
        let (f1, d1) = eval(probe(1e-2))?;
        let (f2, d2) = eval(probe(1e-4))?;
        diag = diag.merge(d1).merge(d2);
        evaluations += 2;
        let g1 = (f1 / best.1).ln();
        let g2 = (f2 / f1).ln();
        if f1.is_infinite() || f2.is_infinite() || (g1 > 1e-4 && g2 > 0.5 * g1) {
            return Ok(Supremum::infinite_at(p_edge, evaluations, diag));
        }
    }

    Ok(Supremum {
        value: best.1,
        argmax: coord.to_p(best.0),
        at_boundary: edge.is_some(),
        infinite: false,
        evaluations,
        diagnostics: diag,
    })
}

/// ‖f‖_{G(ψ)} = sup_p |f|_{p,μ_A}/ψ(p) for the value or gradient of `u`.
pub fn gls_norm_with(
    u: &RadialProfile,
    component: Component,
    psi: &PsiFunction,
    a: &ExponentTuple,
    opts: &GlsOptions,
) -> Result<Supremum> {
    let measure = WeightedMeasure::with_options(a.clone(), opts.quad);
    let (lo, hi) = psi.support();
    maximize_over_support(
        lo,
        hi,
        |p| {
            let norm = measure.norm(u, component, p)?;
            Ok((norm.value / psi.eval(p), norm.diagnostics))
        },
        opts,
    )
}

pub fn gls_norm(u: &RadialProfile, psi: &PsiFunction, a: &ExponentTuple) -> Result<Supremum> {
    gls_norm_with(u, Component::Value, psi, a, &GlsOptions::default())
}

/// ‖∇u‖_{G(ψ)}.
pub fn gls_gradient_norm(
    u: &RadialProfile,
    psi: &PsiFunction,
    a: &ExponentTuple,
) -> Result<Supremum> {
    gls_norm_with(u, Component::Gradient, psi, a, &GlsOptions::default())
}

/// φ(δ) = sup_p δ^{1/p}/ψ(p).
pub fn fundamental_function_with(
    psi: &PsiFunction,
    delta: f64,
    opts: &GlsOptions,
) -> Result<Supremum> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!(
            "δ = {delta} must be positive and finite"
        )));
    }
    let ln_delta = delta.ln();
    let (lo, hi) = psi.support();
    maximize_over_support(
        lo,
        hi,
        |p| {
            Ok((
                (ln_delta / p).exp() / psi.eval(p),
                QuadDiagnostics::default(),
            ))
        },
        opts,
    )
}

pub fn fundamental_function(psi: &PsiFunction, delta: f64) -> Result<Supremum> {
    fundamental_function_with(psi, delta, &GlsOptions::default())
}

fn tolerances(opts: &GlsOptions, slack: f64) -> Tolerances {
    Tolerances {
        quad_rel_tol: opts.quad.rel_tol,
        slack,
    }
}

/// ‖u‖_{G(ζ)} ≤ 1·‖∇u‖_{G(ψ)} with ζ the ζ-transform of ψ (A = B).
pub fn verify_gls_sobolev_with(
    u: &RadialProfile,
    psi: &PsiFunction,
    a: &ExponentTuple,
    opts: &GlsOptions,
    slack: f64,
) -> Result<VerificationReport> {
    let zeta = zeta_transform(psi, a)?;
    let inputs = json!({
        "profile": u.label(),
        "psi": psi.describe(),
        "A": a.entries(),
    });
    let tol = tolerances(opts, slack);
    let rhs = gls_norm_with(u, Component::Gradient, psi, a, opts)?;
    if rhs.infinite {
        return Ok(VerificationReport::inconclusive(
            InequalityId::GlsSobolev,
            tol,
            inputs,
            "gradient norm in G(ψ) is infinite",
        ));
    }
    let lhs = gls_norm_with(u, Component::Value, &zeta, a, opts)?;
    let mut report = VerificationReport::new(
        InequalityId::GlsSobolev,
        lhs.value,
        rhs.value,
        1.0,
        tol,
        lhs.diagnostics.merge(rhs.diagnostics),
        inputs,
    )
    .with_detail("lhs-sup", lhs)
    .with_detail("rhs-sup", rhs)
    .with_detail("zeta", zeta.describe());
    if lhs.infinite {
        report = report.with_note("norm in G(ζ) is infinite");
    }
    Ok(report)
}

pub fn verify_gls_sobolev(
    u: &RadialProfile,
    psi: &PsiFunction,
    a: &ExponentTuple,
) -> Result<VerificationReport> {
    verify_gls_sobolev_with(u, psi, a, &GlsOptions::default(), DEFAULT_SLACK)
}

/// Continuity bound ‖∇u‖_{G(ψ)}·δ / φ_{ψ^(D)}(δ^D) and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct MorreyBound {
    /// +∞ when the gradient norm is infinite (inconclusive).
    pub bound: f64,
    pub delta: f64,
    pub c2: f64,
    pub gradient_norm: Supremum,
    pub fundamental: Supremum,
}

impl MorreyBound {
    pub fn is_conclusive(&self) -> bool {
        self.bound.is_finite()
    }
}

pub fn morrey_bound_with(
    u: &RadialProfile,
    psi: &PsiFunction,
    a: &ExponentTuple,
    c2: f64,
    delta: f64,
    opts: &GlsOptions,
) -> Result<MorreyBound> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!(
            "δ = {delta} must be positive and finite"
        )));
    }
    let d = a.effective_dimension();
    let psi_d = psi_d_transform(psi, d, c2)?;
    let fundamental = fundamental_function_with(&psi_d, delta.powf(d), opts)?;
    let gradient_norm = gls_norm_with(u, Component::Gradient, psi, a, opts)?;
    let bound = if gradient_norm.infinite {
        f64::INFINITY
    } else {
        gradient_norm.value * delta / fundamental.value
    };
    Ok(MorreyBound {
        bound,
        delta,
        c2,
        gradient_norm,
        fundamental,
    })
}

pub fn morrey_bound(
    u: &RadialProfile,
    psi: &PsiFunction,
    a: &ExponentTuple,
    c2: f64,
    delta: f64,
) -> Result<MorreyBound> {
    morrey_bound_with(u, psi, a, c2, delta, &GlsOptions::default())
}

/// C2·p0/(p0 − D)·|∇u|_{p0,μ_A}·δ^{1−D/p0}, the single-exponent bound.
pub fn single_exponent_morrey_bound(
    u: &RadialProfile,
    a: &ExponentTuple,
    c2: f64,
    p0: f64,
    delta: f64,
) -> Result<f64> {
    let d = a.effective_dimension();
    if !(p0 > d) {
        return Err(Error::domain(format!("p0 = {p0} must exceed D(A) = {d}")));
    }
    let grad = WeightedMeasure::new(a.clone()).gradient_norm(u, p0)?.value;
    Ok(c2 * p0 / (p0 - d) * grad * delta.powf(1.0 - d / p0))
}

/// Hölder bound for radial functions: ω(u, δ) ≤ K(p)|∇u|_{p,μ_A}δ^{1−D/p}
/// with K(p) = σ_A^{−1/p}((p−1)/(p−D))^{1−1/p}. Returns sup K(p)(p−D)/p
/// over a grid of the support, a value of C2 that always suffices.
pub fn radial_c2_ceiling(psi: &PsiFunction, a: &ExponentTuple) -> Result<f64> {
    let d = a.effective_dimension();
    let (lo, hi) = psi.support();
    if !(lo >= d) {
        return Err(Error::input(format!(
            "supp ψ = ({lo}, {hi}) must lie above D(A) = {d}"
        )));
    }
    let ln_sigma = crate::calculus::angular_mass(a).ln();
    let k =
        |p: f64| (-ln_sigma / p + (1.0 - 1.0 / p) * ((p - 1.0) / (p - d)).ln()).exp() * (p - d) / p;
    let sup = maximize_over_support(
        lo,
        hi,
        |p| Ok((k(p), QuadDiagnostics::default())),
        &GlsOptions::default(),
    )?;
    Ok(sup.value)
}

/// One profile and radius in a calibration battery.
#[derive(Clone)]
pub struct MorreyCase {
    pub profile: RadialProfile,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct C2Calibration {
    /// Smallest C2 with ω ≤ bound on every case of the battery.
    pub c2: f64,
    pub worst_case: usize,
    /// ω(u, δ) / bound(C2 = 1) per case.
    pub ratios: Vec<f64>,
    pub moduli: Vec<f64>,
}

/// The bound is linear in C2, so the smallest admissible C2 over a battery
/// is the largest ω / bound(C2 = 1). Reported, never adopted implicitly.
pub fn calibrate_c2(
    cases: &[MorreyCase],
    psi: &PsiFunction,
    a: &ExponentTuple,
    opts: &GlsOptions,
) -> Result<C2Calibration> {
    if cases.is_empty() {
        return Err(Error::input("C2 calibration needs at least one case"));
    }
    let inner = GlsOptions {
        exec: Execution::Sequential,
        ..*opts
    };
    let rows = par::map(opts.exec, cases, |case| -> Result<(f64, f64)> {
        let omega = modulus_of_continuity(&case.profile, case.delta, DEFAULT_MODULUS_SAMPLES)?;
        let b = morrey_bound_with(&case.profile, psi, a, 1.0, case.delta, &inner)?;
        if !b.is_conclusive() {
            return Err(Error::Divergent(format!(
                "gradient norm of {} in G(ψ) is infinite",
                case.profile.label()
            )));
        }
        Ok((omega / b.bound, omega))
    });
    let mut ratios = Vec::with_capacity(cases.len());
    let mut moduli = Vec::with_capacity(cases.len());
    for r in rows {
        let (ratio, omega) = r?;
        ratios.push(ratio);
        moduli.push(omega);
    }
    let mut worst_case = 0;
    for (i, r) in ratios.iter().enumerate() {
        if *r > ratios[worst_case] {
            worst_case = i;
        }
    }
    Ok(C2Calibration {
        c2: ratios[worst_case],
        worst_case,
        ratios,
        moduli,
    })
}

/// Report ω(u, δ) against the continuity bound with a given C2.
pub fn check_morrey(
    u: &RadialProfile,
    psi: &PsiFunction,
    a: &ExponentTuple,
    c2: f64,
    delta: f64,
    opts: &GlsOptions,
    slack: f64,
) -> Result<VerificationReport> {
    let inputs = json!({
        "profile": u.label(),
        "psi": psi.describe(),
        "A": a.entries(),
        "C2": c2,
        "delta": delta,
    });
    let tol = tolerances(opts, slack);
    let b = morrey_bound_with(u, psi, a, c2, delta, opts)?;
    if !b.is_conclusive() {
        return Ok(VerificationReport::inconclusive(
            InequalityId::Morrey,
            tol,
            inputs,
            "gradient norm in G(ψ) is infinite",
        ));
    }
    let omega = modulus_of_continuity(u, delta, DEFAULT_MODULUS_SAMPLES)?;
    // constant·rhs = bound with rhs = ‖∇u‖_{G(ψ)}
    let constant = delta / b.fundamental.value;
    Ok(VerificationReport::new(
        InequalityId::Morrey,
        omega,
        b.gradient_norm.value,
        constant,
        tol,
        b.gradient_norm.diagnostics,
        inputs,
    )
    .with_detail("bound", b.bound)
    .with_detail("fundamental", b.fundamental))
}

#[cfg(test)]
mod tests;
