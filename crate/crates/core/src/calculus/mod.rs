//! Monomial-weighted norms of radial functions.
//!
//! For radial u(x) = g(|x|) the weighted integral factorizes into the
//! angular mass σ_A = ∫_{S^{m−1}} ∏|θ_i|^{A_i} dθ and a one-dimensional
//! moment ∫_0^∞ ρ^{D(A)−1} |g(ρ)|^p dρ. Moments are computed by adaptive
//! Gauss–Kronrod on dyadic panels; the panel touching the origin uses the
//! substitution t = (ρ/ε)^D, which absorbs the power weight exactly.

mod modulus;
mod montecarlo;
mod profile;

pub use modulus::{modulus_of_continuity, DEFAULT_MODULUS_SAMPLES};

pub use montecarlo::{
    monte_carlo_angular_mass, monte_carlo_weighted_integral, McEstimate, SamplerConfig,
};
pub use profile::{
    bump, dilate, gaussian, plateau, power_tail, tent, ProfileSpec, RadialFn, RadialProfile,
    SupportHint,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::monomial::ExponentTuple;
use crate::quadrature::{integrate, integrate_with_breaks, QuadDiagnostics, QuadOptions};

/// Dyadic panels between the innermost cell and the scale radius.
const INNER_LEVELS: i32 = 24;
/// Stop extending a decaying tail once a doubling panel adds less than this.
const TAIL_REL_TOL: f64 = 1e-12;
/// Largest truncation radius relative to the profile's scale.
const MAX_TRUNCATION_DOUBLINGS: i32 = 40;

/// Which function of the profile enters the moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Value,
    Gradient,
}

/// |x|^p computed as exp(p ln|x|), exact zero at zero.
fn abs_pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if p == 1.0 {
        x.abs()
    } else {
        (p * x.abs().ln()).exp()
    }
}

/// Exponent above which the integrand is sharply peaked and the panel
/// structure is refined geometrically around the peak of |f|.
const PEAKED_EXPONENT: f64 = 4.0;
const PEAK_SCAN_POINTS: usize = 128;
const PEAK_REFINE_LEVELS: i32 = 40;

/// Location and size of max |f| on [0, reach]: log grid, then golden section.
fn locate_peak<F: Fn(f64) -> f64>(f: &F, tiny: f64, reach: f64, extra: &[f64]) -> (f64, f64) {
    let mut best = (0.0, f(0.0).abs());
    let mut grid: Vec<f64> = (0..PEAK_SCAN_POINTS)
        .map(|k| tiny * (reach / tiny).powf(k as f64 / (PEAK_SCAN_POINTS - 1) as f64))
        .collect();
    grid.extend(extra.iter().copied().filter(|r| *r > 0.0 && *r <= reach));
    grid.extend((1..=PEAK_SCAN_POINTS).map(|k| reach * k as f64 / PEAK_SCAN_POINTS as f64));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    // midpoints catch thin layers next to breakpoints
    let mids: Vec<f64> = grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    grid.extend(mids);
    grid.sort_by(f64::total_cmp);
    let mut best_idx = None;
    for (i, &r) in grid.iter().enumerate() {
        let v = f(r).abs();
        if v > best.1 {
            best = (r, v);
            best_idx = Some(i);
        }
    }
    let Some(i) = best_idx else { return best };
    let mut lo = if i == 0 { 0.0 } else { grid[i - 1] };
    let mut hi = if i + 1 == grid.len() {
        grid[i]
    } else {
        grid[i + 1]
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c).abs(), f(d).abs());
    for _ in 0..80 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c).abs();
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d).abs();
        }
    }
    for (r, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (r, v);
        }
    }
    best
}

/// ln ∫_0^∞ ρ^{dim−1} |f(ρ)|^p dρ where f is the value or the derivative of
/// `u`. The integrand is divided by (max|f|)^p so that large p neither
/// underflows nor overflows; −∞ for a profile that vanishes identically.
pub fn radial_ln_moment(
    u: &RadialProfile,
    component: Component,
    dim: f64,
    p: f64,
    opts: &QuadOptions,
) -> Result<(f64, QuadDiagnostics)> {
    if !(dim > 0.0) {
        return Err(Error::domain(format!(
            "radial weight exponent {dim} must be positive"
        )));
    }
    if !(p > 0.0) {
        return Err(Error::domain(format!("exponent p = {p} must be positive")));
    }
    let f = |r: f64| match component {
        Component::Value => u.value(r),
        Component::Gradient => u.derivative(r),
    };

    let scale = u.support().scale();
    let eps = scale * 2f64.powi(-INNER_LEVELS);
    let reach = match u.support() {
        SupportHint::Compact { .. } => scale,
        SupportHint::Decaying { .. } => 8.0 * scale,
    };
    let (peak_at, peak) = locate_peak(&f, eps, reach, u.breakpoints());
    if !peak.is_finite() {
        return Err(Error::Numerical {
            message: format!("{} is not finite near radius {peak_at:e}", u.label()),
            diagnostics: QuadDiagnostics::default(),
        });
    }
    // a scan that sees nothing falls back to the unscaled integrand
    let ln_peak = if peak > 0.0 { peak.ln() } else { 0.0 };
    let peak = ln_peak.exp();
    let weighted = |r: f64| {
        let v = f(r);
        if v == 0.0 || r == 0.0 {
            0.0
        } else {
            ((dim - 1.0) * r.ln() + p * (v.abs().ln() - ln_peak)).exp()
        }
    };

    // innermost cell: ∫_0^ε ρ^{dim−1} g = (ε^dim/dim) ∫_0^1 g(ε t^{1/dim}) dt
    let core = integrate(
        |t: f64| abs_pow(f(eps * t.powf(1.0 / dim)) / peak, p),
        0.0,
        1.0,
        opts,
    )?;
    let ln_core_factor = dim * eps.ln() - dim.ln();

    let mut breaks: Vec<f64> = (0..=INNER_LEVELS)
        .rev()
        .map(|k| scale * 2f64.powi(-k))
        .collect();
    breaks.extend(
        u.breakpoints()
            .iter()
            .copied()
            .filter(|b| *b > eps && *b < scale),
    );
    if p > PEAKED_EXPONENT && peak_at > eps && peak_at < scale {
        breaks.push(peak_at);
        for j in 1..=PEAK_REFINE_LEVELS {
            let h = peak_at * 2f64.powi(-j);
            for r in [peak_at - h, peak_at + h] {
                if r > eps && r < scale {
                    breaks.push(r);
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let body = integrate_with_breaks(weighted, &breaks, opts)?;

    // everything below is in units of peak^p; the core cell carries ε^dim
    let core_scaled = (core.value.ln() + ln_core_factor).exp();
    let core_err = (core.error.ln() + ln_core_factor).exp();
    let mut total = core_scaled + body.value;
    let mut error = core_err + body.error;
    let mut diag = QuadDiagnostics {
        panels: core.panels + body.panels,
        evaluations: core.evaluations + body.evaluations,
        achieved_rel_err: 0.0,
        truncation_radius: scale,
    };

    if let SupportHint::Decaying { .. } = u.support() {
        let mut lo = scale;
        let mut panels = Vec::new();
        let mut converged = false;
        let doublings =
            MAX_TRUNCATION_DOUBLINGS.max((opts.min_truncation_radius / scale).log2().ceil() as i32);
        for _ in 0..doublings {
            let hi = 2.0 * lo;
            let panel = integrate(weighted, lo, hi, opts)?;
            total += panel.value;
            error += panel.error;
            diag.panels += panel.panels;
            diag.evaluations += panel.evaluations;
            diag.truncation_radius = hi;
            panels.push(panel.value);
            lo = hi;
            if !total.is_finite() {
                return Err(Error::Divergent(format!(
                    "moment of {} overflows by radius {hi:e}",
                    u.label()
                )));
            }
            if panel.value.abs() <= TAIL_REL_TOL * total.abs() && hi >= opts.min_truncation_radius {
                converged = true;
                break;
            }
        }
        if !converged {
            // Power-law tails give geometric doubling panels; extrapolate
            // the remainder once the ratio has settled.
            let n = panels.len();
            let ratio = panels[n - 1] / panels[n - 2];
            if !(ratio < 1.0 - 1e-3) {
                return Err(Error::Divergent(format!(
                    "tail of {} does not decay (doubling-panel ratio {ratio:.4})",
                    u.label()
                )));
            }
            let drift = if n >= 3 {
                (ratio - panels[n - 2] / panels[n - 3]).abs()
            } else {
                1.0
            };
            let tail = panels[n - 1] * ratio / (1.0 - ratio);
            let tail_err = tail.abs() * (drift / (1.0 - ratio)).min(1.0);
            total += tail;
            error += tail_err;
            if tail_err > opts.rel_tol.max(1e-8) * total.abs() {
                diag.achieved_rel_err = error / total.abs();
                return Err(Error::Numerical {
                    message: format!(
                        "tail of {} not resolved by radius {:e}",
                        u.label(),
                        diag.truncation_radius
                    ),
                    diagnostics: diag,
                });
            }
        }
    }

    if total > 0.0 {
        diag.achieved_rel_err = error / total;
    }
    // ln 0 = −∞ for a profile that vanishes identically
    Ok((p * ln_peak + total.ln(), diag))
}

/// ∫_0^∞ ρ^{dim−1} |f(ρ)|^p dρ; may overflow for large p, where
/// [`radial_ln_moment`] should be used instead.
pub fn radial_moment(
    u: &RadialProfile,
    component: Component,
    dim: f64,
    p: f64,
    opts: &QuadOptions,
) -> Result<(f64, QuadDiagnostics)> {
    radial_ln_moment(u, component, dim, p, opts).map(|(ln, d)| (ln.exp(), d))
}

/// Closed form σ_A = 2∏Γ((A_i+1)/2) / Γ(D(A)/2).
pub fn angular_mass(a: &ExponentTuple) -> f64 {
    let ln = std::f64::consts::LN_2
        + a.entries()
            .iter()
            .map(|ai| ln_gamma(0.5 * (ai + 1.0)))
            .sum::<f64>()
        - ln_gamma(0.5 * a.effective_dimension());
    ln.exp()
}

/// A norm together with the quadrature bookkeeping that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub diagnostics: QuadDiagnostics,
}

/// The measure μ_A = ∏|x_i|^{A_i} dx on R^m, restricted to radial functions.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMeasure {
    a: ExponentTuple,
    angular_mass: f64,
    opts: QuadOptions,
}

impl WeightedMeasure {
    pub fn new(a: ExponentTuple) -> Self {
        Self::with_options(a, QuadOptions::default())
    }

    pub fn with_options(a: ExponentTuple, opts: QuadOptions) -> Self {
        let angular_mass = angular_mass(&a);
        WeightedMeasure {
            a,
            angular_mass,
            opts,
        }
    }

    pub fn exponents(&self) -> &ExponentTuple {
        &self.a
    }

    pub fn angular_mass(&self) -> f64 {
        self.angular_mass
    }

    pub fn options(&self) -> &QuadOptions {
        &self.opts
    }

    /// ln ∫_{R^m} |f(|x|)|^p dμ_A.
    pub fn ln_integral(
        &self,
        u: &RadialProfile,
        component: Component,
        p: f64,
    ) -> Result<(f64, QuadDiagnostics)> {
        let (ln_moment, diagnostics) =
            radial_ln_moment(u, component, self.a.effective_dimension(), p, &self.opts)?;
        Ok((self.angular_mass.ln() + ln_moment, diagnostics))
    }

    /// ∫_{R^m} |f(|x|)|^p dμ_A for the chosen component.
    pub fn integral(&self, u: &RadialProfile, component: Component, p: f64) -> Result<NormValue> {
        let (ln, diagnostics) = self.ln_integral(u, component, p)?;
        Ok(NormValue {
            value: ln.exp(),
            diagnostics,
        })
    }

    /// (∫ |f|^p dμ_A)^{1/p}.
    pub fn norm(&self, u: &RadialProfile, component: Component, p: f64) -> Result<NormValue> {
        if !(p >= 1.0) {
            return Err(Error::domain(format!(
                "norm exponent p = {p} must be at least 1"
            )));
        }
        // the norm's relative error is the moment's divided by p
        let relaxed = QuadOptions {
            rel_tol: (self.opts.rel_tol * p).min(1e-4).max(self.opts.rel_tol),
            ..self.opts
        };
        let (ln_moment, diagnostics) =
            radial_ln_moment(u, component, self.a.effective_dimension(), p, &relaxed)?;
        let ln = self.angular_mass.ln() + ln_moment;
        Ok(NormValue {
            value: (ln / p).exp(),
            diagnostics,
        })
    }

    pub fn lp_norm(&self, u: &RadialProfile, p: f64) -> Result<NormValue> {
        self.norm(u, Component::Value, p)
    }

    /// |∇u| = |u'(|x|)| for radial u.
    pub fn gradient_norm(&self, u: &RadialProfile, p: f64) -> Result<NormValue> {
        self.norm(u, Component::Gradient, p)
    }
}

pub fn weighted_lp_norm(u: &RadialProfile, a: &ExponentTuple, p: f64) -> Result<NormValue> {
    WeightedMeasure::new(a.clone()).lp_norm(u, p)
}

pub fn weighted_gradient_norm(u: &RadialProfile, a: &ExponentTuple, p: f64) -> Result<NormValue> {
    WeightedMeasure::new(a.clone()).gradient_norm(u, p)
}
