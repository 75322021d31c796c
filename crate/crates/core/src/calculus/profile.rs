//! Radial profiles ρ ↦ u(ρ) with analytic derivatives.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// How the profile behaves at large radius. Used for truncation control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SupportHint {
    /// u(ρ) = 0 for ρ ≥ radius.
    Compact { radius: f64 },
    /// |u(ρ)| ≤ c·ρ^{−tail_exponent} for ρ ≥ from_radius.
    Decaying {
        tail_exponent: f64,
        from_radius: f64,
    },
}

impl SupportHint {
    /// Natural length scale: the support radius or the onset of the tail.
    pub fn scale(&self) -> f64 {
        match *self {
            SupportHint::Compact { radius } => radius,
            SupportHint::Decaying { from_radius, .. } => from_radius,
        }
    }

    fn dilated(self, lambda: f64) -> SupportHint {
        match self {
            SupportHint::Compact { radius } => SupportHint::Compact {
                radius: radius / lambda,
            },
            SupportHint::Decaying {
                tail_exponent,
                from_radius,
            } => SupportHint::Decaying {
                tail_exponent,
                from_radius: from_radius / lambda,
            },
        }
    }
}

/// A radial function on R^m given by its profile and derivative.
/// Cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct RadialProfile {
    value: RadialFn,
    derivative: RadialFn,
    support: SupportHint,
    breakpoints: Vec<f64>,
    label: String,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .field("support", &self.support)
            .finish()
    }
}

const SELF_CHECK_POINTS: usize = 32;
const SELF_CHECK_TOL: f64 = 1e-4;

impl RadialProfile {
    /// Builds a profile and validates the supplied derivative by central
    /// differences (h = 1e-6·(1+ρ)) at 32 sample points, along with the
    /// support hint.
    pub fn new(
        label: impl Into<String>,
        value: RadialFn,
        derivative: RadialFn,
        support: SupportHint,
    ) -> Result<Self> {
        let profile = Self::new_unchecked(label, value, derivative, support)?;
        profile.self_check()?;
        Ok(profile)
    }

    /// Builds a profile without the derivative self-check. Intended for
    /// deliberately non-smooth test profiles such as step functions.
    pub fn new_unchecked(
        label: impl Into<String>,
        value: RadialFn,
        derivative: RadialFn,
        support: SupportHint,
    ) -> Result<Self> {
        match support {
            SupportHint::Compact { radius } if !(radius > 0.0 && radius.is_finite()) => {
                return Err(Error::input(format!(
                    "support radius {radius} must be positive"
                )))
            }
            SupportHint::Decaying {
                tail_exponent,
                from_radius,
            } if !(tail_exponent > 0.0 && from_radius > 0.0 && from_radius.is_finite()) => {
                return Err(Error::input(
                    "decay hint needs positive exponent and radius",
                ))
            }
            _ => {}
        }
        Ok(RadialProfile {
            value,
            derivative,
            support,
            breakpoints: Vec::new(),
            label: label.into(),
        })
    }

    /// Radii where the profile is known to be non-smooth or to change scale.
    pub fn with_breakpoints(mut self, mut points: Vec<f64>) -> Self {
        points.retain(|r| *r > 0.0 && r.is_finite());
        points.sort_by(f64::total_cmp);
        self.breakpoints = points;
        self
    }

    pub fn value(&self, rho: f64) -> f64 {
        (self.value)(rho)
    }

    pub fn derivative(&self, rho: f64) -> f64 {
        (self.derivative)(rho)
    }

    pub fn support(&self) -> SupportHint {
        self.support
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn sample_radii(&self) -> Vec<f64> {
        let n = SELF_CHECK_POINTS;
        match self.support {
            SupportHint::Compact { radius } => (0..n)
                .map(|i| radius * (i as f64 + 0.37) / n as f64)
                .collect(),
            SupportHint::Decaying { from_radius, .. } => (0..n)
                .map(|i| from_radius * 10f64.powf(-2.0 + 5.0 * i as f64 / (n - 1) as f64))
                .collect(),
        }
    }

    fn self_check(&self) -> Result<()> {
        let radii = self.sample_radii();
        let derivs: Vec<f64> = radii.iter().map(|r| self.derivative(*r)).collect();
        let scale = derivs.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        for (&r, &d) in radii.iter().zip(&derivs) {
            let u = self.value(r);
            if !u.is_finite() || !d.is_finite() {
                return Err(Error::input(format!(
                    "{}: non-finite value at ρ = {r}",
                    self.label
                )));
            }
            if self
                .breakpoints
                .iter()
                .any(|b| (b - r).abs() < 1e-4 * (1.0 + r))
            {
                continue;
            }
            let h = 1e-6 * (1.0 + r);
            let lo = (r - h).max(0.0);
            let fd = (self.value(r + h) - self.value(lo)) / (r + h - lo);
            let tol = SELF_CHECK_TOL * (d.abs() + 1e-3 * scale) + 1e-12;
            if (fd - d).abs() > tol {
                return Err(Error::input(format!(
                    "{}: derivative mismatch at ρ = {r}: supplied {d}, finite difference {fd}",
                    self.label
                )));
            }
        }
        match self.support {
            SupportHint::Compact { radius } => {
                for k in 0..4 {
                    let r = radius * (1.0 + k as f64);
                    if self.value(r) != 0.0 {
                        return Err(Error::input(format!(
                            "{}: nonzero value {} outside the support radius {radius}",
                            self.label,
                            self.value(r)
                        )));
                    }
                }
            }
            SupportHint::Decaying {
                tail_exponent,
                from_radius,
            } => {
                let envelope = |r: f64| self.value(r).abs() * r.powf(tail_exponent);
                let base = envelope(from_radius).max(f64::MIN_POSITIVE);
                for k in 1..=6 {
                    let r = from_radius * 10f64.powi(k);
                    if envelope(r) > 10.0 * base.max(envelope(from_radius * 10.0)) {
                        return Err(Error::input(format!(
                            "{}: decay ρ^-{tail_exponent} violated at ρ = {r}",
                            self.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// c·u.
    pub fn scaled(&self, c: f64) -> RadialProfile {
        let (v, d) = (self.value.clone(), self.derivative.clone());
        RadialProfile {
            value: Arc::new(move |r| c * v(r)),
            derivative: Arc::new(move |r| c * d(r)),
            support: self.support,
            breakpoints: self.breakpoints.clone(),
            label: format!("{c}*{}", self.label),
        }
    }
}

/// The dilation ρ ↦ u(λρ), with derivative λ·u'(λρ).
pub fn dilate(u: &RadialProfile, lambda: f64) -> Result<RadialProfile> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::input(format!(
            "dilation factor {lambda} must be positive"
        )));
    }
    let (v, d) = (u.value.clone(), u.derivative.clone());
    Ok(RadialProfile {
        value: Arc::new(move |r| v(lambda * r)),
        derivative: Arc::new(move |r| lambda * d(lambda * r)),
        support: u.support.dilated(lambda),
        breakpoints: u.breakpoints.iter().map(|b| b / lambda).collect(),
        label: format!("dilate({},{lambda})", u.label),
    })
}

/// Named profile constructors, parseable from `name:param1,param2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum ProfileSpec {
    /// exp(1 − 1/(1 − (ρ/R)²)) on [0, R).
    Bump { radius: f64 },
    /// 1 on [0, R−w], smooth monotone transition to 0 on [R−w, R].
    Plateau { radius: f64, width: f64 },
    /// 1 − ρ/R on [0, R].
    Tent { radius: f64 },
    /// exp(−(ρ/s)²).
    Gaussian { scale: f64 },
    /// (1 + ρ^{p'})^{(p−D)/p}.
    Extremal { dim: f64, p: f64 },
    /// (1 + ρ²)^{−s/2}.
    PowerTail { exponent: f64 },
}

impl ProfileSpec {
    pub fn build(&self) -> Result<RadialProfile> {
        match *self {
            ProfileSpec::Bump { radius } => bump(radius),
            ProfileSpec::Plateau { radius, width } => plateau(radius, width),
            ProfileSpec::Tent { radius } => tent(radius),
            ProfileSpec::Gaussian { scale } => gaussian(scale),
            ProfileSpec::Extremal { dim, p } => crate::verifier::extremal_profile(dim, p),
            ProfileSpec::PowerTail { exponent } => power_tail(exponent),
        }
    }
}

impl FromStr for ProfileSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let params = args
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::input(format!("cannot parse profile parameter {t:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::input(format!(
                    "profile {name:?} takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name.trim() {
            "bump" => want(1).map(|_| ProfileSpec::Bump { radius: params[0] }),
            "plateau" => want(2).map(|_| ProfileSpec::Plateau {
                radius: params[0],
                width: params[1],
            }),
            "tent" => want(1).map(|_| ProfileSpec::Tent { radius: params[0] }),
            "gaussian" => want(1).map(|_| ProfileSpec::Gaussian { scale: params[0] }),
            "extremal" => want(2).map(|_| ProfileSpec::Extremal {
                dim: params[0],
                p: params[1],
            }),
            "power-tail" => want(1).map(|_| ProfileSpec::PowerTail {
                exponent: params[0],
            }),
            other => Err(Error::input(format!("unknown profile {other:?}"))),
        }
    }
}

impl fmt::Display for ProfileSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileSpec::Bump { radius } => write!(f, "bump:{radius}"),
            ProfileSpec::Plateau { radius, width } => write!(f, "plateau:{radius},{width}"),
            ProfileSpec::Tent { radius } => write!(f, "tent:{radius}"),
            ProfileSpec::Gaussian { scale } => write!(f, "gaussian:{scale}"),
            ProfileSpec::Extremal { dim, p } => write!(f, "extremal:{dim},{p}"),
            ProfileSpec::PowerTail { exponent } => write!(f, "power-tail:{exponent}"),
        }
    }
}

fn positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!("{what} = {x} must be positive")))
    }
}

pub fn bump(radius: f64) -> Result<RadialProfile> {
    positive(radius, "bump radius")?;
    let value = move |r: f64| {
        let s = r / radius;
        if s >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - s * s)).exp()
        }
    };
    let derivative = move |r: f64| {
        let s = r / radius;
        if s >= 1.0 {
            0.0
        } else {
            let w = 1.0 - s * s;
            -2.0 * s / (radius * w * w) * (1.0 - 1.0 / w).exp()
        }
    };
    RadialProfile::new(
        format!("bump({radius})"),
        Arc::new(value),
        Arc::new(derivative),
        SupportHint::Compact { radius },
    )
}

// Smooth transition from 1 (t ≤ 0) to 0 (t ≥ 1) built from exp(−1/t).
fn smooth_step(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        return (1.0, 0.0);
    }
    if t >= 1.0 {
        return (0.0, 0.0);
    }
    let e0 = (-1.0 / t).exp();
    let e1 = (-1.0 / (1.0 - t)).exp();
    let de0 = e0 / (t * t);
    let de1 = -e1 / ((1.0 - t) * (1.0 - t));
    let s = e0 + e1;
    let value = e1 / s;
    let slope = (de1 * s - e1 * (de0 + de1)) / (s * s);
    (value, slope)
}

pub fn plateau(radius: f64, width: f64) -> Result<RadialProfile> {
    positive(radius, "plateau radius")?;
    positive(width, "plateau width")?;
    if width > radius {
        return Err(Error::input("plateau width cannot exceed its radius"));
    }
    let start = radius - width;
    RadialProfile::new(
        format!("plateau({radius},{width})"),
        Arc::new(move |r| smooth_step((r - start) / width).0),
        Arc::new(move |r| smooth_step((r - start) / width).1 / width),
        SupportHint::Compact { radius },
    )
    .map(|p| p.with_breakpoints(vec![start]))
}

pub fn tent(radius: f64) -> Result<RadialProfile> {
    positive(radius, "tent radius")?;
    RadialProfile::new(
        format!("tent({radius})"),
        Arc::new(move |r| if r < radius { 1.0 - r / radius } else { 0.0 }),
        Arc::new(move |r| if r < radius { -1.0 / radius } else { 0.0 }),
        SupportHint::Compact { radius },
    )
}

pub fn gaussian(scale: f64) -> Result<RadialProfile> {
    positive(scale, "gaussian scale")?;
    RadialProfile::new(
        format!("gaussian({scale})"),
        Arc::new(move |r| (-(r / scale) * (r / scale)).exp()),
        Arc::new(move |r| -2.0 * r / (scale * scale) * (-(r / scale) * (r / scale)).exp()),
        SupportHint::Decaying {
            tail_exponent: 64.0,
            from_radius: scale,
        },
    )
}

pub fn power_tail(exponent: f64) -> Result<RadialProfile> {
    positive(exponent, "power-tail exponent")?;
    let s = exponent;
    RadialProfile::new(
        format!("power-tail({s})"),
        Arc::new(move |r| (1.0 + r * r).powf(-0.5 * s)),
        Arc::new(move |r| -s * r * (1.0 + r * r).powf(-0.5 * s - 1.0)),
        SupportHint::Decaying {
            tail_exponent: s,
            from_radius: 1.0,
        },
    )
}
