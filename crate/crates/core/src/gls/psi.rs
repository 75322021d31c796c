//! Generating functions ψ(p) on an open exponent interval (a, b).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constants::monomial_c;
use crate::error::{Error, Result};
use crate::monomial::{p_from_q, q_from_p, ExponentTuple};

/// Serialized form of a user-supplied ψ. `b` omitted or null means b = ∞.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PsiConfig {
    Constant {
        a: f64,
        #[serde(default)]
        b: Option<f64>,
    },
    PowerEndpoint {
        a: f64,
        #[serde(default)]
        b: Option<f64>,
        #[serde(default)]
        alpha: f64,
        #[serde(default)]
        beta: f64,
    },
    Tabulated {
        points: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiFamily {
    Constant,
    PowerEndpoint,
    Tabulated,
    Zeta,
    Morrey,
}

#[derive(Clone)]
enum PsiKind {
    Constant,
    PowerEndpoint {
        alpha: f64,
        beta: f64,
        ln_inf: f64,
    },
    Tabulated {
        ps: Vec<f64>,
        values: Vec<f64>,
        slopes: Vec<f64>,
    },
    Zeta {
        base: Arc<PsiFunction>,
        exponents: ExponentTuple,
    },
    Morrey {
        base: Arc<PsiFunction>,
        dim: f64,
        c2: f64,
    },
}

/// ψ on its support (a, b); b may be +∞.
#[derive(Clone)]
pub struct PsiFunction {
    a: f64,
    b: f64,
    kind: PsiKind,
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

fn check_support(a: f64, b: f64) -> Result<()> {
    if !(a >= 1.0 && a.is_finite()) {
        return Err(Error::input(format!(
            "ψ support start a = {a} must be finite and ≥ 1"
        )));
    }
    if !(b > a) {
        return Err(Error::input(format!("ψ support ({a}, {b}) is empty")));
    }
    Ok(())
}

impl PsiFunction {
    /// ψ ≡ 1 on (a, b).
    pub fn constant(a: f64, b: f64) -> Result<Self> {
        check_support(a, b)?;
        Ok(PsiFunction {
            a,
            b,
            kind: PsiKind::Constant,
        })
    }

    /// (p−a)^{−α}(b−p)^{−β}, divided by its infimum so that inf ψ = 1.
    pub fn power_endpoint(a: f64, b: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_support(a, b)?;
        if !(alpha >= 0.0 && beta >= 0.0) {
            return Err(Error::input(
                "power-endpoint exponents must be non-negative",
            ));
        }
        let ln_inf = if b.is_infinite() {
            if beta != 0.0 {
                return Err(Error::input("power-endpoint with b = ∞ needs beta = 0"));
            }
            if alpha != 0.0 {
                return Err(Error::input(
                    "power-endpoint with b = ∞ and alpha > 0 has infimum 0 and cannot be normalized",
                ));
            }
            0.0
        } else if alpha > 0.0 && beta > 0.0 {
            let p_star = (alpha * b + beta * a) / (alpha + beta);
            -alpha * (p_star - a).ln() - beta * (b - p_star).ln()
        } else {
            // one-sided: the infimum is the limit at the opposite end
            -(alpha + beta) * (b - a).ln()
        };
        Ok(PsiFunction {
            a,
            b,
            kind: PsiKind::PowerEndpoint {
                alpha,
                beta,
                ln_inf,
            },
        })
    }

    /// Monotone cubic (Fritsch–Carlson) interpolation through (p_k, ψ_k),
    /// divided by the smallest tabulated value. Support is (p_0, p_n).
    pub fn tabulated(points: &[[f64; 2]]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::input("tabulated ψ needs at least two points"));
        }
        if points.windows(2).any(|w| !(w[1][0] > w[0][0])) {
            return Err(Error::input(
                "tabulated ψ abscissae must be strictly increasing",
            ));
        }
        if points.iter().any(|pt| !(pt[1] > 0.0 && pt[1].is_finite())) {
            return Err(Error::input(
                "tabulated ψ values must be positive and finite",
            ));
        }
        let ps: Vec<f64> = points.iter().map(|pt| pt[0]).collect();
        let min = points.iter().map(|pt| pt[1]).fold(f64::INFINITY, f64::min);
        let values: Vec<f64> = points.iter().map(|pt| pt[1] / min).collect();
        check_support(ps[0], ps[ps.len() - 1])?;
        let slopes = pchip_slopes(&ps, &values);
        Ok(PsiFunction {
            a: ps[0],
            b: ps[ps.len() - 1],
            kind: PsiKind::Tabulated { ps, values, slopes },
        })
    }

    pub fn from_config(cfg: &PsiConfig) -> Result<Self> {
        match cfg {
            PsiConfig::Constant { a, b } => Self::constant(*a, b.unwrap_or(f64::INFINITY)),
            PsiConfig::PowerEndpoint { a, b, alpha, beta } => {
                Self::power_endpoint(*a, b.unwrap_or(f64::INFINITY), *alpha, *beta)
            }
            PsiConfig::Tabulated { points } => Self::tabulated(points),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: PsiConfig = serde_json::from_str(s)
            .map_err(|e| Error::input(format!("bad ψ specification: {e}")))?;
        Self::from_config(&cfg)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn family(&self) -> PsiFamily {
        match self.kind {
            PsiKind::Constant => PsiFamily::Constant,
            PsiKind::PowerEndpoint { .. } => PsiFamily::PowerEndpoint,
            PsiKind::Tabulated { .. } => PsiFamily::Tabulated,
            PsiKind::Zeta { .. } => PsiFamily::Zeta,
            PsiKind::Morrey { .. } => PsiFamily::Morrey,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        p > self.a && p < self.b
    }

    /// ψ(p) for p inside the open support; NaN outside.
    pub fn eval(&self, p: f64) -> f64 {
        if !self.contains(p) {
            return f64::NAN;
        }
        match &self.kind {
            PsiKind::Constant => 1.0,
            PsiKind::PowerEndpoint {
                alpha,
                beta,
                ln_inf,
            } => {
                let mut ln = -ln_inf;
                if *alpha != 0.0 {
                    ln -= alpha * (p - self.a).ln();
                }
                if *beta != 0.0 {
                    ln -= beta * (self.b - p).ln();
                }
                ln.exp()
            }
            PsiKind::Tabulated { ps, values, slopes } => hermite(ps, values, slopes, p),
            PsiKind::Zeta { base, exponents } => {
                let d = exponents.effective_dimension();
                let pp = p_from_q(d, p);
                match monomial_c(exponents, pp) {
                    Ok(c) => c * base.eval(pp),
                    Err(_) => f64::NAN,
                }
            }
            PsiKind::Morrey { base, dim, c2 } => c2 * p / (p - dim) * base.eval(p),
        }
    }

    pub fn describe(&self) -> String {
        let b = if self.b.is_infinite() {
            "inf".to_string()
        } else {
            self.b.to_string()
        };
        match &self.kind {
            PsiKind::Constant => format!("constant({},{b})", self.a),
            PsiKind::PowerEndpoint { alpha, beta, .. } => {
                format!("power-endpoint({},{b};{alpha},{beta})", self.a)
            }
            PsiKind::Tabulated { ps, .. } => format!("tabulated({} points)", ps.len()),
            PsiKind::Zeta { base, exponents } => format!("zeta[{exponents}]({})", base.describe()),
            PsiKind::Morrey { base, dim, c2 } => {
                format!("morrey[D={dim},C2={c2}]({})", base.describe())
            }
        }
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let delta: Vec<f64> = (0..n - 1)
        .map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k]))
        .collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let h0 = x[k] - x[k - 1];
            let h1 = x[k + 1] - x[k];
            let w0 = 2.0 * h1 + h0;
            let w1 = h1 + 2.0 * h0;
            m[k] = (w0 + w1) / (w0 / delta[k - 1] + w1 / delta[k]);
        }
    }
    // keep end slopes from overshooting
    for (end, d) in [(0, delta[0]), (n - 1, delta[n - 2])] {
        if m[end] * d <= 0.0 {
            m[end] = 0.0;
        } else if m[end].abs() > 3.0 * d.abs() {
            m[end] = 3.0 * d;
        }
    }
    m
}

fn hermite(x: &[f64], y: &[f64], m: &[f64], p: f64) -> f64 {
    let k = x.partition_point(|xi| *xi <= p).clamp(1, x.len() - 1) - 1;
    let h = x[k + 1] - x[k];
    let t = (p - x[k]) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y[k]
        + (t3 - 2.0 * t2 + t) * h * m[k]
        + (-2.0 * t3 + 3.0 * t2) * y[k + 1]
        + (t3 - t2) * h * m[k + 1]
}

/// ζ(q) = C(Dq/(D+q))·ψ(Dq/(D+q)) on the image of supp ψ under q = Dp/(D−p).
pub fn zeta_transform(psi: &PsiFunction, a: &ExponentTuple) -> Result<PsiFunction> {
    let d = a.effective_dimension();
    if !(d > 1.0) {
        return Err(Error::domain(format!("D(A) = {d} must exceed 1")));
    }
    let (lo, hi) = psi.support();
    if !(lo >= 1.0 && hi <= d) {
        return Err(Error::input(format!(
            "ζ-transform needs supp ψ = ({lo}, {hi}) inside (1, {d})"
        )));
    }
    let q_hi = if hi >= d {
        f64::INFINITY
    } else {
        q_from_p(d, hi)
    };
    Ok(PsiFunction {
        a: q_from_p(d, lo),
        b: q_hi,
        kind: PsiKind::Zeta {
            base: Arc::new(psi.clone()),
            exponents: a.clone(),
        },
    })
}

/// ψ^{(D)}(p) = C2·p/(p−D)·ψ(p) on the same support, which must lie in (D, ∞).
pub fn psi_d_transform(psi: &PsiFunction, d: f64, c2: f64) -> Result<PsiFunction> {
    if !(c2 > 0.0 && c2.is_finite()) {
        return Err(Error::input(format!("C2 = {c2} must be positive")));
    }
    let (lo, hi) = psi.support();
    if !(lo >= d) {
        return Err(Error::input(format!(
            "Morrey transform needs supp ψ = ({lo}, {hi}) inside ({d}, ∞)"
        )));
    }
    Ok(PsiFunction {
        a: lo,
        b: hi,
        kind: PsiKind::Morrey {
            base: Arc::new(psi.clone()),
            dim: d,
            c2,
        },
    })
}
