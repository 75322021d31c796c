//! Closed-form sharp constants: Talenti's K_m(p), the monomial constants
//! C1 and C(p), and the two-sided bound factors M, Q for the radial trace
//! reduction. Everything is assembled in log space and exponentiated once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::monomial::ExponentTuple;

/// Requests closer than this to an open end of a domain are rejected.
pub const ENDPOINT_GUARD: f64 = 1e-12;

fn guard_open(p: f64, lo: f64, hi: f64, what: &str) -> Result<()> {
    if !(p > lo + ENDPOINT_GUARD && p < hi - ENDPOINT_GUARD) {
        return Err(Error::domain(format!(
            "{what}: p = {p} must lie in ({lo}, {hi}) away from the endpoints"
        )));
    }
    Ok(())
}

/// Talenti's sharp constant for the unweighted inequality on R^m, m ≥ 3,
/// p ∈ [1, m). At p = 1 the factor ((p−1)/(m−p))^{1−1/p} is its limit 1.
pub fn talenti_constant(m: usize, p: f64) -> Result<f64> {
    if m < 3 {
        return Err(Error::domain(format!(
            "dimension m = {m} must be at least 3"
        )));
    }
    let mf = m as f64;
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p = {p} must be at least 1")));
    }
    if !(p < mf - ENDPOINT_GUARD) {
        return Err(Error::domain(format!("p = {p} must be below m = {m}")));
    }
    let ratio_term = if p == 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / p) * ((p - 1.0).ln() - (mf - p).ln())
    };
    let gamma_term =
        (ln_gamma(1.0 + mf / 2.0) + ln_gamma(mf) - ln_gamma(mf / p) - ln_gamma(1.0 + mf - mf / p))
            / mf;
    let ln_k = -0.5 * std::f64::consts::PI.ln() - mf.ln() / p + ratio_term + gamma_term;
    Ok(ln_k.exp())
}

/// ln of the monomial mass of the unit ball restricted to the orthant
/// where every positively weighted coordinate is positive.
fn ln_orthant_ball_mass(a: &ExponentTuple) -> f64 {
    let d = a.effective_dimension();
    let k = a.positive_count() as f64;
    a.entries()
        .iter()
        .map(|ai| ln_gamma(0.5 * (1.0 + ai)))
        .sum::<f64>()
        - k * std::f64::consts::LN_2
        - ln_gamma(1.0 + 0.5 * d)
}

fn ln_c1(a: &ExponentTuple) -> Result<f64> {
    let d = a.effective_dimension();
    if !(d > 1.0) {
        return Err(Error::domain(format!("D(A) = {d} must exceed 1")));
    }
    Ok(-d.ln() - ln_orthant_ball_mass(a) / d)
}

/// C1 = 1/(D·m(B1)^{1/D}), the sharp constant of the p = 1 inequality,
/// with m(B1) = ∏Γ((1+A_i)/2) / (2^k Γ(1+D/2)).
pub fn monomial_c1(a: &ExponentTuple) -> Result<f64> {
    ln_c1(a).map(f64::exp)
}

/// Shared p-dependent factor D^{e}·((p−1)/(D−p))^{1/p'}·(p'Γ(D)/(Γ(D/p)Γ(D/p')))^{1/D}
/// with the D exponent supplied by the caller.
fn ln_p_factor(d: f64, p: f64, d_exponent: f64) -> f64 {
    let p_conj = p / (p - 1.0);
    d_exponent * d.ln()
        + ((p - 1.0).ln() - (d - p).ln()) / p_conj
        + (p_conj.ln() + ln_gamma(d) - ln_gamma(d / p) - ln_gamma(d / p_conj)) / d
}

/// Sharp constant C(p) of the monomial inequality with q = Dp/(D−p), 1 < p < D.
///
/// Tends to C1 as p → 1+ and behaves like (D−p)^{−(1−1/D)} as p → D−.
/// For A = 0 it coincides with [`talenti_constant`].
pub fn monomial_c(a: &ExponentTuple, p: f64) -> Result<f64> {
    let d = a.effective_dimension();
    let c1 = ln_c1(a)?;
    guard_open(p, 1.0, d, "monomial constant")?;
    Ok((c1 + ln_p_factor(d, p, 1.0 - 1.0 / d - 1.0 / p)).exp())
}

/// The constants exactly as typeset in the source formulas, kept for
/// side-by-side reporting. `c_as_printed` does not tend to `c1_as_printed`
/// as p → 1+, and neither is sharp for the weighted inequality.
pub mod printed {
    use super::*;

    /// D·(∏Γ((1+A_i)/2) / (2^k Γ((1+D)/2)))^{1/D}; admits any D > 0.
    pub fn c1_as_printed(a: &ExponentTuple) -> Result<f64> {
        let d = a.effective_dimension();
        let k = a.positive_count() as f64;
        let ln_inner = a
            .entries()
            .iter()
            .map(|ai| ln_gamma(0.5 * (1.0 + ai)))
            .sum::<f64>()
            - k * std::f64::consts::LN_2
            - ln_gamma(0.5 * (1.0 + d));
        Ok((d.ln() + ln_inner / d).exp())
    }

    /// C1·D^{1/D−1−1/p}·((p−1)/(D−p))^{1/p'}·(p'Γ(D)/(Γ(D/p)Γ(D/p')))^{1/D}.
    pub fn c_as_printed(a: &ExponentTuple, p: f64) -> Result<f64> {
        let d = a.effective_dimension();
        if !(d > 1.0) {
            return Err(Error::domain(format!("D(A) = {d} must exceed 1")));
        }
        guard_open(p, 1.0, d, "printed monomial constant")?;
        let c1 = c1_as_printed(a)?;
        Ok(c1 * ln_p_factor(d, p, 1.0 / d - 1.0 - 1.0 / p).exp())
    }
}

/// Which form of the lower factor M to use in the trace bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceFormulaVariant {
    /// M = D_r^{−1/r}·((p−1)/(D−r))^{1−1/p}, as typeset.
    #[default]
    Literal,
    /// M = D_r^{−1/q}·((p−1)/(D−p))^{1−1/p}, the supremum in the weighted
    /// Hardy criterion for weights s^{D_r−1} and s^{D−1}.
    Corrected,
}

impl std::str::FromStr for TraceFormulaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(TraceFormulaVariant::Literal),
            "corrected" => Ok(TraceFormulaVariant::Corrected),
            other => Err(Error::input(format!(
                "unknown trace formula variant {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceBoundPair {
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "Q")]
    pub q_factor: f64,
    #[serde(rename = "W_lower")]
    pub w_lower: f64,
    #[serde(rename = "W_upper")]
    pub w_upper: f64,
    pub variant: TraceFormulaVariant,
}

/// Bracket [M, M·Q] for the optimal constant of the radial trace reduction,
/// using the literal M.
pub fn trace_bounds(
    a: &ExponentTuple,
    b: &ExponentTuple,
    p: f64,
    q: f64,
) -> Result<TraceBoundPair> {
    trace_bounds_with(a, b, p, q, TraceFormulaVariant::Literal)
}

pub fn trace_bounds_with(
    a: &ExponentTuple,
    b: &ExponentTuple,
    p: f64,
    q: f64,
    variant: TraceFormulaVariant,
) -> Result<TraceBoundPair> {
    let r = b.dim();
    if r >= a.dim() {
        return Err(Error::input(format!(
            "trace dimension r = {r} must be below d = {}",
            a.dim()
        )));
    }
    let d = a.effective_dimension();
    let rf = r as f64;
    if !(d > rf) {
        return Err(Error::domain(format!("D(A) = {d} must exceed r = {r}")));
    }
    guard_open(p, 1.0, d, "trace bounds")?;
    if !(q > 1.0) {
        return Err(Error::domain(format!("q = {q} must exceed 1")));
    }
    let d_r = b.effective_dimension();
    let ln_m = match variant {
        TraceFormulaVariant::Literal => {
            -d_r.ln() / rf + (1.0 - 1.0 / p) * ((p - 1.0).ln() - (d - rf).ln())
        }
        TraceFormulaVariant::Corrected => {
            -d_r.ln() / q + (1.0 - 1.0 / p) * ((p - 1.0).ln() - (d - p).ln())
        }
    };
    // ln(q/(q−1)) = −ln(1 − 1/q), accurate for large q
    let ln_q = -(1.0 - 1.0 / p) * (-1.0 / q).ln_1p() + q.ln() / q;
    let m = ln_m.exp();
    let q_factor = ln_q.exp();
    Ok(TraceBoundPair {
        m,
        q_factor,
        w_lower: m,
        w_upper: m * q_factor,
        variant,
    })
}
