//! Exponent tuples, monomial weights and the exponent algebra forced by
//! dilation invariance.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tuple of non-negative exponents defining the weight ∏|x_i|^{A_i}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExponentTuple {
    entries: Vec<f64>,
}

impl ExponentTuple {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::input("exponent tuple must have at least one entry"));
        }
        if let Some(bad) = entries.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::input(format!(
                "exponents must be finite and non-negative, got {bad}"
            )));
        }
        Ok(ExponentTuple { entries })
    }

    /// The unweighted tuple (0, …, 0) in dimension m.
    pub fn zeros(m: usize) -> Result<Self> {
        Self::new(vec![0.0; m])
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Ambient dimension m.
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Number k of strictly positive entries.
    pub fn positive_count(&self) -> usize {
        self.entries.iter().filter(|a| **a > 0.0).count()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    /// D(A) = m + ΣA(i).
    pub fn effective_dimension(&self) -> f64 {
        self.dim() as f64 + self.sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|a| *a == 0.0)
    }

    /// Leading r entries, as used for the trace exponent D_r.
    pub fn prefix(&self, r: usize) -> Result<ExponentTuple> {
        if r == 0 || r > self.dim() {
            return Err(Error::input(format!(
                "prefix length {r} out of range 1..={}",
                self.dim()
            )));
        }
        ExponentTuple::new(self.entries[..r].to_vec())
    }

    /// ∏|x_i|^{A_i} with 0^0 = 1.
    pub fn weight(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::input(format!(
                "point has dimension {}, weight expects {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(x)
            .map(|(a, xi)| if *a == 0.0 { 1.0 } else { xi.abs().powf(*a) })
            .product())
    }
}

impl TryFrom<Vec<f64>> for ExponentTuple {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        ExponentTuple::new(v)
    }
}

impl From<ExponentTuple> for Vec<f64> {
    fn from(t: ExponentTuple) -> Self {
        t.entries
    }
}

impl FromStr for ExponentTuple {
    type Err = Error;

    /// Comma-separated decimals, e.g. `1,2` or `0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::input(format!("cannot parse exponent {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ExponentTuple::new(entries)
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn effective_dimension(a: &ExponentTuple) -> f64 {
    a.effective_dimension()
}

pub fn monomial_weight(a: &ExponentTuple, x: &[f64]) -> Result<f64> {
    a.weight(x)
}

fn check_p_range(p: f64, d_a: f64) -> Result<()> {
    if !(d_a > 1.0) {
        return Err(Error::domain(format!(
            "effective dimension D(A) = {d_a} must exceed 1"
        )));
    }
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p = {p} must be at least 1")));
    }
    if !(p < d_a) {
        return Err(Error::domain(format!("p = {p} must be below D(A) = {d_a}")));
    }
    Ok(())
}

/// q = D(B)·p / (D(A) − p): the only exponent compatible with dilations.
pub fn sobolev_exponent(a: &ExponentTuple, b: &ExponentTuple, p: f64) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::input(format!(
            "A has dimension {} but B has dimension {}",
            a.dim(),
            b.dim()
        )));
    }
    let d_a = a.effective_dimension();
    check_p_range(p, d_a)?;
    Ok(b.effective_dimension() * p / (d_a - p))
}

/// q = D_r(B)·p / (D(A) − p) for the restriction to the first r coordinates.
pub fn trace_exponent(a: &ExponentTuple, b: &ExponentTuple, p: f64) -> Result<f64> {
    let (d, r) = (a.dim(), b.dim());
    if r >= d {
        return Err(Error::input(format!(
            "trace dimension r = {r} must be below the full dimension d = {d}"
        )));
    }
    let d_a = a.effective_dimension();
    check_p_range(p, d_a)?;
    Ok(b.effective_dimension() * p / (d_a - p))
}

/// Inverse of q = Dp/(D−p) for A = B: p = qD/(q + D).
pub fn p_from_q(d: f64, q: f64) -> f64 {
    q * d / (q + d)
}

/// q = Dp/(D−p) for A = B.
pub fn q_from_p(d: f64, p: f64) -> f64 {
    d * p / (d - p)
}

/// The quadruple (A, B, p, q); `valid` is derived from the scaling relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevFour {
    #[serde(rename = "A")]
    a: ExponentTuple,
    #[serde(rename = "B")]
    b: ExponentTuple,
    p: f64,
    q: f64,
    valid: bool,
}

impl SobolevFour {
    /// Builds the four with q from the scaling relation.
    pub fn new(a: ExponentTuple, b: ExponentTuple, p: f64) -> Result<Self> {
        let q = sobolev_exponent(&a, &b, p)?;
        Ok(SobolevFour {
            a,
            b,
            p,
            q,
            valid: true,
        })
    }

    /// Builds the trace four with B over the first r coordinates.
    pub fn trace(a: ExponentTuple, b: ExponentTuple, p: f64) -> Result<Self> {
        let q = trace_exponent(&a, &b, p)?;
        Ok(SobolevFour {
            a,
            b,
            p,
            q,
            valid: true,
        })
    }

    /// Builds a four with a caller-chosen q; `valid` records whether q
    /// satisfies the scaling relation to 1e-14 relative.
    pub fn with_q(a: ExponentTuple, b: ExponentTuple, p: f64, q: f64) -> Result<Self> {
        if !(q > 0.0) {
            return Err(Error::domain(format!("q = {q} must be positive")));
        }
        let expected = if b.dim() < a.dim() {
            trace_exponent(&a, &b, p)?
        } else {
            sobolev_exponent(&a, &b, p)?
        };
        let valid = ((q - expected) / expected).abs() <= 1e-14;
        Ok(SobolevFour { a, b, p, q, valid })
    }

    pub fn a(&self) -> &ExponentTuple {
        &self.a
    }

    pub fn b(&self) -> &ExponentTuple {
        &self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }
}
