//! Structured outcome of a numerical inequality check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::quadrature::QuadDiagnostics;

/// Default multiplicative slack on the ratio before a check counts as failed.
pub const DEFAULT_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityId {
    /// Weighted Sobolev inequality with the sharp constant C(p), A = B.
    Sobolev,
    /// Grand Lebesgue form with constant one and the ζ-transformed ψ.
    GlsSobolev,
    /// Radial trace reduction against the bracket [M, M·Q].
    Trace,
    /// Modulus of continuity against the fundamental-function bound.
    Morrey,
    /// Balance of the dilation exponents of both sides.
    Scaling,
}

impl InequalityId {
    pub const ALL: [InequalityId; 5] = [
        InequalityId::Sobolev,
        InequalityId::GlsSobolev,
        InequalityId::Trace,
        InequalityId::Morrey,
        InequalityId::Scaling,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::Sobolev => "sobolev",
            InequalityId::GlsSobolev => "gls-sobolev",
            InequalityId::Trace => "trace",
            InequalityId::Morrey => "morrey",
            InequalityId::Scaling => "scaling",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A required quantity was infinite, zero or not certifiable.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Tolerances {
    pub quad_rel_tol: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct VerificationReport {
    pub inequality_id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    /// lhs / (constant · rhs)
    pub ratio: f64,
    pub status: Status,
    pub pass: bool,
    pub tolerances: Tolerances,
    pub quadrature_diagnostics: QuadDiagnostics,
    pub inputs_digest: String,
    pub inputs: serde_json::Value,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Stable digest of a JSON value (keys are sorted by serde_json's map).
pub fn inputs_digest(inputs: &serde_json::Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("JSON values always serialize");
    let hash = Sha256::digest(&bytes);
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

impl VerificationReport {
    /// Assembles a report; status follows from the ratio and slack.
    pub fn new(
        inequality_id: InequalityId,
        lhs: f64,
        rhs: f64,
        constant: f64,
        tolerances: Tolerances,
        quadrature_diagnostics: QuadDiagnostics,
        inputs: serde_json::Value,
    ) -> Self {
        let ratio = lhs / (constant * rhs);
        let status = if !ratio.is_finite() || !(rhs > 0.0) || !(constant > 0.0) {
            Status::Inconclusive
        } else if ratio <= 1.0 + tolerances.slack {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            inequality_id,
            lhs,
            rhs,
            constant,
            ratio,
            status,
            pass: status == Status::Pass,
            tolerances,
            quadrature_diagnostics,
            inputs_digest: inputs_digest(&inputs),
            inputs,
            details: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// A report for a check that could not be carried out numerically.
    pub fn inconclusive(
        inequality_id: InequalityId,
        tolerances: Tolerances,
        inputs: serde_json::Value,
        reason: impl Into<String>,
    ) -> Self {
        let mut r = Self::new(
            inequality_id,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            tolerances,
            QuadDiagnostics::default(),
            inputs,
        );
        r.notes.push(reason.into());
        r
    }

    pub fn with_detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(serde_json::Value::Null),
        );
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}
