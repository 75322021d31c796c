//! Sharp Sobolev constants for monomial weights ∏|x_i|^{A_i}, Grand
//! Lebesgue norms, and numerical verification of the associated
//! inequalities on radial profiles.
//!
//! Data-parallel loops (exponent grids, Monte Carlo batches, campaigns) use
//! rayon when the `parallel` feature is on; see [`par::Execution`].

#![allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail range checks

pub mod calculus;
pub mod constants;
pub mod error;
pub mod gamma;
pub mod gls;
pub mod json;
pub mod monomial;
pub mod par;
pub mod quadrature;
pub mod report;
pub mod verifier;

pub use calculus::{
    dilate, weighted_gradient_norm, weighted_lp_norm, ProfileSpec, RadialProfile, SupportHint,
};
pub use constants::{
    monomial_c, monomial_c1, talenti_constant, trace_bounds, TraceBoundPair, TraceFormulaVariant,
};
pub use error::{Error, Result};
pub use gamma::{gamma, ln_gamma};
pub use gls::{
    fundamental_function, gls_norm, morrey_bound, verify_gls_sobolev, PsiFunction, Supremum,
};
pub use monomial::{
    effective_dimension, monomial_weight, sobolev_exponent, trace_exponent, ExponentTuple,
    SobolevFour,
};
pub use par::Execution;
pub use report::{InequalityId, Status, VerificationReport};
pub use verifier::{
    check_sobolev, check_trace_radial, extremal_profile, fit_scaling_exponents, run_campaign,
    CampaignConfig,
};
