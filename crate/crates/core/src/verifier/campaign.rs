//! Campaigns: a TOML file selecting checks, profiles and grids, expanded
//! into independent tasks and run in parallel with a deterministic result.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    check_scaling, check_sobolev_with, check_trace_radial_with, ProfileFamily, VerifyOptions,
};
use crate::calculus::{ProfileSpec, RadialProfile};
use crate::constants::TraceFormulaVariant;
use crate::error::{Error, Result};
use crate::gls::{check_morrey, verify_gls_sobolev_with, PsiConfig, PsiFunction};
use crate::monomial::{sobolev_exponent, ExponentTuple};
use crate::par;
use crate::quadrature::QuadOptions;
use crate::report::{InequalityId, Status, Tolerances, VerificationReport};

pub const DEFAULT_CAMPAIGN: &str = include_str!("../../campaigns/default.toml");

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub quad_rel_tol: Option<f64>,
    pub slack: Option<f64>,
}

/// Explicit profile names and/or `count` members of a sampled family.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ProfileSource {
    #[serde(default)]
    pub profiles: Vec<String>,
    pub family: Option<ProfileFamily>,
    #[serde(default)]
    pub count: usize,
}

impl ProfileSource {
    fn resolve(&self, seed: u64) -> Result<Vec<ProfileSpec>> {
        let mut out = self
            .profiles
            .iter()
            .map(|s| s.parse::<ProfileSpec>())
            .collect::<Result<Vec<_>>>()?;
        match (&self.family, self.count) {
            (Some(f), n) => out.extend(f.sample(n, seed)?),
            (None, 0) => {}
            (None, _) => return Err(Error::Config("`count` given without a `family`".into())),
        }
        if out.is_empty() {
            return Err(Error::Config("check selects no profiles".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CheckSpec {
    Sobolev {
        #[serde(rename = "A")]
        a: Vec<f64>,
        p: Vec<f64>,
        #[serde(default)]
        profiles: Vec<String>,
        family: Option<ProfileFamily>,
        #[serde(default)]
        count: usize,
    },
    GlsSobolev {
        #[serde(rename = "A")]
        a: Vec<f64>,
        psi: PsiConfig,
        #[serde(default)]
        profiles: Vec<String>,
        family: Option<ProfileFamily>,
        #[serde(default)]
        count: usize,
    },
    Trace {
        #[serde(rename = "A")]
        a: Vec<f64>,
        #[serde(rename = "B")]
        b: Vec<f64>,
        p: Vec<f64>,
        #[serde(default)]
        variant: TraceFormulaVariant,
        #[serde(default)]
        profiles: Vec<String>,
        family: Option<ProfileFamily>,
        #[serde(default)]
        count: usize,
    },
    Morrey {
        #[serde(rename = "A")]
        a: Vec<f64>,
        psi: PsiConfig,
        #[serde(default = "one")]
        c2: f64,
        delta: Vec<f64>,
        #[serde(default)]
        profiles: Vec<String>,
        family: Option<ProfileFamily>,
        #[serde(default)]
        count: usize,
    },
    Scaling {
        #[serde(rename = "A")]
        a: Vec<f64>,
        #[serde(rename = "B")]
        b: Vec<f64>,
        p: f64,
        q: Option<f64>,
        lambdas: Vec<f64>,
        #[serde(default)]
        profiles: Vec<String>,
        family: Option<ProfileFamily>,
        #[serde(default)]
        count: usize,
    },
}

fn one() -> f64 {
    1.0
}

impl CheckSpec {
    pub fn id(&self) -> InequalityId {
        match self {
            CheckSpec::Sobolev { .. } => InequalityId::Sobolev,
            CheckSpec::GlsSobolev { .. } => InequalityId::GlsSobolev,
            CheckSpec::Trace { .. } => InequalityId::Trace,
            CheckSpec::Morrey { .. } => InequalityId::Morrey,
            CheckSpec::Scaling { .. } => InequalityId::Scaling,
        }
    }

    fn source(&self) -> ProfileSource {
        let (profiles, family, count) = match self {
            CheckSpec::Sobolev {
                profiles,
                family,
                count,
                ..
            }
            | CheckSpec::GlsSobolev {
                profiles,
                family,
                count,
                ..
            }
            | CheckSpec::Trace {
                profiles,
                family,
                count,
                ..
            }
            | CheckSpec::Morrey {
                profiles,
                family,
                count,
                ..
            }
            | CheckSpec::Scaling {
                profiles,
                family,
                count,
                ..
            } => (profiles, family, count),
        };
        ProfileSource {
            profiles: profiles.clone(),
            family: family.clone(),
            count: *count,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CampaignConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

/// One expanded unit of work.
enum Task {
    Sobolev {
        u: RadialProfile,
        a: ExponentTuple,
        p: f64,
    },
    Gls {
        u: RadialProfile,
        a: ExponentTuple,
        psi: PsiFunction,
    },
    Trace {
        u: RadialProfile,
        a: ExponentTuple,
        b: ExponentTuple,
        p: f64,
        variant: TraceFormulaVariant,
    },
    Morrey {
        u: RadialProfile,
        a: ExponentTuple,
        psi: PsiFunction,
        c2: f64,
        delta: f64,
    },
    Scaling {
        u: RadialProfile,
        a: ExponentTuple,
        b: ExponentTuple,
        p: f64,
        q: f64,
        lambdas: Vec<f64>,
    },
}

impl Task {
    fn id(&self) -> InequalityId {
        match self {
            Task::Sobolev { .. } => InequalityId::Sobolev,
            Task::Gls { .. } => InequalityId::GlsSobolev,
            Task::Trace { .. } => InequalityId::Trace,
            Task::Morrey { .. } => InequalityId::Morrey,
            Task::Scaling { .. } => InequalityId::Scaling,
        }
    }

    fn label(&self) -> &str {
        match self {
            Task::Sobolev { u, .. }
            | Task::Gls { u, .. }
            | Task::Trace { u, .. }
            | Task::Morrey { u, .. }
            | Task::Scaling { u, .. } => u.label(),
        }
    }

    fn run(&self, opts: &VerifyOptions) -> Result<VerificationReport> {
        match self {
            Task::Sobolev { u, a, p } => check_sobolev_with(u, a, *p, opts),
            Task::Gls { u, a, psi } => verify_gls_sobolev_with(u, psi, a, &opts.gls, opts.slack),
            Task::Trace {
                u,
                a,
                b,
                p,
                variant,
            } => check_trace_radial_with(u, a, b, *p, *variant, opts),
            Task::Morrey {
                u,
                a,
                psi,
                c2,
                delta,
            } => check_morrey(u, psi, a, *c2, *delta, &opts.gls, opts.slack),
            Task::Scaling {
                u,
                a,
                b,
                p,
                q,
                lambdas,
            } => check_scaling(u, a, b, *p, *q, lambdas, opts),
        }
    }
}

fn tuple(v: &[f64]) -> Result<ExponentTuple> {
    ExponentTuple::new(v.to_vec()).map_err(|e| Error::Config(e.to_string()))
}

fn nonempty<T>(v: &[T], what: &str) -> Result<()> {
    if v.is_empty() {
        Err(Error::Config(format!("`{what}` must not be empty")))
    } else {
        Ok(())
    }
}

impl CampaignConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn default_campaign() -> Self {
        Self::from_toml(DEFAULT_CAMPAIGN).expect("bundled campaign parses")
    }

    pub fn options(&self) -> Result<VerifyOptions> {
        let mut opts = VerifyOptions::default();
        if let Some(t) = self.tolerances.quad_rel_tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Config(format!(
                    "quad-rel-tol = {t} must lie in (0, 1)"
                )));
            }
            opts.gls.quad = QuadOptions {
                rel_tol: t,
                ..opts.gls.quad
            };
        }
        if let Some(s) = self.tolerances.slack {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::Config(format!("slack = {s} must be non-negative")));
            }
            opts.slack = s;
        }
        Ok(opts)
    }

    /// Validates everything and builds the task list; nothing is integrated.
    fn expand(&self) -> Result<Vec<Task>> {
        let mut tasks = Vec::new();
        for (index, check) in self.checks.iter().enumerate() {
            let seed = self
                .seed
                .wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let specs = check.source().resolve(seed)?;
            let profiles = specs
                .iter()
                .map(|s| {
                    s.build()
                        .map_err(|e| Error::Config(format!("profile {s}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            match check {
                CheckSpec::Sobolev { a, p, .. } => {
                    let a = tuple(a)?;
                    nonempty(p, "p")?;
                    for u in &profiles {
                        for &p in p {
                            tasks.push(Task::Sobolev {
                                u: u.clone(),
                                a: a.clone(),
                                p,
                            });
                        }
                    }
                }
                CheckSpec::GlsSobolev { a, psi, .. } => {
                    let a = tuple(a)?;
                    let psi =
                        PsiFunction::from_config(psi).map_err(|e| Error::Config(e.to_string()))?;
                    crate::gls::zeta_transform(&psi, &a)
                        .map_err(|e| Error::Config(e.to_string()))?;
                    for u in &profiles {
                        tasks.push(Task::Gls {
                            u: u.clone(),
                            a: a.clone(),
                            psi: psi.clone(),
                        });
                    }
                }
                CheckSpec::Trace {
                    a, b, p, variant, ..
                } => {
                    let (a, b) = (tuple(a)?, tuple(b)?);
                    nonempty(p, "p")?;
                    for &p in p {
                        crate::monomial::trace_exponent(&a, &b, p)
                            .map_err(|e| Error::Config(e.to_string()))?;
                    }
                    for u in &profiles {
                        for &p in p {
                            tasks.push(Task::Trace {
                                u: u.clone(),
                                a: a.clone(),
                                b: b.clone(),
                                p,
                                variant: *variant,
                            });
                        }
                    }
                }
                CheckSpec::Morrey {
                    a, psi, c2, delta, ..
                } => {
                    let a = tuple(a)?;
                    let psi =
                        PsiFunction::from_config(psi).map_err(|e| Error::Config(e.to_string()))?;
                    crate::gls::psi_d_transform(&psi, a.effective_dimension(), *c2)
                        .map_err(|e| Error::Config(e.to_string()))?;
                    nonempty(delta, "delta")?;
                    if let Some(d) = delta.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
                        return Err(Error::Config(format!("delta = {d} must be positive")));
                    }
                    for u in &profiles {
                        for &delta in delta {
                            tasks.push(Task::Morrey {
                                u: u.clone(),
                                a: a.clone(),
                                psi: psi.clone(),
                                c2: *c2,
                                delta,
                            });
                        }
                    }
                }
                CheckSpec::Scaling {
                    a,
                    b,
                    p,
                    q,
                    lambdas,
                    ..
                } => {
                    let (a, b) = (tuple(a)?, tuple(b)?);
                    let q = match q {
                        Some(q) => *q,
                        None => sobolev_exponent(&a, &b, *p)
                            .map_err(|e| Error::Config(e.to_string()))?,
                    };
                    if lambdas.len() < 2 || lambdas.iter().any(|l| !(*l > 0.0)) {
                        return Err(Error::Config(
                            "`lambdas` needs two or more positive factors".into(),
                        ));
                    }
                    for u in &profiles {
                        tasks.push(Task::Scaling {
                            u: u.clone(),
                            a: a.clone(),
                            b: b.clone(),
                            p: *p,
                            q,
                            lambdas: lambdas.clone(),
                        });
                    }
                }
            }
        }
        Ok(tasks)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CampaignOutcome {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub reports: Vec<VerificationReport>,
}

impl CampaignOutcome {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.inconclusive == 0
    }
}

/// Runs every check; a check that errors at run time becomes an
/// inconclusive report. Reports are ordered by inputs digest.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignOutcome> {
    let opts = config.options()?;
    let tasks = config.expand()?;
    let mut reports = par::map(opts.gls.exec, &tasks, |task| match task.run(&opts) {
        Ok(r) => r,
        Err(e) => VerificationReport::inconclusive(
            task.id(),
            Tolerances {
                quad_rel_tol: opts.gls.quad.rel_tol,
                slack: opts.slack,
            },
            json!({ "profile": task.label(), "error": e.to_string() }),
            e.to_string(),
        ),
    });
    reports.sort_by(|x, y| x.inputs_digest.cmp(&y.inputs_digest));
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    Ok(CampaignOutcome {
        seed: config.seed,
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        inconclusive: count(Status::Inconclusive),
        reports,
    })
}

pub fn reports_to_jsonl(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&crate::json::to_string(r).expect("reports serialize"));
        out.push('\n');
    }
    out
}

/// Columns: inequality-id, ratio, pass, diagnostics.
pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("inequality-id,ratio,pass,diagnostics\n");
    for r in reports {
        let d = &r.quadrature_diagnostics;
        let _ = writeln!(
            out,
            "{},{:.16e},{},panels={};evaluations={};rel-err={:.3e};truncation={:.3e};status={}",
            r.inequality_id.as_str(),
            r.ratio,
            r.pass,
            d.panels,
            d.evaluations,
            d.achieved_rel_err,
            d.truncation_radius,
            serde_json::to_value(r.status)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
        );
    }
    out
}
