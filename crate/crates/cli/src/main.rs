//! `monosob` command-line front end. All numbers come straight from the
//! library; this file only parses, dispatches and formats.
//!
//! Exit status: 0 success, 1 an inequality check failed, 2 bad input
//! (usage, domain, configuration, divergent integral), 3 inconclusive or
//! numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monosob::calculus::{Component, ProfileSpec, RadialProfile, WeightedMeasure};
use monosob::constants::trace_bounds_with;
use monosob::gls::{
    check_morrey, fundamental_function_with, gls_norm_with, zeta_transform, GlsOptions, PsiFunction,
};
use monosob::quadrature::QuadOptions;
use monosob::verifier::{
    check_trace_radial_with, fit_scaling_exponents_with, reports_to_csv, reports_to_jsonl,
    VerifyOptions,
};
use monosob::{
    json, monomial_c, monomial_c1, run_campaign, sobolev_exponent, talenti_constant,
    trace_exponent, CampaignConfig, Error, ExponentTuple, Status, TraceFormulaVariant,
    VerificationReport,
};
use serde_json::{json as j, Map, Value};

const CONFIG_DIR_ENV: &str = "MONOSOB_CONFIG_DIR";

#[derive(Parser)]
#[command(
    name = "monosob",
    version,
    about = "Sharp Sobolev constants and inequality checks for monomial weights"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    output: Output,
    /// Overrides the campaign seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Relative slack allowed on a pass.
    #[arg(long, global = true)]
    slack: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// D(A), the exponents and the closed-form constants.
    Constants {
        #[arg(long = "A")]
        a: String,
        #[arg(long)]
        p: f64,
        /// Trace exponents; adds q and the M, Q factors.
        #[arg(long = "B")]
        b: Option<String>,
        #[arg(long, value_enum, default_value_t = Variant::Literal)]
        variant: Variant,
    },
    /// Weighted L_p norm of a profile or its gradient.
    Norm {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        p: f64,
    },
    /// Grand Lebesgue norm sup_p |f|_p/ψ(p).
    GlsNorm {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        psi: String,
    },
    /// Fundamental function φ(δ) = sup δ^{1/p}/ψ(p).
    Fundamental {
        #[arg(long)]
        psi: String,
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<f64>,
    },
    /// ζ(q) = C(p(q))·ψ(p(q)) at the given q.
    Zeta {
        #[arg(long = "A")]
        a: String,
        #[arg(long)]
        psi: String,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<f64>,
    },
    /// Modulus of continuity against the Grand Lebesgue Morrey bound.
    Morrey {
        #[arg(long = "A")]
        a: String,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
    },
    /// Fitted dilation slopes of both sides.
    Scaling {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long)]
        p: f64,
        /// Defaults to the balancing exponent.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        profile: String,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4")]
        lambdas: Vec<f64>,
    },
    /// Radial trace reduction against its two-sided bracket.
    Trace {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        profile: String,
        #[arg(long, value_enum, default_value_t = Variant::Literal)]
        variant: Variant,
    },
    /// Run a TOML campaign; the bundled one when --config is omitted.
    Campaign {
        /// Relative paths are looked up in $MONOSOB_CONFIG_DIR first.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long = "A")]
    a: String,
    #[arg(long)]
    profile: String,
    #[arg(long)]
    gradient: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Literal,
    Corrected,
}

impl From<Variant> for TraceFormulaVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Literal => TraceFormulaVariant::Literal,
            Variant::Corrected => TraceFormulaVariant::Corrected,
        }
    }
}

enum Outcome {
    Value(Value),
    Reports(Vec<VerificationReport>),
    /// A computed value that also carries a verdict.
    Verdict(Value, Status),
}

fn tuple(s: &str) -> Result<ExponentTuple, Error> {
    let entries = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Input(format!("cannot parse exponent {t:?} in {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ExponentTuple::new(entries)
}

fn profile(s: &str) -> Result<RadialProfile, Error> {
    s.parse::<ProfileSpec>()?.build()
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

struct Settings {
    opts: VerifyOptions,
    seed: Option<u64>,
    overrides: bool,
}

impl Settings {
    fn new(cli: &Cli) -> Result<Self, Error> {
        let mut opts = VerifyOptions::default();
        if let Some(t) = cli.rel_tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Input(format!("--rel-tol {t} must lie in (0, 1)")));
            }
            opts.gls.quad = QuadOptions {
                rel_tol: t,
                ..opts.gls.quad
            };
        }
        if let Some(s) = cli.slack {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::Input(format!("--slack {s} must be non-negative")));
            }
            opts.slack = s;
        }
        Ok(Settings {
            opts,
            seed: cli.seed,
            overrides: cli.rel_tol.is_some() || cli.slack.is_some(),
        })
    }

    fn gls(&self) -> GlsOptions {
        self.opts.gls
    }
}

fn resolve_config(path: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        if let Some(dir) = std::env::var_os(CONFIG_DIR_ENV) {
            return Path::new(&dir).join(path);
        }
    }
    path.to_path_buf()
}

fn run(command: &Command, s: &Settings) -> Result<Outcome, Error> {
    Ok(match command {
        Command::Constants { a, p, b, variant } => {
            let a = tuple(a)?;
            let d = a.effective_dimension();
            let mut out = Map::new();
            out.insert("D".into(), j!(d));
            out.insert("p".into(), j!(p));
            out.insert("q".into(), j!(sobolev_exponent(&a, &a, *p)?));
            out.insert("C1".into(), j!(monomial_c1(&a)?));
            out.insert("C(p)".into(), j!(monomial_c(&a, *p)?));
            if a.is_zero() && a.dim() >= 3 {
                out.insert("talenti".into(), j!(talenti_constant(a.dim(), *p)?));
            }
            if let Some(b) = b {
                let b = tuple(b)?;
                let q = trace_exponent(&a, &b, *p)?;
                out.insert("trace-q".into(), j!(q));
                out.insert(
                    "trace-bounds".into(),
                    to_value(&trace_bounds_with(&a, &b, *p, q, (*variant).into())?),
                );
            }
            Outcome::Value(Value::Object(out))
        }
        Command::Norm { target, p } => {
            let measure = WeightedMeasure::with_options(tuple(&target.a)?, s.opts.gls.quad);
            let component = if target.gradient {
                Component::Gradient
            } else {
                Component::Value
            };
            Outcome::Value(to_value(&measure.norm(
                &profile(&target.profile)?,
                component,
                *p,
            )?))
        }
        Command::GlsNorm { target, psi } => {
            let component = if target.gradient {
                Component::Gradient
            } else {
                Component::Value
            };
            let sup = gls_norm_with(
                &profile(&target.profile)?,
                component,
                &PsiFunction::from_json(psi)?,
                &tuple(&target.a)?,
                &s.gls(),
            )?;
            Outcome::Value(to_value(&sup))
        }
        Command::Fundamental { psi, delta } => {
            let psi = PsiFunction::from_json(psi)?;
            let rows = delta
                .iter()
                .map(|d| Ok(j!({ "delta": d, "phi": to_value(&fundamental_function_with(&psi, *d, &s.gls())?) })))
                .collect::<Result<Vec<_>, Error>>()?;
            Outcome::Value(Value::Array(rows))
        }
        Command::Zeta { a, psi, q } => {
            let zeta = zeta_transform(&PsiFunction::from_json(psi)?, &tuple(a)?)?;
            let rows = q
                .iter()
                .map(|q| {
                    if zeta.contains(*q) {
                        Ok(j!({ "q": q, "zeta": zeta.eval(*q) }))
                    } else {
                        let (lo, hi) = zeta.support();
                        Err(Error::Domain(format!(
                            "q = {q} lies outside supp ζ = ({lo}, {hi})"
                        )))
                    }
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Outcome::Value(Value::Array(rows))
        }
        Command::Morrey {
            a,
            profile: u,
            psi,
            delta,
            c2,
        } => {
            let r = check_morrey(
                &profile(u)?,
                &PsiFunction::from_json(psi)?,
                &tuple(a)?,
                *c2,
                *delta,
                &s.gls(),
                s.opts.slack,
            )?;
            Outcome::Reports(vec![r])
        }
        Command::Scaling {
            a,
            b,
            p,
            q,
            profile: u,
            lambdas,
        } => {
            let (a, b) = (tuple(a)?, tuple(b)?);
            let q = match q {
                Some(q) => *q,
                None => sobolev_exponent(&a, &b, *p)?,
            };
            let fit = fit_scaling_exponents_with(&profile(u)?, &a, &b, *p, q, lambdas, &s.opts)?;
            let status = if fit.balanced {
                Status::Pass
            } else {
                Status::Fail
            };
            Outcome::Verdict(to_value(&fit), status)
        }
        Command::Trace {
            a,
            b,
            p,
            profile: u,
            variant,
        } => {
            let r = check_trace_radial_with(
                &profile(u)?,
                &tuple(a)?,
                &tuple(b)?,
                *p,
                (*variant).into(),
                &s.opts,
            )?;
            Outcome::Reports(vec![r])
        }
        Command::Campaign { config } => {
            let mut cfg = match config {
                Some(path) => {
                    let path = resolve_config(path);
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                    CampaignConfig::from_toml(&text)?
                }
                None => CampaignConfig::default_campaign(),
            };
            if let Some(seed) = s.seed {
                cfg.seed = seed;
            }
            if s.overrides {
                cfg.tolerances.quad_rel_tol = Some(s.opts.gls.quad.rel_tol);
                cfg.tolerances.slack = Some(s.opts.slack);
            }
            Outcome::Reports(run_campaign(&cfg)?.reports)
        }
    })
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, rows);
            }
        }
        other => rows.push((prefix.to_string(), json::to_string(other).unwrap())),
    }
}

fn render_value(v: &Value, output: Output) -> String {
    match output {
        Output::Json => json::to_string(v).unwrap() + "\n",
        Output::Pretty => json::to_string_pretty(v).unwrap() + "\n",
        Output::Csv => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            let mut out = String::from("key,value\n");
            for (k, v) in rows {
                out.push_str(&format!("{k},{}\n", v.replace(',', ";")));
            }
            out
        }
    }
}

fn render_reports(reports: &[VerificationReport], output: Output) -> String {
    match output {
        Output::Json => reports_to_jsonl(reports),
        Output::Csv => reports_to_csv(reports),
        Output::Pretty => {
            let mut out = format!(
                "{:<12} {:<12} {:>24} {:<8}\n",
                "id", "status", "ratio", "digest"
            );
            for r in reports {
                out.push_str(&format!(
                    "{:<12} {:<12} {:>24} {:<8}\n",
                    r.inequality_id.as_str(),
                    json::to_string(&r.status).unwrap().trim_matches('"'),
                    json::to_string(&r.ratio).unwrap(),
                    r.inputs_digest
                ));
            }
            out
        }
    }
}

fn status_code(statuses: impl IntoIterator<Item = Status>) -> u8 {
    let mut code = 0;
    for s in statuses {
        match s {
            Status::Fail => code = 1,
            Status::Inconclusive if code == 0 => code = 3,
            _ => {}
        }
    }
    code
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Numerical { .. } => 3,
        Error::Domain(_) | Error::Input(_) | Error::Config(_) | Error::Divergent(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Settings::new(&cli).and_then(|s| run(&cli.command, &s));
    match result {
        Ok(Outcome::Value(v)) => {
            print!("{}", render_value(&v, cli.output));
            ExitCode::SUCCESS
        }
        Ok(Outcome::Verdict(v, status)) => {
            print!("{}", render_value(&v, cli.output));
            ExitCode::from(status_code([status]))
        }
        Ok(Outcome::Reports(reports)) => {
            print!("{}", render_reports(&reports, cli.output));
            ExitCode::from(status_code(reports.iter().map(|r| r.status)))
        }
        Err(e) => {
            eprintln!("monosob: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
