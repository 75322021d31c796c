//! Importance-sampled Monte Carlo over R^m, used as an oracle for the
//! radial reduction.
//!
//! Samples come in fixed-size batches; batch i draws from a ChaCha8 stream
//! keyed by (seed, i) and the batch sums are folded in index order, so the
//! estimate is bit-identical for a given seed whatever the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::monomial::ExponentTuple;
use crate::par::{self, Execution};
use crate::quadrature::QuadDiagnostics;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub samples: usize,
    pub seed: u64,
    /// Base standard deviation of the Gaussian proposal.
    pub scale: f64,
    pub batch_size: usize,
    pub exec: Execution,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            samples: 100_000,
            seed: 0,
            scale: 1.0,
            batch_size: 4096,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    pub effective_sample_size: f64,
}

#[derive(Default, Clone, Copy)]
struct BatchSums {
    sum: f64,
    sum_sq: f64,
    sum_abs: f64,
}

fn batches(cfg: &SamplerConfig) -> Result<Vec<usize>> {
    if cfg.samples < 2 || cfg.batch_size == 0 {
        return Err(Error::input(
            "Monte Carlo needs at least 2 samples and a positive batch size",
        ));
    }
    let full = cfg.samples / cfg.batch_size;
    let mut sizes = vec![cfg.batch_size; full];
    if !cfg.samples.is_multiple_of(cfg.batch_size) {
        sizes.push(cfg.samples % cfg.batch_size);
    }
    Ok(sizes)
}

fn batch_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn finish(sums: &[BatchSums], n: usize) -> McEstimate {
    let total = sums.iter().fold(BatchSums::default(), |acc, s| BatchSums {
        sum: acc.sum + s.sum,
        sum_sq: acc.sum_sq + s.sum_sq,
        sum_abs: acc.sum_abs + s.sum_abs,
    });
    let nf = n as f64;
    let mean = total.sum / nf;
    let var = ((total.sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    let ess = if total.sum_sq > 0.0 {
        total.sum_abs * total.sum_abs / total.sum_sq
    } else {
        nf
    };
    McEstimate {
        estimate: mean,
        std_error: (var / nf).sqrt(),
        samples: n,
        effective_sample_size: ess,
    }
}

/// Unbiased estimate of ∫_{R^m} f(x)·∏|x_i|^{A_i} dx.
///
/// The proposal is a product Gaussian with per-axis deviation
/// scale·√(1+A_i); weights target/proposal are formed in log space.
pub fn monte_carlo_weighted_integral<F>(
    f: F,
    a: &ExponentTuple,
    cfg: &SamplerConfig,
) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if !(cfg.scale > 0.0) {
        return Err(Error::input("proposal scale must be positive"));
    }
    let m = a.dim();
    let sigmas: Vec<f64> = a
        .entries()
        .iter()
        .map(|ai| cfg.scale * (1.0 + ai).sqrt())
        .collect();
    let ln_norm: f64 = sigmas
        .iter()
        .map(|s| s.ln() + 0.5 * (2.0 * std::f64::consts::PI).ln())
        .sum();
    let sizes = batches(cfg)?;
    let indexed: Vec<(usize, usize)> = sizes.into_iter().enumerate().collect();
    let sums = par::map(cfg.exec, &indexed, |&(index, size)| {
        let mut rng = batch_rng(cfg.seed, index);
        let mut x = vec![0.0; m];
        let mut acc = BatchSums::default();
        for _ in 0..size {
            let mut ln_proposal = -ln_norm;
            for (xi, s) in x.iter_mut().zip(&sigmas) {
                let z: f64 = rng.sample(StandardNormal);
                *xi = s * z;
                ln_proposal -= 0.5 * z * z;
            }
            let fx = f(&x);
            if fx == 0.0 {
                continue;
            }
            let ln_weight: f64 = a
                .entries()
                .iter()
                .zip(&x)
                .map(|(ai, xi)| if *ai == 0.0 { 0.0 } else { ai * xi.abs().ln() })
                .sum();
            let w = fx.signum() * (fx.abs().ln() + ln_weight - ln_proposal).exp();
            acc.sum += w;
            acc.sum_sq += w * w;
            acc.sum_abs += w.abs();
        }
        acc
    });
    let est = finish(&sums, cfg.samples);
    if !est.estimate.is_finite() || !est.std_error.is_finite() {
        return Err(Error::Numerical {
            message: "importance weights overflowed".into(),
            diagnostics: QuadDiagnostics::default(),
        });
    }
    if est.effective_sample_size < (cfg.samples as f64 * 1e-3).max(10.0) {
        return Err(Error::Numerical {
            message: format!(
                "proposal does not cover the integrand: effective sample size {:.1} of {}",
                est.effective_sample_size, cfg.samples
            ),
            diagnostics: QuadDiagnostics::default(),
        });
    }
    Ok(est)
}

/// Monte Carlo estimate of σ_A = ∫_{S^{m−1}} ∏|θ_i|^{A_i} dθ from
/// uniformly distributed directions.
pub fn monte_carlo_angular_mass(a: &ExponentTuple, cfg: &SamplerConfig) -> Result<McEstimate> {
    let m = a.dim();
    let mf = m as f64;
    let sphere_area =
        (std::f64::consts::LN_2 + 0.5 * mf * std::f64::consts::PI.ln() - ln_gamma(0.5 * mf)).exp();
    let sizes = batches(cfg)?;
    let indexed: Vec<(usize, usize)> = sizes.into_iter().enumerate().collect();
    let sums = par::map(cfg.exec, &indexed, |&(index, size)| {
        let mut rng = batch_rng(cfg.seed, index);
        let mut x = vec![0.0; m];
        let mut acc = BatchSums::default();
        for _ in 0..size {
            for xi in x.iter_mut() {
                *xi = rng.sample(StandardNormal);
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let w = sphere_area
                * a.entries()
                    .iter()
                    .zip(&x)
                    .map(|(ai, xi)| {
                        if *ai == 0.0 {
                            1.0
                        } else {
                            (xi.abs() / norm).powf(*ai)
                        }
                    })
                    .product::<f64>();
            acc.sum += w;
            acc.sum_sq += w * w;
            acc.sum_abs += w.abs();
        }
        acc
    });
    Ok(finish(&sums, cfg.samples))
}
