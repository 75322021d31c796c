//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Global subdivision driven by a max-heap on the per-panel error estimate,
//! with the QUADPACK error heuristic. Breakpoints can be supplied so that
//! panels never straddle known kinks or scale changes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss 7-point weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Improper radial integrals are extended at least this far, even when
    /// the tail has already converged.
    pub min_truncation_radius: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_subdivisions: 4000,
            min_truncation_radius: 0.0,
        }
    }
}

/// Bookkeeping carried into reports.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct QuadDiagnostics {
    pub panels: usize,
    pub evaluations: usize,
    pub achieved_rel_err: f64,
    pub truncation_radius: f64,
}

impl QuadDiagnostics {
    /// Combine diagnostics of independent integrals.
    pub fn merge(self, other: QuadDiagnostics) -> QuadDiagnostics {
        QuadDiagnostics {
            panels: self.panels + other.panels,
            evaluations: self.evaluations + other.evaluations,
            achieved_rel_err: self.achieved_rel_err.max(other.achieved_rel_err),
            truncation_radius: self.truncation_radius.max(other.truncation_radius),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !res_k.is_finite() {
        if res_k.is_infinite() {
            return Err(Error::Divergent(format!(
                "integrand is infinite on [{a}, {b}]"
            )));
        }
        return Err(Error::Numerical {
            message: format!("integrand is not finite on [{a}, {b}]"),
            diagnostics: QuadDiagnostics::default(),
        });
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    res_asc *= h;
    res_abs *= h;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel {
        a,
        b,
        value: res_k * half,
        error: err,
    })
}

/// ∫_a^b f over the interval, subdividing adaptively.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    integrate_with_breaks(f, &[a, b], opts)
}

/// Like [`integrate`] but starts from the panels delimited by `breaks`
/// (sorted, at least two points).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::input("quadrature breakpoints must be sorted"));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod15(&f, w[0], w[1])?);
            evaluations += 15;
        }
    }
    if heap.is_empty() {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            panels: 0,
            evaluations: 0,
        });
    }
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadResult {
                value,
                error,
                panels: heap.len(),
                evaluations,
            });
        }
        if heap.len() >= opts.max_subdivisions {
            return Err(Error::Numerical {
                message: format!(
                    "tolerance {target:e} not met after {} subdivisions (error {error:e})",
                    heap.len()
                ),
                diagnostics: QuadDiagnostics {
                    panels: heap.len(),
                    evaluations,
                    achieved_rel_err: error / value.abs().max(f64::MIN_POSITIVE),
                    truncation_radius: 0.0,
                },
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel cannot be split further in floating point; its error is
            // at the roundoff floor, accept it as exact.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            continue;
        }
        heap.push(kronrod15(&f, worst.a, mid)?);
        heap.push(kronrod15(&f, mid, worst.b)?);
        evaluations += 30;
    }
}
