//! Sampled modulus of continuity of a radial function.
//!
//! For u(x) = g(|x|) and any r1, r2 ≥ 0 with |r1 − r2| ≤ δ there are points
//! on one ray realizing |x − y| = |r1 − r2|, and ||x| − |y|| ≤ |x − y| in
//! general, so ω(u, δ) = sup{|g(r1) − g(r2)| : |r1 − r2| ≤ δ}. The sup is
//! taken over a uniform radial grid with a sliding window, which gives a
//! lower estimate converging as the grid is refined.

use std::collections::VecDeque;

use super::{RadialProfile, SupportHint};
use crate::error::{Error, Result};

pub const DEFAULT_MODULUS_SAMPLES: usize = 1 << 16;

/// Radius beyond which |g| is below 1e-14 of its largest sampled value.
fn effective_radius(u: &RadialProfile) -> f64 {
    match u.support() {
        SupportHint::Compact { radius } => radius,
        SupportHint::Decaying { from_radius, .. } => {
            let head = (0..=256)
                .map(|k| u.value(from_radius * k as f64 / 256.0).abs())
                .fold(0.0, f64::max);
            let mut r = from_radius;
            for _ in 0..60 {
                if u.value(r).abs() <= 1e-14 * head {
                    break;
                }
                r *= 2.0;
            }
            r
        }
    }
}

/// ω(u, δ) from `samples` grid points on [0, R], where u is negligible past R.
pub fn modulus_of_continuity(u: &RadialProfile, delta: f64, samples: usize) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!(
            "δ = {delta} must be positive and finite"
        )));
    }
    if samples < 2 {
        return Err(Error::input(
            "modulus of continuity needs at least two samples",
        ));
    }
    let radius = effective_radius(u);
    let h = radius / (samples - 1) as f64;
    let g: Vec<f64> = (0..samples).map(|i| u.value(i as f64 * h)).collect();
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical {
            message: format!("{} is not finite on [0, {radius:e}]", u.label()),
            diagnostics: Default::default(),
        });
    }

    let width = ((delta / h).floor() as usize).min(samples - 1);
    let mut omega: f64 = 0.0;
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    for (i, &v) in g.iter().enumerate() {
        while maxq.back().is_some_and(|&j| g[j] <= v) {
            maxq.pop_back();
        }
        maxq.push_back(i);
        while minq.back().is_some_and(|&j| g[j] >= v) {
            minq.pop_back();
        }
        minq.push_back(i);
        let start = i.saturating_sub(width);
        while maxq.front().is_some_and(|&j| j < start) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&j| j < start) {
            minq.pop_front();
        }
        omega = omega.max(g[maxq[0]] - g[minq[0]]);
    }
    // pairs reaching past the support, where u = 0
    let first = samples.saturating_sub(width + 1);
    for &v in &g[first..] {
        omega = omega.max(v.abs());
    }
    Ok(omega)
}
