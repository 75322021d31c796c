//! Deterministic profile families: Halton points over a parameter box with
//! a seeded Cranley–Patterson rotation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::ProfileSpec;
use crate::error::{Error, Result};

const HALTON_BASES: [u64; 4] = [2, 3, 5, 7];

/// Van der Corput radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut x = 0.0;
    while i > 0 {
        x += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    x
}

/// Which constructor the box parameters feed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// [radius]
    Bump,
    /// [radius, width as a fraction of the radius]
    Plateau,
    /// [radius]
    Tent,
    /// [scale]
    Gaussian,
    /// [tail exponent]
    PowerTail,
    /// [D, p]
    Extremal,
}

impl FamilyKind {
    pub fn arity(self) -> usize {
        match self {
            FamilyKind::Plateau | FamilyKind::Extremal => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ProfileFamily {
    pub kind: FamilyKind,
    /// One closed interval per parameter.
    pub bounds: Vec<[f64; 2]>,
}

impl ProfileFamily {
    pub fn new(kind: FamilyKind, bounds: Vec<[f64; 2]>) -> Result<Self> {
        let f = ProfileFamily { kind, bounds };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bounds.len() != self.kind.arity() {
            return Err(Error::Config(format!(
                "{:?} family takes {} parameter interval(s), got {}",
                self.kind,
                self.kind.arity(),
                self.bounds.len()
            )));
        }
        for [lo, hi] in &self.bounds {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(format!(
                    "bad parameter interval [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    /// `n` members; identical for identical seeds.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<ProfileSpec>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift: Vec<f64> = (0..self.bounds.len())
            .map(|_| rng.random::<f64>())
            .collect();
        (0..n)
            .map(|i| {
                let x: Vec<f64> = self
                    .bounds
                    .iter()
                    .zip(&shift)
                    .zip(HALTON_BASES)
                    .map(|(([lo, hi], s), base)| {
                        let u = (radical_inverse(i as u64 + 1, base) + s).fract();
                        lo + (hi - lo) * u
                    })
                    .collect();
                let spec = match self.kind {
                    FamilyKind::Bump => ProfileSpec::Bump { radius: x[0] },
                    FamilyKind::Plateau => ProfileSpec::Plateau {
                        radius: x[0],
                        width: x[0] * x[1],
                    },
                    FamilyKind::Tent => ProfileSpec::Tent { radius: x[0] },
                    FamilyKind::Gaussian => ProfileSpec::Gaussian { scale: x[0] },
                    FamilyKind::PowerTail => ProfileSpec::PowerTail { exponent: x[0] },
                    FamilyKind::Extremal => ProfileSpec::Extremal { dim: x[0], p: x[1] },
                };
                // every member must build
                spec.build()?;
                Ok(spec)
            })
            .collect()
    }
}
