//! Seeded synthetic data sets.
//!
//! The generator is SplitMix64 used in counter mode: draw `i` of a stream
//! with seed `s` is `mix(s + (i + 1)·0x9E3779B97F4A7C15)`, which is exactly
//! the `i`-th output of a sequential SplitMix64 seeded with `s`. Sample `k`
//! of a data set consumes draws `2k` and `2k + 1`, so samples can be
//! produced in any order or in parallel and the sequence never changes.
//! Uniforms are `((draw >> 11) + 0.5)·2⁻⁵³`, strictly inside `(0, 1)`.
//! Normal variates use the cosine branch of Box–Muller.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::catalog::{Bound, HalfLifeRecord};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fitting::LogAxis;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitMix64 {
    seed: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { seed }
    }

    /// Draw number `index` of the stream.
    pub fn draw(&self, index: u64) -> u64 {
        let mut z = self
            .seed
            .wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in the open interval `(0, 1)`.
    pub fn uniform(&self, index: u64) -> f64 {
        ((self.draw(index) >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal from draws `2k` and `2k + 1`.
    pub fn normal(&self, k: u64) -> f64 {
        let u1 = self.uniform(2 * k);
        let u2 = self.uniform(2 * k + 1);
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `10^(decades·u)`: log-uniform over `[1, 10^decades)`.
    LogUniform {
        decades: u32,
    },
    /// `radix^(mu + sigma·z)` with `z` standard normal.
    LogNormal {
        mu: f64,
        sigma: f64,
        axis: LogAxis,
    },
    PointMass {
        x: f64,
    },
    Exponential {
        rate: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, seed: u64) -> Self {
        GeneratorSpec { kind, n, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("sample count must be at least 1"));
        }
        let ok = match self.kind {
            GeneratorKind::LogUniform { decades } => decades >= 1,
            GeneratorKind::LogNormal { mu, sigma, .. } => {
                mu.is_finite() && sigma.is_finite() && sigma > 0.0
            }
            GeneratorKind::PointMass { x } => x.is_finite() && x > 0.0,
            GeneratorKind::Exponential { rate } => rate.is_finite() && rate > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "invalid generator parameters {:?}",
                self.kind
            )))
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Vec<f64>> {
    generate_with(spec, Execution::default())
}

pub fn generate_with(spec: &GeneratorSpec, exec: Execution) -> Result<Vec<f64>> {
    spec.validate()?;
    let rng = SplitMix64::new(spec.seed);
    let kind = spec.kind;
    let values = exec.map_indexed(spec.n, |i| sample(&rng, kind, i as u64));
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Numerical(format!(
            "generator produced {bad}; parameters leave the f64 range"
        )));
    }
    Ok(values)
}

fn sample(rng: &SplitMix64, kind: GeneratorKind, k: u64) -> f64 {
    match kind {
        GeneratorKind::LogUniform { decades } => {
            10f64.powf(f64::from(decades) * rng.uniform(2 * k))
        }
        GeneratorKind::LogNormal { mu, sigma, axis } => axis.pow(mu + sigma * rng.normal(k)),
        GeneratorKind::PointMass { x } => x,
        GeneratorKind::Exponential { rate } => -rng.uniform(2 * k).ln() / rate,
    }
}

/// Wraps generated values as exact, unstable catalog records named
/// `synth-<index>`.
pub fn as_records(values: &[f64]) -> Vec<HalfLifeRecord> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| HalfLifeRecord {
            nuclide: format!("synth-{i}"),
            half_life_s: Some(v),
            uncertainty_s: None,
            bound: Bound::Exact,
            stable: false,
        })
        .collect()
}
