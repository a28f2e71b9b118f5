//! Densities on a logarithmic axis, the leading-one sampling function,
//! the convolution form of the leading-one probability and the Fourier
//! compliance criterion.
//!
//! Transforms use `F(ν) = ∫ f(g) exp(-2πiνg) dg`, so a normalized density
//! has `F(0) = 1` and frequencies are cycles per unit of the density's
//! log axis (cycles per decade on the `lg` axis). A set of values is
//! exactly Benford in a base iff the transform of its log-density on
//! that base's axis vanishes at every nonzero integer frequency.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::digitlaw::Base;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fitting::LogHistogram;

/// Default number of harmonics checked by [`compliance_index`].
pub const DEFAULT_HARMONICS: u32 = 8;

// Histogram weights must sum to one within this tolerance.
const MASS_TOLERANCE: f64 = 1e-9;
// Gaussian integrals are truncated at this many standard deviations.
const GAUSSIAN_REACH: f64 = 12.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityShape {
    Gaussian {
        mean: f64,
        sigma: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    PointMass {
        at: f64,
    },
    /// Piecewise constant: bin `k` spans `[origin + k·width, origin + (k+1)·width)`
    /// and carries probability `weights[k]`.
    Histogram {
        origin: f64,
        width: f64,
        weights: Vec<f64>,
    },
}

/// A probability density `f(g)` over `g = log_radix(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogDensity {
    shape: DensityShape,
    radix: f64,
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {v}")))
    }
}

impl LogDensity {
    /// Gaussian on the decimal log axis.
    pub fn gaussian(mean: f64, sigma: f64) -> Result<Self> {
        finite("mean", mean)?;
        finite("sigma", sigma)?;
        if sigma <= 0.0 {
            return Err(Error::domain(format!("sigma must be > 0, got {sigma}")));
        }
        Ok(Self::decimal(DensityShape::Gaussian { mean, sigma }))
    }

    /// Uniform over `[lo, hi)` on the decimal log axis.
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        finite("lo", lo)?;
        finite("hi", hi)?;
        if hi <= lo {
            return Err(Error::domain(format!("empty uniform support [{lo}, {hi})")));
        }
        Ok(Self::decimal(DensityShape::Uniform { lo, hi }))
    }

    pub fn point_mass(at: f64) -> Result<Self> {
        finite("location", at)?;
        Ok(Self::decimal(DensityShape::PointMass { at }))
    }

    /// Piecewise-constant density from bin probabilities that already sum
    /// to one.
    pub fn histogram(origin: f64, width: f64, weights: Vec<f64>) -> Result<Self> {
        finite("origin", origin)?;
        finite("width", width)?;
        if width <= 0.0 {
            return Err(Error::domain(format!("bin width must be > 0, got {width}")));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::domain(
                "histogram weights must be finite and nonnegative",
            ));
        }
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::domain(format!(
                "density is not normalized: total mass {mass}"
            )));
        }
        Ok(Self::decimal(DensityShape::Histogram {
            origin,
            width,
            weights,
        }))
    }

    /// Normalized density of a binned sample, on the histogram's own axis.
    pub fn from_histogram(hist: &LogHistogram) -> Result<Self> {
        if hist.total() == 0 {
            return Err(Error::domain("histogram has zero total mass"));
        }
        let total = hist.total() as f64;
        let weights = hist.counts().iter().map(|&c| c as f64 / total).collect();
        Ok(LogDensity {
            shape: DensityShape::Histogram {
                origin: hist.origin(),
                width: hist.bin_width(),
                weights,
            },
            radix: hist.axis().radix(),
        })
    }

    fn decimal(shape: DensityShape) -> Self {
        LogDensity { shape, radix: 10.0 }
    }

    /// Declares the coordinates as logarithms to `radix` without changing them.
    pub fn with_radix(mut self, radix: f64) -> Result<Self> {
        if !(radix.is_finite() && radix > 1.0) {
            return Err(Error::domain(format!("log radix must be > 1, got {radix}")));
        }
        self.radix = radix;
        Ok(self)
    }

    pub fn radix(&self) -> f64 {
        self.radix
    }

    pub fn shape(&self) -> &DensityShape {
        &self.shape
    }

    /// The same distribution expressed on the `radix` log axis.
    pub fn rescaled_to(&self, radix: f64) -> Result<Self> {
        if !(radix.is_finite() && radix > 1.0) {
            return Err(Error::domain(format!("log radix must be > 1, got {radix}")));
        }
        if radix == self.radix {
            return Ok(self.clone());
        }
        let k = self.radix.ln() / radix.ln();
        let shape = match &self.shape {
            DensityShape::Gaussian { mean, sigma } => DensityShape::Gaussian {
                mean: mean * k,
                sigma: sigma * k,
            },
            DensityShape::Uniform { lo, hi } => DensityShape::Uniform {
                lo: lo * k,
                hi: hi * k,
            },
            DensityShape::PointMass { at } => DensityShape::PointMass { at: at * k },
            DensityShape::Histogram {
                origin,
                width,
                weights,
            } => DensityShape::Histogram {
                origin: origin * k,
                width: width * k,
                weights: weights.clone(),
            },
        };
        Ok(LogDensity { shape, radix })
    }

    fn check_normalized(&self) -> Result<()> {
        if let DensityShape::Histogram { weights, .. } = &self.shape {
            let mass: f64 = weights.iter().sum();
            if (mass - 1.0).abs() > MASS_TOLERANCE {
                return Err(Error::domain(format!(
                    "density is not normalized: total mass {mass}"
                )));
            }
        }
        Ok(())
    }

    /// Closed-form `|F(ν)|` on the density's own axis.
    pub fn fourier_magnitude(&self, nu: f64) -> f64 {
        match &self.shape {
            DensityShape::Gaussian { sigma, .. } => {
                let a = 2.0 * PI * sigma * nu;
                (-0.5 * a * a).exp()
            }
            DensityShape::Uniform { lo, hi } => sinc(PI * nu * (hi - lo)).abs(),
            DensityShape::PointMass { .. } => 1.0,
            DensityShape::Histogram {
                origin,
                width,
                weights,
            } => {
                let (mut re, mut im) = (0.0, 0.0);
                for (k, w) in weights.iter().enumerate() {
                    if *w == 0.0 {
                        continue;
                    }
                    let center = origin + (k as f64 + 0.5) * width;
                    let phase = -2.0 * PI * nu * center;
                    re += w * phase.cos();
                    im += w * phase.sin();
                }
                re.hypot(im) * sinc(PI * nu * width).abs()
            }
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// The leading-one indicator on a base's log axis: a unit-period square
/// wave that is 1 on `[k, k + log_base 2)` for every integer `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingFunction {
    base: Base,
}

impl SamplingFunction {
    pub fn new(base: Base) -> Self {
        SamplingFunction { base }
    }

    pub fn window(&self) -> f64 {
        self.base.ones_window()
    }

    pub fn eval(&self, g: f64) -> u8 {
        let frac = g - g.floor();
        u8::from(frac < self.window())
    }

    /// Magnitude of the Fourier-series coefficient at integer frequency `n`.
    pub fn coefficient(&self, n: i64) -> f64 {
        let w = self.window();
        if n == 0 {
            w
        } else {
            let n = n.unsigned_abs() as f64;
            (PI * n * w).sin().abs() / (PI * n)
        }
    }

    /// Measure of `[a, b)` covered by the windows.
    fn covered(&self, a: f64, b: f64) -> f64 {
        let w = self.window();
        let cumulative = |x: f64| {
            let k = x.floor();
            k * w + (x - k).min(w)
        };
        cumulative(b) - cumulative(a)
    }
}

/// Decimal leading-one indicator.
pub fn sampling_function(g: f64) -> u8 {
    SamplingFunction::new(Base::DECIMAL).eval(g)
}

/// Decimal square-wave coefficient magnitude.
pub fn square_wave_coefficient(n: i64) -> f64 {
    SamplingFunction::new(Base::DECIMAL).coefficient(n)
}

/// Standard deviation `1/(2πσ)` of a Gaussian's Fourier transform.
pub fn gaussian_ft_sigma(sigma: f64) -> Result<f64> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be > 0, got {sigma}")));
    }
    Ok(1.0 / (2.0 * PI * sigma))
}

/// Leading-one probability after shifting the density by `gamma` on the
/// `base` log axis (multiplying every value by `base^gamma`).
pub fn p1_convolution(f: &LogDensity, gamma: f64, base: Base) -> Result<f64> {
    finite("gamma", gamma)?;
    f.check_normalized()?;
    let f = f.rescaled_to(base.as_f64())?;
    let s = SamplingFunction::new(base);
    let p = match &f.shape {
        DensityShape::PointMass { at } => f64::from(s.eval(at + gamma)),
        DensityShape::Uniform { lo, hi } => s.covered(lo + gamma, hi + gamma) / (hi - lo),
        DensityShape::Histogram {
            origin,
            width,
            weights,
        } => weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(k, w)| {
                let a = origin + k as f64 * width + gamma;
                w * s.covered(a, a + width) / width
            })
            .sum(),
        DensityShape::Gaussian { mean, sigma } => gaussian_window_mass(&s, mean + gamma, *sigma),
    };
    Ok(p.clamp(0.0, 1.0))
}

// Midpoint rule over the parts of [μ - Rσ, μ + Rσ] inside the windows,
// split at every window edge so no node straddles a discontinuity.
fn gaussian_window_mass(s: &SamplingFunction, mean: f64, sigma: f64) -> f64 {
    let step = (sigma / 100.0).min(1e-3);
    let lo = mean - GAUSSIAN_REACH * sigma;
    let hi = mean + GAUSSIAN_REACH * sigma;
    let w = s.window();
    let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
    let mut total = 0.0;
    let mut k = lo.floor();
    while k < hi {
        let a = k.max(lo);
        let b = (k + w).min(hi);
        if b > a {
            let nodes = ((b - a) / step).ceil().max(1.0);
            let h = (b - a) / nodes;
            let mut piece = 0.0;
            for j in 0..nodes as u64 {
                let u = (a + (j as f64 + 0.5) * h - mean) / sigma;
                piece += (-0.5 * u * u).exp();
            }
            total += piece * h * norm;
        }
        k += 1.0;
    }
    total
}

/// `(gamma, p1_predicted)` over one full period, `points` samples.
pub fn p1_curve(f: &LogDensity, base: Base, points: u32) -> Result<Vec<(f64, f64)>> {
    (0..points)
        .map(|i| {
            let gamma = f64::from(i) / f64::from(points);
            p1_convolution(f, gamma, base).map(|p| (gamma, p))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumSample {
    pub frequency: f64,
    pub magnitude: f64,
}

pub fn spectrum(
    f: &LogDensity,
    max_frequency: u32,
    samples_per_unit: u32,
) -> Result<Vec<SpectrumSample>> {
    spectrum_with(f, max_frequency, samples_per_unit, Execution::default())
}

/// `|F|` on the grid `k / samples_per_unit`, `k = 0..=max_frequency·samples_per_unit`,
/// which contains every integer frequency exactly. Gaussian densities are
/// transformed by midpoint quadrature; piecewise densities use their exact
/// transforms.
pub fn spectrum_with(
    f: &LogDensity,
    max_frequency: u32,
    samples_per_unit: u32,
    exec: Execution,
) -> Result<Vec<SpectrumSample>> {
    if max_frequency < 1 {
        return Err(Error::domain("max_frequency must be at least 1"));
    }
    if samples_per_unit < 1 {
        return Err(Error::domain("samples_per_unit must be at least 1"));
    }
    f.check_normalized()?;
    let count = max_frequency as usize * samples_per_unit as usize + 1;
    let spu = f64::from(samples_per_unit);
    Ok(exec.map_indexed(count, |k| {
        let frequency = k as f64 / spu;
        let magnitude = match f.shape {
            DensityShape::Gaussian { sigma, .. } => gaussian_transform_quadrature(sigma, frequency),
            _ => f.fourier_magnitude(frequency),
        };
        SpectrumSample {
            frequency,
            magnitude,
        }
    }))
}

// Nodes are symmetric about the mean, so the sine part cancels exactly.
fn gaussian_transform_quadrature(sigma: f64, nu: f64) -> f64 {
    let step = (sigma / 100.0).min(1e-3);
    let half = (GAUSSIAN_REACH * sigma / step).ceil() as u64;
    let h = GAUSSIAN_REACH * sigma / half as f64;
    let norm = h / (sigma * (2.0 * PI).sqrt());
    let omega = 2.0 * PI * nu;
    let mut sum = 0.0;
    for j in 0..half {
        let u = (j as f64 + 0.5) * h;
        let z = u / sigma;
        sum += (-0.5 * z * z).exp() * (omega * u).cos();
    }
    (2.0 * sum * norm).abs()
}

pub fn spectrum_to_csv(samples: &[SpectrumSample]) -> String {
    let mut out = String::from("frequency,magnitude\n");
    for s in samples {
        let _ = writeln!(out, "{},{}", s.frequency, s.magnitude);
    }
    out
}

pub fn p1_curve_to_csv(curve: &[(f64, f64)]) -> String {
    let mut out = String::from("gamma,p1_predicted\n");
    for (g, p) in curve {
        let _ = writeln!(out, "{g},{p}");
    }
    out
}

/// `max_{n=1..n_max} |F(n)|·|S(n)|` on the `base` log axis: the worst
/// single-harmonic amplitude of the leading-one oscillation. Zero means
/// exact compliance.
pub fn compliance_index(f: &LogDensity, n_max: u32, base: Base) -> Result<f64> {
    Ok(harmonic_amplitudes(f, n_max, base)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// `2·Σ_{n=1..n_max} |F(n)|·|S(n)|`, an upper bound on
/// `|P1(γ) - log_base 2|` up to the truncated tail.
pub fn oscillation_bound(f: &LogDensity, n_max: u32, base: Base) -> Result<f64> {
    Ok(2.0 * harmonic_amplitudes(f, n_max, base)?.iter().sum::<f64>())
}

fn harmonic_amplitudes(f: &LogDensity, n_max: u32, base: Base) -> Result<Vec<f64>> {
    if n_max < 1 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    f.check_normalized()?;
    let f = f.rescaled_to(base.as_f64())?;
    let s = SamplingFunction::new(base);
    Ok((1..=n_max)
        .map(|n| f.fourier_magnitude(f64::from(n)) * s.coefficient(i64::from(n)))
        .collect())
}
