//! Log-binned histograms and least-squares Gaussian fits to them.

use std::f64::consts::{E, LN_2};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::census::check_values;
use crate::digitlaw::Base;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::spectral::{compliance_index, LogDensity, DEFAULT_HARMONICS};

pub const DEFAULT_BIN_WIDTH: f64 = 1.0;
pub const MAX_ITERATIONS: usize = 200;
pub const RELATIVE_TOLERANCE: f64 = 1e-10;

/// Logarithm used for the histogram axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogAxis {
    Lg,
    Ln,
    Lb,
}

impl LogAxis {
    pub const ALL: [LogAxis; 3] = [LogAxis::Lg, LogAxis::Ln, LogAxis::Lb];

    pub fn radix(self) -> f64 {
        match self {
            LogAxis::Lg => 10.0,
            LogAxis::Ln => E,
            LogAxis::Lb => 2.0,
        }
    }

    pub fn log(self, x: f64) -> f64 {
        match self {
            LogAxis::Lg => x.log10(),
            LogAxis::Ln => x.ln(),
            LogAxis::Lb => x.log2(),
        }
    }

    /// `radix^x`.
    pub fn pow(self, x: f64) -> f64 {
        match self {
            LogAxis::Lg => 10f64.powf(x),
            LogAxis::Ln => x.exp(),
            LogAxis::Lb => x.exp2(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogAxis::Lg => "lg",
            LogAxis::Ln => "ln",
            LogAxis::Lb => "lb",
        }
    }
}

impl fmt::Display for LogAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LogAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lg" | "log10" => Ok(LogAxis::Lg),
            "ln" => Ok(LogAxis::Ln),
            "lb" | "log2" => Ok(LogAxis::Lb),
            other => Err(Error::domain(format!("unknown log axis `{other}`"))),
        }
    }
}

/// Counts over uniform bins of a log axis. Bin `k` covers
/// `[origin + k·bin_width, origin + (k+1)·bin_width)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogHistogram {
    axis: LogAxis,
    bin_width: f64,
    origin: f64,
    counts: Vec<u64>,
    total: u64,
}

impl LogHistogram {
    pub fn empty(axis: LogAxis, bin_width: f64) -> Self {
        LogHistogram {
            axis,
            bin_width,
            origin: 0.0,
            counts: Vec::new(),
            total: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn axis(&self) -> LogAxis {
        self.axis
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        self.origin + (k as f64 + 0.5) * self.bin_width
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|k| self.bin_center(k)).collect()
    }

    /// Extent of the occupied bins on the axis.
    pub fn span(&self) -> f64 {
        self.counts.len() as f64 * self.bin_width
    }

    pub fn nonzero_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_center,count\n");
        for (k, c) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.bin_center(k), c);
        }
        out
    }
}

pub fn log_histogram(values: &[f64], axis: LogAxis, bin_width: f64) -> Result<LogHistogram> {
    log_histogram_with(values, axis, bin_width, Execution::default())
}

pub fn log_histogram_with(
    values: &[f64],
    axis: LogAxis,
    bin_width: f64,
    exec: Execution,
) -> Result<LogHistogram> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::domain(format!(
            "bin width must be > 0, got {bin_width}"
        )));
    }
    check_values(values)?;
    if values.is_empty() {
        return Ok(LogHistogram::empty(axis, bin_width));
    }
    let logs = exec.map_slice(values, |&v| axis.log(v));
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let origin = (lo / bin_width).floor() * bin_width;
    let index = |l: f64| ((l - origin) / bin_width).floor().max(0.0) as usize;
    let bins = index(hi) + 1;
    let counts = exec.tally(&logs, bins, |&l, acc| acc[index(l).min(bins - 1)] += 1);
    Ok(LogHistogram {
        axis,
        bin_width,
        origin,
        counts,
        total: values.len() as u64,
    })
}

pub fn hwhm_to_sigma(hwhm: f64) -> Result<f64> {
    if !(hwhm.is_finite() && hwhm > 0.0) {
        return Err(Error::domain(format!("HWHM must be > 0, got {hwhm}")));
    }
    Ok(hwhm / (2.0 * LN_2).sqrt())
}

pub fn sigma_to_hwhm(sigma: f64) -> Result<f64> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be > 0, got {sigma}")));
    }
    Ok(sigma * (2.0 * LN_2).sqrt())
}

/// `amplitude · exp(-(x - mean)² / (2σ²))` fitted by unweighted least
/// squares. Errors are one-sigma standard errors from the Jacobian at the
/// optimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianFit {
    pub mean: f64,
    pub hwhm: f64,
    pub sigma: f64,
    pub amplitude: f64,
    pub residual: f64,
    pub mean_err: f64,
    pub hwhm_err: f64,
    pub amplitude_err: f64,
    pub iterations: usize,
}

impl GaussianFit {
    fn from_params(p: &Vector3<f64>, residual: f64, iterations: usize) -> Self {
        let sigma = p[2].abs();
        GaussianFit {
            mean: p[1],
            hwhm: sigma * (2.0 * LN_2).sqrt(),
            sigma,
            amplitude: p[0],
            residual,
            mean_err: f64::NAN,
            hwhm_err: f64::NAN,
            amplitude_err: f64::NAN,
            iterations,
        }
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.sigma;
        self.amplitude * (-0.5 * z * z).exp()
    }
}

pub fn fit_gaussian(hist: &LogHistogram) -> Result<GaussianFit> {
    let counts: Vec<f64> = hist.counts.iter().map(|&c| c as f64).collect();
    least_squares(&hist.centers(), &counts, ErrorModel::Poisson)
}

/// Levenberg-damped Gauss–Newton fit of a Gaussian to `(x, y)` points,
/// started from the moments of `y` as weights over `x`.
///
/// Standard errors assume equal noise on every point, estimated from the
/// residual sum of squares. [`fit_gaussian`] instead treats each bin as a
/// Poisson count with variance equal to its fitted value.
pub fn fit_gaussian_points(x: &[f64], y: &[f64]) -> Result<GaussianFit> {
    least_squares(x, y, ErrorModel::Residual)
}

#[derive(Clone, Copy)]
enum ErrorModel {
    Residual,
    Poisson,
}

fn least_squares(x: &[f64], y: &[f64], errors: ErrorModel) -> Result<GaussianFit> {
    if x.len() != y.len() {
        return Err(Error::domain("x and y lengths differ"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) || y.iter().any(|v| *v < 0.0) {
        return Err(Error::domain(
            "fit data must be finite with nonnegative counts",
        ));
    }
    let nonzero = y.iter().filter(|&&v| v > 0.0).count();
    if nonzero < 4 {
        return Err(Error::Underdetermined { nonzero });
    }

    let mass: f64 = y.iter().sum();
    let mean = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / mass;
    let var = x
        .iter()
        .zip(y)
        .map(|(a, b)| b * (a - mean).powi(2))
        .sum::<f64>()
        / mass;
    let peak = y.iter().copied().fold(0.0, f64::max);
    let mut p = Vector3::new(peak, mean, var.sqrt().max(f64::MIN_POSITIVE));

    let rss = |p: &Vector3<f64>| -> f64 {
        x.iter()
            .zip(y)
            .map(|(&xi, &yi)| (yi - model(p, xi)).powi(2))
            .sum()
    };

    let mut current = rss(&p);
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (jtj, jtr) = normal_equations(&p, x, y);
        let mut accepted = None;
        while lambda < 1e30 {
            let mut damped = jtj;
            for i in 0..3 {
                damped[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
            }
            let Some(delta) = damped.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let trial = p + delta;
            let trial_rss = rss(&trial);
            if trial[2] > 0.0 && trial_rss.is_finite() && trial_rss <= current {
                accepted = Some((trial, trial_rss, delta));
                lambda = (lambda / 10.0).max(1e-15);
                break;
            }
            lambda *= 10.0;
        }
        match accepted {
            Some((trial, trial_rss, delta)) => {
                let small = (0..3).all(|i| delta[i].abs() <= RELATIVE_TOLERANCE * trial[i].abs());
                p = trial;
                current = trial_rss;
                if small || current == 0.0 {
                    converged = true;
                    break;
                }
            }
            // No damping level improves the objective: stationary to
            // machine precision.
            None => {
                converged = true;
                break;
            }
        }
    }

    let mut fit = GaussianFit::from_params(&p, current, iterations);
    if !converged {
        return Err(Error::NotConverged {
            iterations,
            best: Box::new(fit),
        });
    }
    if !(fit.sigma.is_finite() && fit.sigma > 0.0 && fit.amplitude.is_finite()) {
        return Err(Error::Numerical(
            "fit produced a degenerate Gaussian".into(),
        ));
    }

    let (jtj, _) = normal_equations(&p, x, y);
    if let Some(inv) = jtj.try_inverse() {
        let cov = match errors {
            ErrorModel::Residual => {
                let dof = x.len().saturating_sub(3);
                let s2 = if dof > 0 { current / dof as f64 } else { 0.0 };
                inv * s2
            }
            ErrorModel::Poisson => {
                let mut meat = Matrix3::zeros();
                for &xi in x {
                    let j = jacobian(&p, xi);
                    meat += j * j.transpose() * model(&p, xi);
                }
                inv * meat * inv
            }
        };
        fit.amplitude_err = cov[(0, 0)].max(0.0).sqrt();
        fit.mean_err = cov[(1, 1)].max(0.0).sqrt();
        fit.hwhm_err = (2.0 * LN_2).sqrt() * cov[(2, 2)].max(0.0).sqrt();
    }
    Ok(fit)
}

fn model(p: &Vector3<f64>, x: f64) -> f64 {
    let z = (x - p[1]) / p[2];
    p[0] * (-0.5 * z * z).exp()
}

fn normal_equations(p: &Vector3<f64>, x: &[f64], y: &[f64]) -> (Matrix3<f64>, Vector3<f64>) {
    let mut jtj = Matrix3::zeros();
    let mut jtr = Vector3::zeros();
    for (&xi, &yi) in x.iter().zip(y) {
        let j = jacobian(p, xi);
        jtj += j * j.transpose();
        jtr += j * (yi - model(p, xi));
    }
    (jtj, jtr)
}

fn jacobian(p: &Vector3<f64>, x: f64) -> Vector3<f64> {
    let (a, mu, s) = (p[0], p[1], p[2]);
    let d = x - mu;
    let e = (-0.5 * (d / s).powi(2)).exp();
    Vector3::new(e, a * e * d / (s * s), a * e * d * d / (s * s * s))
}

/// `(mean, base^mean, hwhm, base^hwhm)` for one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table2Row {
    pub axis_base: LogAxis,
    pub mean: f64,
    pub base_pow_mean: f64,
    pub hwhm: f64,
    pub base_pow_hwhm: f64,
}

pub fn table2_row(fit: &GaussianFit, axis: LogAxis) -> Table2Row {
    Table2Row {
        axis_base: axis,
        mean: fit.mean,
        base_pow_mean: axis.pow(fit.mean),
        hwhm: fit.hwhm,
        base_pow_hwhm: axis.pow(fit.hwhm),
    }
}

/// Compliance index of the fitted log-normal, evaluated for decimal digits.
pub fn predict_compliance(fit: &GaussianFit, axis: LogAxis) -> Result<f64> {
    let density = LogDensity::gaussian(fit.mean, fit.sigma)?.with_radix(axis.radix())?;
    compliance_index(&density, DEFAULT_HARMONICS, Base::DECIMAL)
}

/// Serializable summary of one histogram fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub axis_base: LogAxis,
    pub bin_width: f64,
    pub mean: f64,
    pub mean_err: f64,
    pub hwhm: f64,
    pub hwhm_err: f64,
    pub sigma: f64,
    pub amplitude: f64,
    pub residual: f64,
    pub base_pow_mean: f64,
    pub base_pow_hwhm: f64,
    pub compliance_index: f64,
}

impl FitReport {
    pub fn new(hist: &LogHistogram, fit: &GaussianFit) -> Result<Self> {
        let row = table2_row(fit, hist.axis);
        Ok(FitReport {
            axis_base: hist.axis,
            bin_width: hist.bin_width,
            mean: fit.mean,
            mean_err: fit.mean_err,
            hwhm: fit.hwhm,
            hwhm_err: fit.hwhm_err,
            sigma: fit.sigma,
            amplitude: fit.amplitude,
            residual: fit.residual,
            base_pow_mean: row.base_pow_mean,
            base_pow_hwhm: row.base_pow_hwhm,
            compliance_index: predict_compliance(fit, hist.axis)?,
        })
    }

    pub fn to_text(&self) -> String {
        format!(
            "binning  mean                base^mean  HWHM                base^HWHM\n\
             {:<7}  {:>8.4} ± {:<8.4}  {:>9.2}  {:>8.4} ± {:<8.4}  {:>9.2}\n\
             bin width {}, sigma {:.4}, amplitude {:.2}, compliance index {:.3e}\n",
            self.axis_base.name(),
            self.mean,
            self.mean_err,
            self.base_pow_mean,
            self.hwhm,
            self.hwhm_err,
            self.base_pow_hwhm,
            self.bin_width,
            self.sigma,
            self.amplitude,
            self.compliance_index,
        )
    }
}
