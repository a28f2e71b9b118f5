//! Ones scaling test: the fraction of values led by the digit 1 while the
//! whole set is repeatedly multiplied by a constant `c > 1`.
//!
//! Values are mapped once to the fractional part of their logarithm.
//! Multiplying by `c^m` then becomes a shift by `m·log(c)` modulo one, so
//! no iterate is ever formed in linear space and there is nothing to
//! overflow however far the trace runs.

use std::fmt::Write as _;

use serde::Serialize;

use crate::census::check_values;
use crate::digitlaw::{log_fraction, Base};
use crate::error::{Error, Result};
use crate::exec::Execution;

pub const DEFAULT_SCALING_CONSTANT: f64 = 1.01;
pub const DEFAULT_ITERATIONS: u32 = 1000;

// Relative distance below which 1/log(c) is treated as an integer period.
const PERIOD_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OstPoint {
    pub m: u32,
    pub gamma: f64,
    pub p1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OstTrace {
    pub scaling_constant: f64,
    pub base: Base,
    pub n: usize,
    /// `log_base(2)`, the leading-one probability of a compliant set.
    pub expected_p1: f64,
    /// One binomial standard deviation of the leading-one fraction.
    pub error_band: f64,
    pub points: Vec<OstPoint>,
}

impl OstTrace {
    /// Largest `|p1 - expected_p1|` over the trace.
    pub fn max_deviation(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p.p1 - self.expected_p1).abs())
            .fold(0.0, f64::max)
    }

    /// Number of points further than `k` error bands from the expectation.
    pub fn outside_band(&self, k: f64) -> usize {
        let limit = k * self.error_band;
        self.points
            .iter()
            .filter(|p| (p.p1 - self.expected_p1).abs() > limit)
            .count()
    }

    pub fn mean_p1(&self) -> f64 {
        self.points.iter().map(|p| p.p1).sum::<f64>() / self.points.len() as f64
    }

    /// Plot-ready CSV: `#` header lines with the run parameters and the
    /// ±1 error band, then `m,gamma,p1` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# scaling_constant={}", self.scaling_constant);
        let _ = writeln!(out, "# base={}", self.base);
        let _ = writeln!(out, "# n={}", self.n);
        let _ = writeln!(out, "# expected_p1={}", self.expected_p1);
        let _ = writeln!(out, "# error_band={}", self.error_band);
        let _ = writeln!(out, "# band_lower={}", self.expected_p1 - self.error_band);
        let _ = writeln!(out, "# band_upper={}", self.expected_p1 + self.error_band);
        out.push_str("m,gamma,p1\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", p.m, p.gamma, p.p1);
        }
        out
    }
}

/// `sqrt(P1·(1 - P1)/n)` with `P1 = log_base(2)`.
pub fn error_band(n: usize, base: Base) -> f64 {
    let p = base.ones_window();
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Iterations per full decade of shift, `1 / lg(c)`.
pub fn ost_period(c: f64) -> Result<f64> {
    check_constant(c)?;
    Ok(1.0 / c.log10())
}

fn check_constant(c: f64) -> Result<()> {
    if c.is_finite() && c > 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "scaling constant must be finite and > 1, got {c}"
        )))
    }
}

// When the period in iterations is an integer, iteration m and m + P are
// the same shift; reducing m modulo P keeps them bit-identical instead of
// letting the rounding of log(c) drift across periods.
fn integer_period(step: f64) -> Option<u64> {
    let period = 1.0 / step;
    let rounded = period.round();
    ((period - rounded).abs() <= PERIOD_SNAP * period && rounded >= 1.0).then_some(rounded as u64)
}

pub fn ones_scaling_test(values: &[f64], c: f64, iterations: u32, base: Base) -> Result<OstTrace> {
    ones_scaling_test_with(values, c, iterations, base, Execution::default())
}

/// Runs `iterations` points, `m = 0, 1, …, iterations - 1`; point 0 is
/// the unscaled data.
pub fn ones_scaling_test_with(
    values: &[f64],
    c: f64,
    iterations: u32,
    base: Base,
    exec: Execution,
) -> Result<OstTrace> {
    check_constant(c)?;
    if iterations == 0 {
        return Err(Error::domain(
            "ones scaling test needs at least one iteration",
        ));
    }
    if values.is_empty() {
        return Err(Error::domain("ones scaling test needs at least one value"));
    }
    check_values(values)?;

    let fractions: Vec<f64> = exec.map_slice(values, |&v| {
        log_fraction(v, base).expect("values checked positive")
    });
    let window = base.ones_window();
    let step = base.log(c);
    let period = integer_period(step);
    let n = values.len();

    let points = exec.map_indexed(iterations as usize, |i| {
        let m = i as u32;
        let gamma = f64::from(m) * step;
        let shift = match period {
            Some(p) => (u64::from(m) % p) as f64 * step,
            None => gamma.fract(),
        };
        let ones = fractions
            .iter()
            .filter(|&&r| {
                let mut t = r + shift;
                if t >= 1.0 {
                    t -= 1.0;
                }
                t < window
            })
            .count();
        OstPoint {
            m,
            gamma,
            p1: ones as f64 / n as f64,
        }
    });

    Ok(OstTrace {
        scaling_constant: c,
        base,
        n,
        expected_p1: window,
        error_band: error_band(n, base),
        points,
    })
}
