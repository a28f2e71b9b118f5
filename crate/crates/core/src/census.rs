//! First-digit censuses, Benford expectations with binomial error bands,
//! and a chi-square compliance summary.

use std::fmt::Write as _;

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::digitlaw::{benford_prob, first_digit, Base};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Observed counts of each leading digit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitCensus {
    base: Base,
    counts: Vec<u64>,
    total: u64,
}

impl DigitCensus {
    pub fn empty(base: Base) -> Self {
        DigitCensus {
            base,
            counts: vec![0; base.digit_count()],
            total: 0,
        }
    }

    /// Builds a census from explicit per-digit counts (digit 1 first).
    pub fn from_counts(base: Base, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != base.digit_count() {
            return Err(Error::domain(format!(
                "base {base} needs {} digit counts, got {}",
                base.digit_count(),
                counts.len()
            )));
        }
        let total = counts.iter().sum();
        Ok(DigitCensus {
            base,
            counts,
            total,
        })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// Counts indexed by `digit - 1`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, digit: u32) -> u64 {
        digit
            .checked_sub(1)
            .and_then(|i| self.counts.get(i as usize))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Component-wise sum of two censuses over the same base.
    pub fn merge(&self, other: &DigitCensus) -> Result<DigitCensus> {
        if self.base != other.base {
            return Err(Error::domain("cannot merge censuses of different bases"));
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a + b)
            .collect();
        Ok(DigitCensus {
            base: self.base,
            counts,
            total: self.total + other.total,
        })
    }
}

pub(crate) fn check_values(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        Some(index) => Err(Error::NonPositive {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

pub fn take_census(values: &[f64], base: Base) -> Result<DigitCensus> {
    take_census_with(values, base, Execution::default())
}

pub fn take_census_with(values: &[f64], base: Base, exec: Execution) -> Result<DigitCensus> {
    check_values(values)?;
    let counts = exec.tally(values, base.digit_count(), |&v, acc| {
        let d = first_digit(v, base).expect("values checked positive");
        acc[d.index()] += 1;
    });
    DigitCensus::from_counts(base, counts)
}

/// Expected count `N·P_d` and its binomial standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DigitExpectation {
    pub digit: u32,
    pub expected: f64,
    pub deviation: f64,
}

pub fn expectations(n: u64, base: Base) -> Vec<DigitExpectation> {
    let n = n as f64;
    base.digits()
        .map(|d| {
            let p = benford_prob(d, base).expect("digit drawn from its own base");
            DigitExpectation {
                digit: d.value(),
                expected: n * p,
                deviation: (n * p * (1.0 - p)).max(0.0).sqrt(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub digit: u32,
    pub observed: u64,
    pub expected: f64,
    pub deviation: f64,
    pub z: f64,
}

/// Per-digit z-scores plus the Pearson chi-square over all digit cells.
///
/// A census with `total == 0` yields a report with no rows, zero
/// statistics and no p-value; see [`ComplianceReport::is_empty`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplianceReport {
    pub base: Base,
    pub total: u64,
    pub rows: Vec<ReportRow>,
    pub chi_square: f64,
    pub degrees_of_freedom: u32,
    pub p_value: Option<f64>,
    pub max_abs_z: f64,
}

impl ComplianceReport {
    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Aligned table: digit, observed occurrence, expected ± deviation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.is_empty() {
            let _ = writeln!(out, "no values (base {})", self.base);
            return out;
        }
        let _ = writeln!(
            out,
            "{:>5}  {:>10}  {:>18}  {:>7}",
            "Digit", "Occurrence", "Expected", "z"
        );
        for row in &self.rows {
            let expected = format!("{:.2} ± {:.2}", row.expected, row.deviation);
            let _ = writeln!(
                out,
                "{:>5}  {:>10}  {:>18}  {:>7.2}",
                row.digit, row.observed, expected, row.z
            );
        }
        let _ = writeln!(out, "N = {}, base {}", self.total, self.base);
        let p = self
            .p_value
            .map_or_else(|| "n/a".to_string(), |p| format!("{p:.4}"));
        let _ = writeln!(
            out,
            "chi-square = {:.3} ({} dof, p = {p}), max |z| = {:.2}",
            self.chi_square, self.degrees_of_freedom, self.max_abs_z
        );
        out
    }
}

pub fn compliance_report(census: &DigitCensus) -> ComplianceReport {
    let base = census.base;
    let degrees_of_freedom = base.get() - 2;
    if census.total == 0 {
        return ComplianceReport {
            base,
            total: 0,
            rows: Vec::new(),
            chi_square: 0.0,
            degrees_of_freedom,
            p_value: None,
            max_abs_z: 0.0,
        };
    }
    let rows: Vec<ReportRow> = expectations(census.total, base)
        .into_iter()
        .zip(&census.counts)
        .map(|(e, &observed)| {
            let diff = observed as f64 - e.expected;
            let z = if e.deviation > 0.0 {
                diff / e.deviation
            } else {
                0.0
            };
            ReportRow {
                digit: e.digit,
                observed,
                expected: e.expected,
                deviation: e.deviation,
                z,
            }
        })
        .collect();
    let chi_square = rows
        .iter()
        .map(|r| {
            let diff = r.observed as f64 - r.expected;
            diff * diff / r.expected
        })
        .sum::<f64>();
    let max_abs_z = rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max);
    let p_value = (degrees_of_freedom > 0).then(|| {
        ChiSquared::new(f64::from(degrees_of_freedom))
            .expect("positive degrees of freedom")
            .sf(chi_square)
    });
    ComplianceReport {
        base,
        total: census.total,
        rows,
        chi_square,
        degrees_of_freedom,
        p_value,
        max_abs_z,
    }
}
