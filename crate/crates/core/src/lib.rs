//! Newcomb–Benford analysis of numeric data sets, aimed at nuclear
//! half-life catalogs.
//!
//! * [`digitlaw`] – first significant digits and Benford probabilities in
//!   any base from 2 to 36.
//! * [`catalog`] – canonical CSV and fixed-width catalog ingestion.
//! * [`census`] – digit censuses, binomial error bands, chi-square.
//! * [`scaling`] – the ones scaling test.
//! * [`spectral`] – log-axis densities, the leading-one sampling function
//!   and the Fourier compliance index.
//! * [`fitting`] – log-binned histograms and Gaussian (log-normal) fits.
//! * [`synth`] – seeded synthetic data.
//!
//! Data-parallel kernels take an [`Execution`]; the rayon-backed path is
//! behind the default `parallel` feature.

pub mod catalog;
pub mod census;
pub mod digitlaw;
pub mod error;
pub mod exec;
pub mod fitting;
pub mod scaling;
pub mod spectral;
pub mod synth;

pub use catalog::{filter_measurable, Bound, HalfLifeRecord};
pub use census::{compliance_report, expectations, take_census, ComplianceReport, DigitCensus};
pub use digitlaw::{benford_prob, first_digit, log_fraction, Base, Digit};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fitting::{fit_gaussian, log_histogram, GaussianFit, LogAxis, LogHistogram};
pub use scaling::{ones_scaling_test, OstTrace};
pub use spectral::{compliance_index, p1_convolution, spectrum, LogDensity};
pub use synth::{generate, GeneratorKind, GeneratorSpec};
