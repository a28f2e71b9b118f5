//! `benford` command-line front end.
//!
//! [`run`] takes argv and explicit streams so the whole CLI can be driven
//! from tests. Exit codes: 0 success, 1 input or usage error, 2 numerical
//! failure.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::path::PathBuf;

use benford_core::catalog::{
    parse_canonical_csv, parse_fixed_width, to_canonical_csv, Bound, ColumnMap,
};
use benford_core::census::ComplianceReport;
use benford_core::fitting::{FitReport, DEFAULT_BIN_WIDTH};
use benford_core::scaling::{OstPoint, DEFAULT_ITERATIONS, DEFAULT_SCALING_CONSTANT};
use benford_core::spectral::{
    p1_curve, p1_curve_to_csv, spectrum_to_csv, SpectrumSample, DEFAULT_HARMONICS,
};
use benford_core::synth::as_records;
use benford_core::{
    compliance_index, compliance_report, filter_measurable, fit_gaussian, generate, log_histogram,
    ones_scaling_test, spectrum, take_census, Base, Error, GeneratorKind, GeneratorSpec,
    HalfLifeRecord, LogAxis, LogDensity, OstTrace,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

const DEFAULT_SPECTRUM_BIN_WIDTH: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(
    name = "benford",
    version,
    about = "First-digit (Newcomb-Benford) analysis of half-life catalogs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a catalog, keep the measurable half-lives, emit canonical CSV.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// First-digit census with Benford expectations and error bands.
    Digits {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 10)]
        base: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ones scaling test trace.
    Ost {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        ost: OstArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Log-binned histogram and Gaussian fit.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = AxisArg::Lg)]
        axis: AxisArg,
        #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
        bin_width: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fourier spectrum of the binned log-density and its compliance index.
    Spectrum {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Emit the predicted `gamma,p1_predicted` curve instead.
        #[arg(long)]
        p1_curve: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate a seeded synthetic data set as canonical CSV.
    Synth {
        #[command(flatten)]
        synth: SynthArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Every analysis in one JSON document.
    Report {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 10)]
        base: u32,
        #[command(flatten)]
        ost: OstArgs,
        #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
        bin_width: f64,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input catalog file(s); records are concatenated in order.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Read the catalog from standard input.
    #[arg(long)]
    pub stdin: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Column layout for `--format fixed-width`.
    #[arg(long)]
    pub column_map: Option<PathBuf>,
    /// Override the length of a year in seconds.
    #[arg(long)]
    pub unit_year: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub output: Option<OutputFormat>,
    /// Write `<subcommand>.<ext>` into this directory instead of stdout.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OstArgs {
    #[arg(long = "scale", default_value_t = DEFAULT_SCALING_CONSTANT)]
    pub scale: f64,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    pub iterations: u32,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum, default_value_t = AxisArg::Lg)]
    pub spectrum_axis: AxisArg,
    #[arg(long, default_value_t = DEFAULT_SPECTRUM_BIN_WIDTH)]
    pub spectrum_bin_width: f64,
    #[arg(long, default_value_t = DEFAULT_HARMONICS)]
    pub max_frequency: u32,
    #[arg(long, default_value_t = 20)]
    pub samples_per_unit: u32,
    #[arg(long, default_value_t = DEFAULT_HARMONICS)]
    pub n_max: u32,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, default_value_t = 1)]
    pub decades: u32,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value_t = AxisArg::Lg)]
    pub axis: AxisArg,
    #[arg(long, default_value_t = 1.0)]
    pub x: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    FixedWidth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Text => "txt",
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Lg,
    Ln,
    Lb,
}

impl From<AxisArg> for LogAxis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Lg => LogAxis::Lg,
            AxisArg::Ln => LogAxis::Ln,
            AxisArg::Lb => LogAxis::Lb,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    LogUniform,
    LogNormal,
    PointMass,
    Exponential,
}

/// Failure of one CLI run, carrying its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INPUT
            },
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input(e.to_string())
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, S>(
    argv: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_INPUT
                }
            };
        }
    };
    match execute(cli.command, stdin, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

struct Emitter<'a> {
    name: &'static str,
    format: OutputFormat,
    out_dir: Option<PathBuf>,
    stdout: &'a mut dyn Write,
}

impl Emitter<'_> {
    fn emit(&mut self, body: &str) -> Result<(), CliError> {
        match &self.out_dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(format!("{}.{}", self.name, self.format.extension()));
                fs::write(path, body)?;
            }
            None => self.stdout.write_all(body.as_bytes())?,
        }
        Ok(())
    }
}

fn emitter<'a>(
    name: &'static str,
    output: OutputArgs,
    default: OutputFormat,
    stdout: &'a mut dyn Write,
) -> Emitter<'a> {
    Emitter {
        name,
        format: output.output.unwrap_or(default),
        out_dir: output.out_dir,
        stdout,
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn read_records(input: &InputArgs, stdin: &mut dyn Read) -> Result<Vec<HalfLifeRecord>, CliError> {
    if input.input.is_empty() && !input.stdin {
        return Err(CliError::input("no input: pass --input <path> or --stdin"));
    }
    let fixed = match input.format {
        // Canonical CSV is already in seconds.
        FormatArg::Csv if input.unit_year.is_some() => {
            return Err(CliError::input(
                "--unit-year applies to fixed-width input only",
            ));
        }
        FormatArg::Csv => None,
        FormatArg::FixedWidth => {
            let path = input
                .column_map
                .as_deref()
                .ok_or_else(|| CliError::input("--format fixed-width requires --column-map"))?;
            let map = ColumnMap::load(path)?;
            let mut units = map.units()?;
            if let Some(year) = input.unit_year {
                units = units.with_year(year)?;
            }
            Some((map, units))
        }
    };
    let parse = |reader: &mut dyn Read, label: &str| -> Result<Vec<HalfLifeRecord>, CliError> {
        let records = match &fixed {
            Some((map, units)) => parse_fixed_width(BufReader::new(reader), map, units),
            None => parse_canonical_csv(reader),
        };
        records.map_err(|e| CliError::input(format!("{label}: {e}")))
    };
    let mut records = Vec::new();
    for path in &input.input {
        let mut file = fs::File::open(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        records.extend(parse(&mut file, &path.display().to_string())?);
    }
    if input.stdin {
        records.extend(parse(stdin, "<stdin>")?);
    }
    Ok(records)
}

fn read_values(input: &InputArgs, stdin: &mut dyn Read) -> Result<Vec<f64>, CliError> {
    Ok(filter_measurable(&read_records(input, stdin)?))
}

fn parse_base(base: u32) -> Result<Base, CliError> {
    Base::new(base).map_err(CliError::from)
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    records: usize,
    measurable: usize,
    upper_limit: usize,
    lower_limit: usize,
    stable: usize,
}

impl IngestSummary {
    fn new(records: &[HalfLifeRecord]) -> Self {
        let count = |f: &dyn Fn(&HalfLifeRecord) -> bool| records.iter().filter(|r| f(r)).count();
        IngestSummary {
            records: records.len(),
            measurable: filter_measurable(records).len(),
            upper_limit: count(&|r| !r.stable && r.bound == Bound::UpperLimit),
            lower_limit: count(&|r| !r.stable && r.bound == Bound::LowerLimit),
            stable: count(&|r| r.stable),
        }
    }
}

#[derive(Debug, Serialize)]
struct OstSummary {
    scaling_constant: f64,
    iterations: usize,
    n: usize,
    expected_p1: f64,
    error_band: f64,
    mean_p1: f64,
    max_deviation: f64,
    outside_one_band: usize,
    outside_three_bands: usize,
    points: Vec<OstPoint>,
}

impl From<OstTrace> for OstSummary {
    fn from(t: OstTrace) -> Self {
        OstSummary {
            scaling_constant: t.scaling_constant,
            iterations: t.points.len(),
            n: t.n,
            expected_p1: t.expected_p1,
            error_band: t.error_band,
            mean_p1: t.mean_p1(),
            max_deviation: t.max_deviation(),
            outside_one_band: t.outside_band(1.0),
            outside_three_bands: t.outside_band(3.0),
            points: t.points,
        }
    }
}

#[derive(Debug, Serialize)]
struct SpectrumSummary {
    axis_base: LogAxis,
    bin_width: f64,
    n_max: u32,
    /// Compliance index of the binned data, decimal digits.
    compliance_index: f64,
    samples: Vec<SpectrumSample>,
}

fn spectrum_summary(values: &[f64], args: &SpectrumArgs) -> Result<SpectrumSummary, CliError> {
    let axis = LogAxis::from(args.spectrum_axis);
    let hist = log_histogram(values, axis, args.spectrum_bin_width)?;
    let density = LogDensity::from_histogram(&hist)?;
    Ok(SpectrumSummary {
        axis_base: axis,
        bin_width: args.spectrum_bin_width,
        n_max: args.n_max,
        compliance_index: compliance_index(&density, args.n_max, Base::DECIMAL)?,
        samples: spectrum(&density, args.max_frequency, args.samples_per_unit)?,
    })
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum FitEntry {
    Ok(FitReport),
    Failed {
        axis_base: LogAxis,
        bin_width: f64,
        error: String,
    },
}

fn fit_entry(values: &[f64], axis: LogAxis, bin_width: f64) -> Result<FitEntry, CliError> {
    let hist = log_histogram(values, axis, bin_width)?;
    Ok(match fit_gaussian(&hist) {
        Ok(fit) => FitEntry::Ok(FitReport::new(&hist, &fit)?),
        Err(e) => FitEntry::Failed {
            axis_base: axis,
            bin_width,
            error: e.to_string(),
        },
    })
}

#[derive(Debug, Serialize)]
struct FullReport {
    input: IngestSummary,
    digits: ComplianceReport,
    ost: OstSummary,
    fits: Vec<FitEntry>,
    spectrum: SpectrumSummary,
}

fn digits_csv(report: &ComplianceReport) -> String {
    let mut out = String::from("digit,observed,expected,deviation,z\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.digit, r.observed, r.expected, r.deviation, r.z
        );
    }
    out
}

fn execute(
    command: Command,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Ingest { input, output } => {
            let records = read_records(&input, stdin)?;
            let summary = IngestSummary::new(&records);
            let _ = writeln!(
                stderr,
                "measurable: {} of {} records",
                summary.measurable, summary.records
            );
            let mut out = emitter("ingest", output, OutputFormat::Csv, stdout);
            let body = match out.format {
                OutputFormat::Csv => {
                    let kept: Vec<HalfLifeRecord> = records
                        .into_iter()
                        .filter(|r| r.bound == Bound::Exact && !r.stable)
                        .collect();
                    format!(
                        "# measurable={}\n{}",
                        summary.measurable,
                        to_canonical_csv(&kept)
                    )
                }
                OutputFormat::Json => to_json(&summary)?,
                OutputFormat::Text => format!(
                    "records {}\nmeasurable {}\nupper limits {}\nlower limits {}\nstable {}\n",
                    summary.records,
                    summary.measurable,
                    summary.upper_limit,
                    summary.lower_limit,
                    summary.stable
                ),
            };
            out.emit(&body)
        }
        Command::Digits {
            input,
            base,
            output,
        } => {
            let base = parse_base(base)?;
            let values = read_values(&input, stdin)?;
            let report = compliance_report(&take_census(&values, base)?);
            let mut out = emitter("digits", output, OutputFormat::Text, stdout);
            let body = match out.format {
                OutputFormat::Text => report.to_text(),
                OutputFormat::Json => to_json(&report)?,
                OutputFormat::Csv => digits_csv(&report),
            };
            out.emit(&body)
        }
        Command::Ost { input, ost, output } => {
            let values = read_values(&input, stdin)?;
            let trace = ones_scaling_test(&values, ost.scale, ost.iterations, Base::DECIMAL)?;
            let mut out = emitter("ost", output, OutputFormat::Csv, stdout);
            let body = match out.format {
                OutputFormat::Csv => trace.to_csv(),
                OutputFormat::Json => to_json(&OstSummary::from(trace))?,
                OutputFormat::Text => format!(
                    "c = {}, n = {}, expected P1 = {:.4} ± {:.4}\nmean P1 = {:.4}, max |P1 - expected| = {:.4}, points outside ±1 band: {} of {}\n",
                    trace.scaling_constant,
                    trace.n,
                    trace.expected_p1,
                    trace.error_band,
                    trace.mean_p1(),
                    trace.max_deviation(),
                    trace.outside_band(1.0),
                    trace.points.len()
                ),
            };
            out.emit(&body)
        }
        Command::Fit {
            input,
            axis,
            bin_width,
            output,
        } => {
            let values = read_values(&input, stdin)?;
            let hist = log_histogram(&values, axis.into(), bin_width)?;
            let mut out = emitter("fit", output, OutputFormat::Text, stdout);
            if out.format == OutputFormat::Csv {
                return out.emit(&hist.to_csv());
            }
            let report = FitReport::new(&hist, &fit_gaussian(&hist)?)?;
            let body = match out.format {
                OutputFormat::Json => to_json(&report)?,
                _ => report.to_text(),
            };
            out.emit(&body)
        }
        Command::Spectrum {
            input,
            spectrum: args,
            p1_curve: curve,
            output,
        } => {
            let values = read_values(&input, stdin)?;
            let mut out = emitter("spectrum", output, OutputFormat::Csv, stdout);
            if curve {
                let hist =
                    log_histogram(&values, args.spectrum_axis.into(), args.spectrum_bin_width)?;
                let density = LogDensity::from_histogram(&hist)?;
                let points = p1_curve(&density, Base::DECIMAL, 200)?;
                return out.emit(&p1_curve_to_csv(&points));
            }
            let summary = spectrum_summary(&values, &args)?;
            let body = match out.format {
                OutputFormat::Csv => spectrum_to_csv(&summary.samples),
                OutputFormat::Json => to_json(&summary)?,
                OutputFormat::Text => {
                    let mut s = format!(
                        "axis {}, bin width {}, compliance index (n <= {}) = {:.3e}\n",
                        summary.axis_base,
                        summary.bin_width,
                        summary.n_max,
                        summary.compliance_index
                    );
                    for sample in summary
                        .samples
                        .iter()
                        .filter(|x| x.frequency.fract() == 0.0)
                    {
                        let _ = writeln!(s, "|F({})| = {:.3e}", sample.frequency, sample.magnitude);
                    }
                    s
                }
            };
            out.emit(&body)
        }
        Command::Synth { synth, output } => {
            let kind = match synth.kind {
                KindArg::LogUniform => GeneratorKind::LogUniform {
                    decades: synth.decades,
                },
                KindArg::LogNormal => GeneratorKind::LogNormal {
                    mu: synth.mu,
                    sigma: synth.sigma,
                    axis: synth.axis.into(),
                },
                KindArg::PointMass => GeneratorKind::PointMass { x: synth.x },
                KindArg::Exponential => GeneratorKind::Exponential { rate: synth.rate },
            };
            let values = generate(&GeneratorSpec::new(kind, synth.n, synth.seed))?;
            let mut out = emitter("synth", output, OutputFormat::Csv, stdout);
            let body = match out.format {
                OutputFormat::Csv => to_canonical_csv(&as_records(&values)),
                OutputFormat::Json => to_json(&values)?,
                OutputFormat::Text => values.iter().map(|v| format!("{v:e}\n")).collect(),
            };
            out.emit(&body)
        }
        Command::Report {
            input,
            base,
            ost,
            bin_width,
            spectrum: args,
            output,
        } => {
            let base = parse_base(base)?;
            let records = read_records(&input, stdin)?;
            let values = filter_measurable(&records);
            let report = FullReport {
                input: IngestSummary::new(&records),
                digits: compliance_report(&take_census(&values, base)?),
                ost: ones_scaling_test(&values, ost.scale, ost.iterations, Base::DECIMAL)?.into(),
                fits: LogAxis::ALL
                    .iter()
                    .map(|&axis| fit_entry(&values, axis, bin_width))
                    .collect::<Result<_, _>>()?,
                spectrum: spectrum_summary(&values, &args)?,
            };
            let mut out = emitter("report", output, OutputFormat::Json, stdout);
            if out.format != OutputFormat::Json {
                return Err(CliError::input("report is only available as JSON"));
            }
            out.emit(&to_json(&report)?)
        }
    }
}
