//! Acceptance suite. Each criterion prints one `PASS`, `FAIL` or `SKIP`
//! line; the process exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use benford_core::catalog::parse_canonical_csv;
use benford_core::census::expectations;
use benford_core::fitting::{fit_gaussian_points, hwhm_to_sigma};
use benford_core::scaling::{error_band, ones_scaling_test};
use benford_core::spectral::{gaussian_ft_sigma, spectrum};
use benford_core::{
    compliance_index, filter_measurable, fit_gaussian, generate, log_histogram, p1_convolution,
    take_census, Base, GeneratorKind, GeneratorSpec, LogAxis, LogDensity,
};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::{Fail, Pass, Skip};

type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn lognormal(mu: f64, sigma: f64, axis: LogAxis, n: usize, seed: u64) -> Vec<f64> {
    let kind = GeneratorKind::LogNormal { mu, sigma, axis };
    generate(&GeneratorSpec::new(kind, n, seed)).expect("valid generator")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn table1_expectations() -> Outcome {
    let want = [
        (692, 22),
        (405, 18),
        (287, 16),
        (223, 14),
        (182, 13),
        (154, 12),
        (133, 11),
        (118, 11),
        (105, 10),
    ];
    let start = Instant::now();
    let got: Vec<(i64, i64)> = expectations(2298, Base::DECIMAL)
        .iter()
        .map(|e| (e.expected.round() as i64, e.deviation.round() as i64))
        .collect();
    let elapsed = start.elapsed();
    let matches = got.iter().zip(&want).all(|(g, w)| *g == (w.0, w.1));
    check(
        matches && elapsed < Duration::from_millis(1),
        format!("{got:?} in {elapsed:?}"),
    )
}

fn table1_census() -> Outcome {
    let path = std::env::var_os("BENFORD_NUBASE_CSV")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/nubase2003.csv")
        });
    if !path.is_file() {
        return Skip(format!(
            "SKIPPED: NUBASE2003 canonical CSV not found (set BENFORD_NUBASE_CSV or add {})",
            path.display()
        ));
    }
    let records = match std::fs::File::open(&path)
        .map_err(|e| e.to_string())
        .and_then(|f| parse_canonical_csv(f).map_err(|e| e.to_string()))
    {
        Ok(r) => r,
        Err(e) => return Fail(e),
    };
    let values = filter_measurable(&records);
    let census = take_census(&values, Base::DECIMAL).expect("measurable values are positive");
    let want = [701, 405, 281, 210, 209, 149, 112, 119, 112];
    check(
        values.len() == 2298 && census.counts() == want,
        format!("{} values, counts {:?}", values.len(), census.counts()),
    )
}

fn ost_band() -> Outcome {
    let values = lognormal(1.0503, 2.56, LogAxis::Lg, 2298, 1);
    let start = Instant::now();
    let trace = ones_scaling_test(&values, 1.01, 1000, Base::DECIMAL).expect("valid OST");
    let elapsed = start.elapsed();
    let (lo, hi) = (0.301 - 4.0 * 0.0096, 0.301 + 4.0 * 0.0096);
    let inside = trace.points.iter().all(|p| (lo..=hi).contains(&p.p1));
    let (min, max) = trace
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.p1), b.max(p.p1))
        });
    check(
        trace.points.len() == 1000 && inside && elapsed < Duration::from_secs(1),
        format!(
            "P1 in [{min:.4}, {max:.4}], band [{lo:.4}, {hi:.4}], sqrt band {:.4}, {elapsed:?}",
            error_band(2298, Base::DECIMAL)
        ),
    )
}

fn ost_periodicity() -> Outcome {
    let c = 10f64.powf(0.01);
    let sets = [
        (
            "log-uniform",
            generate(&GeneratorSpec::new(
                GeneratorKind::LogUniform { decades: 3 },
                5000,
                3,
            ))
            .unwrap(),
        ),
        ("log-normal", lognormal(1.0503, 2.56, LogAxis::Lg, 2298, 4)),
        (
            "narrow log-normal",
            lognormal(0.3, 0.05, LogAxis::Lg, 777, 5),
        ),
        (
            "exponential",
            generate(&GeneratorSpec::new(
                GeneratorKind::Exponential { rate: 2.0 },
                1000,
                6,
            ))
            .unwrap(),
        ),
        ("point mass", vec![1.5; 10]),
    ];
    let mut mismatches = 0;
    for (_, values) in &sets {
        let trace = ones_scaling_test(values, c, 1000, Base::DECIMAL).expect("valid OST");
        mismatches += (0..900)
            .filter(|&m| trace.points[m].p1 != trace.points[m + 100].p1)
            .count();
    }
    check(
        mismatches == 0,
        format!(
            "{} input sets, {mismatches} mismatching pairs out of {}",
            sets.len(),
            900 * sets.len()
        ),
    )
}

fn uniform_compliance() -> Outcome {
    let f = LogDensity::uniform(0.0, 1.0).unwrap();
    let index = compliance_index(&f, 8, Base::DECIMAL).unwrap();
    let lg2 = 2f64.log10();
    let worst = (0..50)
        .map(|k| -1.5 + 0.0731 * f64::from(k))
        .map(|gamma| (p1_convolution(&f, gamma, Base::DECIMAL).unwrap() - lg2).abs())
        .fold(0.0, f64::max);
    check(
        index < 1e-9 && worst <= 1e-9,
        format!("compliance index {index:.3e}, max |P1 - lg 2| {worst:.3e}"),
    )
}

fn gaussian_spectrum() -> Outcome {
    let sigma = 2.56;
    let f = LogDensity::gaussian(1.0503, sigma).unwrap();
    let samples = spectrum(&f, 3, 100).unwrap();
    let closed = |nu: f64| (-(2.0 * std::f64::consts::PI * sigma * nu).powi(2) / 2.0).exp();
    let worst = samples
        .iter()
        .map(|s| (s.magnitude - closed(s.frequency)).abs())
        .fold(0.0, f64::max);
    let at_one = samples
        .iter()
        .find(|s| s.frequency == 1.0)
        .map(|s| s.magnitude);
    let width = gaussian_ft_sigma(sigma).unwrap();
    check(
        samples.len() == 301
            && worst <= 1e-6
            && at_one.is_some_and(|m| m < 1e-12)
            && (width - 0.0622).abs() <= 0.0005,
        format!(
            "max deviation {worst:.3e} over {} samples, |F(1)| = {:.3e}, sigma_F = {width:.5}",
            samples.len(),
            at_one.unwrap_or(f64::NAN)
        ),
    )
}

fn convolution_vs_monte_carlo() -> Outcome {
    let start = Instant::now();
    let f = LogDensity::gaussian(2.0, 1.0).unwrap();
    let predicted = p1_convolution(&f, 0.0, Base::DECIMAL).unwrap();
    let n = 1_000_000;
    let values = lognormal(2.0, 1.0, LogAxis::Lg, n, 7);
    let observed = take_census(&values, Base::DECIMAL).unwrap().count(1) as f64 / n as f64;
    let elapsed = start.elapsed();
    let sd = (predicted * (1.0 - predicted) / n as f64).sqrt();
    let z = (observed - predicted) / sd;
    check(
        z.abs() <= 4.0 && elapsed < Duration::from_secs(5),
        format!("predicted {predicted:.6}, observed {observed:.6}, z = {z:.2}, {elapsed:?}"),
    )
}

fn hwhm_conversion() -> Outcome {
    let sigma = hwhm_to_sigma(3.0139).unwrap();
    check(
        (sigma - 2.5599).abs() <= 1e-4,
        format!("3.0139 / sqrt(2 ln 2) = {sigma:.6}, target 2.5599 +/- 0.0001"),
    )
}

fn table2_powers() -> Outcome {
    let rows = [
        (LogAxis::Lg, 1.0503, 11.23),
        (LogAxis::Ln, 3.030, 20.70),
        (LogAxis::Lb, 4.609, 24.40),
        (LogAxis::Lg, 3.0139, 1032.5),
        (LogAxis::Ln, 6.889, 981.4),
        (LogAxis::Lb, 9.909, 961.4),
    ];
    let worst = rows
        .iter()
        .map(|&(axis, x, printed)| (axis.pow(x) / printed - 1.0).abs())
        .fold(0.0, f64::max);
    check(
        worst <= 0.005,
        format!("max relative deviation {:.3}%", 100.0 * worst),
    )
}

fn fit_recovery() -> Outcome {
    let start = Instant::now();
    let mut noiseless_err: f64 = 0.0;
    for &(mu, sigma, width) in &[
        (1.0503_f64, 2.56_f64, 1.0_f64),
        (3.030, 5.9, 1.0),
        (-2.0, 0.7, 0.25),
    ] {
        let x: Vec<f64> = (-60..=60)
            .map(|k| mu.round() + width * f64::from(k))
            .collect();
        let amplitude = 2298.0 * width / (sigma * (2.0 * std::f64::consts::PI).sqrt());
        let y: Vec<f64> = x
            .iter()
            .map(|&xi| amplitude * (-0.5 * ((xi - mu) / sigma).powi(2)).exp())
            .collect();
        match fit_gaussian_points(&x, &y) {
            Ok(fit) => {
                noiseless_err = noiseless_err
                    .max((fit.mean - mu).abs())
                    .max((fit.sigma - sigma).abs())
            }
            Err(e) => return Fail(format!("noiseless fit failed: {e}")),
        }
    }
    let mut recovered = 0;
    for seed in 1..=100 {
        let values = lognormal(1.0503, 2.56, LogAxis::Lg, 2298, seed);
        let hist = log_histogram(&values, LogAxis::Lg, 1.0).unwrap();
        if let Ok(fit) = fit_gaussian(&hist) {
            if (fit.mean - 1.0503).abs() <= 3.0 * fit.mean_err {
                recovered += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        noiseless_err <= 1e-6 && recovered >= 95 && elapsed < Duration::from_secs(10),
        format!("noiseless max error {noiseless_err:.2e}, {recovered}/100 seeds within 3 SE, {elapsed:?}"),
    )
}

fn report_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_benford");
    let runs: [(&str, Vec<String>); 2] = [
        (
            "csv",
            vec![
                "report".into(),
                "--input".into(),
                fixture("halflives.csv").display().to_string(),
            ],
        ),
        (
            "fixed-width",
            vec![
                "report".into(),
                "--input".into(),
                fixture("nubase_like.txt").display().to_string(),
                "--format".into(),
                "fixed-width".into(),
                "--column-map".into(),
                fixture("nubase_like.map").display().to_string(),
            ],
        ),
    ];
    let mut details = Vec::new();
    for (label, args) in &runs {
        let outputs: Vec<_> = ["1", "4", ""]
            .iter()
            .map(|threads| {
                let mut cmd = Command::new(exe);
                cmd.args(args);
                if !threads.is_empty() {
                    cmd.env("RAYON_NUM_THREADS", threads);
                }
                cmd.output().expect("binary runs")
            })
            .collect();
        if let Some(bad) = outputs.iter().find(|o| !o.status.success()) {
            return Fail(format!("{label}: {}", String::from_utf8_lossy(&bad.stderr)));
        }
        if outputs.iter().any(|o| o.stdout != outputs[0].stdout) {
            return Fail(format!("{label}: report output differs between runs"));
        }
        details.push(format!("{label} {} bytes", outputs[0].stdout.len()));
    }
    Pass(format!(
        "{} identical across 3 runs each",
        details.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("expected counts for N = 2298", table1_expectations),
        ("observed catalog census", table1_census),
        ("scaling test stays in band", ost_band),
        ("scaling test periodicity", ost_periodicity),
        ("uniform decade compliance", uniform_compliance),
        ("Gaussian spectrum closed form", gaussian_spectrum),
        ("convolution vs Monte Carlo", convolution_vs_monte_carlo),
        ("HWHM to sigma conversion", hwhm_conversion),
        ("base powers of fitted parameters", table2_powers),
        ("Gaussian fit recovery", fit_recovery),
        ("report determinism", report_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Skip(d) => ("SKIP", d),
        };
        println!("{tag} [{:>2}] {name}: {detail}", i + 1);
    }
    println!("acceptance: {} criteria, {failed} failed", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
