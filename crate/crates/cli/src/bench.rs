use std::hint::black_box;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Args;
use kerr_qpd::husimi::{husimi_direct, husimi_point};
use kerr_qpd::wigner::{find_kmax, wigner_point};
use kerr_qpd::{Complex64, FEvalOptions, KerrState64, WignerOptions};
use serde::Serialize;

use crate::common::{emit, fit_slope, out_path, to_json, CliError, CliResult};
use crate::point::ReportFormat;

pub const HUSIMI_BAND: [f64; 2] = [-0.1, 0.1];
pub const SQRT_BAND: [f64; 2] = [0.35, 0.65];
pub const KMAX_BAND: [f64; 2] = [0.8, 1.2];

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Amplitudes |α| for the fast evaluators; Γ = 2/|α|².
    #[arg(long, value_delimiter = ',', default_value = "1e2,1e3,1e4,3e4")]
    amps: Vec<f64>,
    /// Amplitudes for the direct Husimi series.
    #[arg(long, value_delimiter = ',', default_value = "10,20,50,100")]
    direct_amps: Vec<f64>,
    /// β points per amplitude, spread across the ridge.
    #[arg(long, default_value_t = 8)]
    points: usize,
    /// Timed repetitions; the fastest is kept.
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct BenchConfig {
    command: &'static str,
    amps: Vec<f64>,
    direct_amps: Vec<f64>,
    points: usize,
    repeats: usize,
    workers: usize,
}

#[derive(Serialize)]
struct FastRow {
    abs_alpha: f64,
    nbar: f64,
    gamma: f64,
    husimi_point_us: f64,
    wigner_point_us: f64,
    kmax_mean: f64,
    kmax_max: u64,
}

#[derive(Serialize)]
struct DirectRow {
    abs_alpha: f64,
    nbar: f64,
    gamma: f64,
    husimi_direct_us: f64,
}

#[derive(Serialize)]
struct Slope {
    value: f64,
    band: [f64; 2],
    within_band: bool,
}

impl Slope {
    fn new(value: f64, band: [f64; 2]) -> Self {
        Self { value, band, within_band: value >= band[0] && value <= band[1] }
    }
}

#[derive(Serialize)]
struct Slopes {
    /// d log t / d log n̄.
    husimi_point: Option<Slope>,
    wigner_point: Option<Slope>,
    husimi_direct: Option<Slope>,
    /// d log k_max / d log |α|.
    kmax_exponent: Option<Slope>,
}

#[derive(Serialize)]
struct BenchReport {
    config: BenchConfig,
    fast: Vec<FastRow>,
    direct: Vec<DirectRow>,
    slopes: Slopes,
}

fn ridge(state: &KerrState64, n: usize) -> Vec<Complex64> {
    let a = state.alpha.norm();
    let centre = state.alpha.arg() + 2.0 * state.gamma * a * a;
    let width = 1.0 / a + 2.0 * state.gamma.abs() * a;
    (0..n)
        .map(|i| {
            let u = if n == 1 { 0.0 } else { -1.0 + 2.0 * i as f64 / (n - 1) as f64 };
            Complex64::from_polar(a, centre + u * width)
        })
        .collect()
}

/// Best-of-`repeats` mean time per call, in microseconds.
fn time_per_point<F>(betas: &[Complex64], repeats: usize, mut f: F) -> CliResult<f64>
where
    F: FnMut(Complex64) -> kerr_qpd::Result<f64>,
{
    let mut best = f64::INFINITY;
    for _ in 0..repeats {
        let t = Instant::now();
        for &b in betas {
            black_box(f(black_box(b))?);
        }
        best = best.min(t.elapsed().as_secs_f64());
    }
    Ok(best * 1e6 / betas.len() as f64)
}

fn slope(pts: &[(f64, f64)], band: [f64; 2]) -> Option<Slope> {
    (pts.len() >= 2).then(|| Slope::new(fit_slope(pts), band))
}

fn render_table(r: &BenchReport) -> String {
    let mut s = String::from("|alpha|      nbar        gamma       husimi_point[us]  wigner_point[us]  k_max(mean)\n");
    for row in &r.fast {
        s += &format!(
            "{:<12.4e} {:<11.4e} {:<11.4e} {:>16.3} {:>17.3} {:>12.1}\n",
            row.abs_alpha, row.nbar, row.gamma, row.husimi_point_us, row.wigner_point_us, row.kmax_mean
        );
    }
    if !r.direct.is_empty() {
        s += "\n|alpha|      nbar        husimi_direct[us]\n";
        for row in &r.direct {
            s += &format!("{:<12.4e} {:<11.4e} {:>17.3}\n", row.abs_alpha, row.nbar, row.husimi_direct_us);
        }
    }
    s += "\nslope                 value     band\n";
    let slopes = [
        ("husimi_point vs nbar", &r.slopes.husimi_point),
        ("wigner_point vs nbar", &r.slopes.wigner_point),
        ("husimi_direct vs nbar", &r.slopes.husimi_direct),
        ("k_max vs |alpha|", &r.slopes.kmax_exponent),
    ];
    for (name, sl) in slopes {
        if let Some(sl) = sl {
            let flag = if sl.within_band { "" } else { "  (outside band)" };
            s += &format!("{name:<21} {:>7.3}   [{}, {}]{flag}\n", sl.value, sl.band[0], sl.band[1]);
        }
    }
    s
}

pub fn run(args: &BenchArgs) -> CliResult<ExitCode> {
    if args.points == 0 || args.repeats == 0 {
        return Err(CliError::Usage("--points and --repeats must be positive".into()));
    }
    if args.amps.iter().chain(&args.direct_amps).any(|&a| !(a > 0.0 && a.is_finite())) {
        return Err(CliError::Usage("amplitudes must be positive and finite".into()));
    }
    let fopts = FEvalOptions::default();
    let wopts = WignerOptions::default();
    let mut fast = Vec::new();
    for &a in &args.amps {
        let gamma = 2.0 / (a * a);
        let state = KerrState64::from_polar(a, 0.0, gamma);
        let betas = ridge(&state, args.points);
        let husimi_point_us = time_per_point(&betas, args.repeats, |b| Ok(husimi_point(&state, b, &fopts)?.log_mag))?;
        let wigner_point_us = time_per_point(&betas, args.repeats, |b| Ok(wigner_point(&state, b, &wopts)?.log_mag))?;
        let mut kmax = Vec::with_capacity(betas.len());
        for &b in &betas {
            kmax.push(find_kmax(&state, b, &wopts)?.kmax);
        }
        fast.push(FastRow {
            abs_alpha: a,
            nbar: a * a,
            gamma,
            husimi_point_us,
            wigner_point_us,
            kmax_mean: kmax.iter().sum::<u64>() as f64 / kmax.len() as f64,
            kmax_max: kmax.iter().copied().max().unwrap_or(0),
        });
    }
    let mut direct = Vec::new();
    for &a in &args.direct_amps {
        let gamma = 2.0 / (a * a);
        let state = KerrState64::from_polar(a, 0.0, gamma);
        let betas = ridge(&state, args.points);
        let us = time_per_point(&betas, args.repeats, |b| Ok(husimi_direct(&state, b)?.log_mag))?;
        direct.push(DirectRow { abs_alpha: a, nbar: a * a, gamma, husimi_direct_us: us });
    }
    let logs = |f: &dyn Fn(&FastRow) -> f64| -> Vec<(f64, f64)> { fast.iter().map(|r| (r.nbar.ln(), f(r).ln())).collect() };
    let slopes = Slopes {
        husimi_point: slope(&logs(&|r| r.husimi_point_us), HUSIMI_BAND),
        wigner_point: slope(&logs(&|r| r.wigner_point_us), SQRT_BAND),
        husimi_direct: slope(&direct.iter().map(|r| (r.nbar.ln(), r.husimi_direct_us.ln())).collect::<Vec<_>>(), SQRT_BAND),
        kmax_exponent: slope(&fast.iter().map(|r| (r.abs_alpha.ln(), r.kmax_mean.ln())).collect::<Vec<_>>(), KMAX_BAND),
    };
    let report = BenchReport {
        config: BenchConfig {
            command: "bench",
            amps: args.amps.clone(),
            direct_amps: args.direct_amps.clone(),
            points: args.points,
            repeats: args.repeats,
            workers: 1,
        },
        fast,
        direct,
        slopes,
    };
    let json = to_json(&report);
    match args.format {
        ReportFormat::Text => {
            print!("{}", render_table(&report));
            if let Some(p) = &args.out {
                emit(Some(p), &json)?;
            }
        }
        ReportFormat::Json => emit(out_path(&args.out), &json)?,
    }
    Ok(ExitCode::SUCCESS)
}
