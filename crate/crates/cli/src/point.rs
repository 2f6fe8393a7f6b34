use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, ValueEnum};
use kerr_qpd::husimi::{husimi_direct, husimi_point, F_DIRECT_CAP};
use kerr_qpd::wigner::{wigner_fock_oracle, wigner_point_detailed, FOCK_CUTOFF_CAP};
use kerr_qpd::{Complex64, Error, FEvalOptions, KerrState64, LogReal64, WignerOptions};
use serde::Serialize;

use crate::common::{check_rel_eps, emit, out_path, to_json, Bessel, CliError, CliResult, StateArgs, ValueReport};

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Husimi,
    Wigner,
    Both,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fast,
    Oracle,
    Both,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, allow_negative_numbers = true)]
    beta_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta_im: f64,
    #[arg(long, value_enum, default_value_t = PointKind::Both)]
    kind: PointKind,
    #[arg(long, value_enum, default_value_t = Method::Fast)]
    method: Method,
    /// Bessel kernel of the Wigner series.
    #[arg(long, value_enum, default_value_t = Bessel::Auto)]
    bessel: Bessel,
    /// Wigner series truncation relative to the largest term.
    #[arg(long, default_value_t = 1e-8)]
    rel_eps: f64,
    /// Order of the saddle-point correction for Q.
    #[arg(long, default_value_t = 1)]
    correction_order: usize,
    /// Fock cutoff of the Wigner oracle; chosen from |α| when omitted.
    #[arg(long)]
    fock_cutoff: Option<usize>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PointConfig {
    command: &'static str,
    state: StateArgs,
    beta_re: f64,
    beta_im: f64,
    kind: PointKind,
    method: Method,
    bessel: Bessel,
    exact_bessel: bool,
    rel_eps: f64,
    correction_order: usize,
    fock_cutoff: Option<usize>,
}

#[derive(Serialize)]
struct Evaluation {
    kind: &'static str,
    method: &'static str,
    evaluator: String,
    #[serde(flatten)]
    value: ValueReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    kmax: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kmax_truncated: Option<bool>,
}

#[derive(Serialize)]
struct Comparison {
    kind: &'static str,
    abs_deviation: f64,
    log_mag_deviation: Option<f64>,
}

#[derive(Serialize)]
struct PointReport {
    config: PointConfig,
    evaluations: Vec<Evaluation>,
    comparisons: Vec<Comparison>,
    notes: Vec<String>,
}

/// Smallest admissible Fock cutoff for `|α|`.
fn default_cutoff(abs_alpha: f64) -> CliResult<usize> {
    let a2 = abs_alpha * abs_alpha;
    let need = a2 + 10.0 * (a2 + 1.0).sqrt();
    if need > FOCK_CUTOFF_CAP as f64 {
        return Err(CliError::Numeric(Error::OracleOutOfRange {
            what: "Fock cutoff |alpha|^2 + 10 sqrt(|alpha|^2 + 1)",
            value: need,
            cap: FOCK_CUTOFF_CAP as f64,
        }));
    }
    Ok(((need.ceil() as usize) + 10).min(FOCK_CUTOFF_CAP))
}

fn eval(kind: &'static str, method: &'static str, evaluator: String, v: LogReal64) -> Evaluation {
    Evaluation { kind, method, evaluator, value: v.into(), kmax: None, kmax_truncated: None }
}

fn compare(kind: &'static str, fast: &Evaluation, oracle: &Evaluation) -> Comparison {
    let log_mag_deviation = match (fast.value.log_mag, oracle.value.log_mag) {
        (Some(a), Some(b)) if fast.value.sign == oracle.value.sign => Some((a - b).abs()),
        _ => None,
    };
    Comparison { kind, abs_deviation: (fast.value.value - oracle.value.value).abs(), log_mag_deviation }
}

/// Runs the oracle, or records why it is unavailable when `optional`.
fn oracle_or_note<F>(optional: bool, notes: &mut Vec<String>, f: F) -> CliResult<Option<Evaluation>>
where
    F: FnOnce() -> CliResult<Evaluation>,
{
    match f() {
        Ok(e) => Ok(Some(e)),
        Err(CliError::Numeric(e)) if optional => {
            notes.push(format!("oracle unavailable: {e}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn husimi(state: &KerrState64, beta: Complex64, args: &PointArgs, report: &mut PointReport) -> CliResult<()> {
    let fast_wanted = args.method != Method::Oracle;
    let oracle_wanted = args.method != Method::Fast;
    let mut fast = None;
    if fast_wanted {
        let opts = FEvalOptions { correction_order: args.correction_order, ..Default::default() };
        let v = husimi_point(state, beta, &opts)?;
        fast = Some(eval("husimi", "fast", "saddle-point".into(), v));
    }
    let mut oracle = None;
    if oracle_wanted {
        oracle = oracle_or_note(args.method == Method::Both, &mut report.notes, || {
            let size = state.alpha.norm() * beta.norm();
            if size > F_DIRECT_CAP {
                return Err(CliError::Numeric(Error::OracleOutOfRange { what: "|alpha|*|beta|", value: size, cap: F_DIRECT_CAP }));
            }
            Ok(eval("husimi", "oracle", "direct series".into(), husimi_direct(state, beta)?))
        })?;
    }
    if let (Some(f), Some(o)) = (&fast, &oracle) {
        report.comparisons.push(compare("husimi", f, o));
    }
    report.evaluations.extend(fast.into_iter().chain(oracle));
    Ok(())
}

fn wigner(state: &KerrState64, beta: Complex64, args: &PointArgs, report: &mut PointReport) -> CliResult<()> {
    let mut fast = None;
    if args.method != Method::Oracle {
        let opts = WignerOptions { rel_eps: args.rel_eps, exact_bessel: report.config.exact_bessel, kmax_cap: None };
        let e = wigner_point_detailed(state, beta, &opts).map_err(|e| match e {
            Error::UseExact { .. } => CliError::Numeric(Error::Precondition(format!("{e}; pass --bessel exact"))),
            e => e.into(),
        })?;
        let kernel = if opts.exact_bessel { "exact Bessel" } else { "asymptotic Bessel" };
        let mut ev = eval("wigner", "fast", format!("Fourier-Bessel series, {kernel}"), e.value);
        if state.gamma != 0.0 {
            ev.kmax = Some(e.kmax.kmax);
            ev.kmax_truncated = Some(e.kmax.truncated);
        }
        fast = Some(ev);
    }
    let mut oracle = None;
    if args.method != Method::Fast {
        let optional = args.method == Method::Both;
        let cutoff = report.config.fock_cutoff;
        oracle = oracle_or_note(optional, &mut report.notes, || {
            let n_cut = match cutoff {
                Some(n) => n,
                None => default_cutoff(state.alpha.norm())?,
            };
            let v = wigner_fock_oracle(state, beta, n_cut)?;
            Ok(eval("wigner", "oracle", format!("Fock basis, cutoff {n_cut}"), LogReal64::from_value(v)))
        })?;
    }
    if let (Some(f), Some(o)) = (&fast, &oracle) {
        report.comparisons.push(compare("wigner", f, o));
    }
    report.evaluations.extend(fast.into_iter().chain(oracle));
    Ok(())
}

fn fmt_value(v: &ValueReport) -> String {
    let lm = v.log_mag.map_or("-inf".to_string(), |l| format!("{l:.16e}"));
    format!("value = {:.16e}  log_mag = {lm}  sign = {:+}", v.value, v.sign)
}

fn render_text(r: &PointReport) -> String {
    let mut s = String::new();
    for e in &r.evaluations {
        s += &format!("{} {} [{}]: {}", e.kind, e.method, e.evaluator, fmt_value(&e.value));
        if let Some(k) = e.kmax {
            s += &format!("  k_max = {k}");
            if e.kmax_truncated == Some(true) {
                s += " (truncated at cap)";
            }
        }
        s.push('\n');
    }
    for c in &r.comparisons {
        s += &format!("{} fast vs oracle: |deviation| = {:.3e}", c.kind, c.abs_deviation);
        if let Some(d) = c.log_mag_deviation {
            s += &format!("  |log_mag deviation| = {d:.3e}");
        }
        s.push('\n');
    }
    for n in &r.notes {
        s += &format!("note: {n}\n");
    }
    s
}

pub fn run(args: &PointArgs) -> CliResult<ExitCode> {
    let state = args.state.state()?;
    check_rel_eps(args.rel_eps)?;
    if !(args.beta_re.is_finite() && args.beta_im.is_finite()) {
        return Err(CliError::Usage("--beta-re and --beta-im must be finite".into()));
    }
    let beta = Complex64::new(args.beta_re, args.beta_im);
    let wants_wigner = args.kind != PointKind::Husimi;
    let fock_cutoff = match (wants_wigner && args.method != Method::Fast, args.fock_cutoff) {
        (true, None) => default_cutoff(state.alpha.norm()).ok(),
        (_, c) => c,
    };
    let mut report = PointReport {
        config: PointConfig {
            command: "point",
            state: args.state,
            beta_re: args.beta_re,
            beta_im: args.beta_im,
            kind: args.kind,
            method: args.method,
            bessel: args.bessel,
            exact_bessel: args.bessel.use_exact(state.alpha.norm(), beta.norm()),
            rel_eps: args.rel_eps,
            correction_order: args.correction_order,
            fock_cutoff,
        },
        evaluations: Vec::new(),
        comparisons: Vec::new(),
        notes: Vec::new(),
    };
    if args.kind != PointKind::Wigner {
        husimi(&state, beta, args, &mut report)?;
    }
    if wants_wigner {
        wigner(&state, beta, args, &mut report)?;
    }
    let text = match args.format {
        ReportFormat::Text => render_text(&report),
        ReportFormat::Json => to_json(&report),
    };
    emit(out_path(&args.out), &text)?;
    Ok(ExitCode::SUCCESS)
}
