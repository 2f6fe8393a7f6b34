use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use kerr_qpd::specfun::BESSEL_EXACT_CAP;
use kerr_qpd::{KerrState64, LogReal64};
use serde::Serialize;

pub enum CliError {
    Usage(String),
    Numeric(kerr_qpd::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl From<kerr_qpd::Error> for CliError {
    fn from(e: kerr_qpd::Error) -> Self {
        match e {
            kerr_qpd::Error::Io { .. } => CliError::Io(e.to_string()),
            e => CliError::Numeric(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Args, Serialize, Clone, Copy, Debug)]
pub struct StateArgs {
    /// |α|, the coherent amplitude magnitude.
    #[arg(long)]
    pub alpha_abs: f64,
    /// arg α in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_arg: f64,
    /// Dimensionless Kerr phase Γ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
}

impl StateArgs {
    pub fn state(&self) -> CliResult<KerrState64> {
        if !(self.alpha_abs >= 0.0 && self.alpha_abs.is_finite()) {
            return Err(CliError::Usage(format!("--alpha-abs must be finite and non-negative, got {}", self.alpha_abs)));
        }
        if !self.alpha_arg.is_finite() || !self.gamma.is_finite() {
            return Err(CliError::Usage("--alpha-arg and --gamma must be finite".into()));
        }
        Ok(KerrState64::from_polar(self.alpha_abs, self.alpha_arg, self.gamma))
    }
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Bessel {
    /// Exact kernel when 4|α||β| is within its range, asymptotic otherwise.
    Auto,
    Exact,
    Asymptotic,
}

impl Bessel {
    /// Whether the exact kernel is used for arguments up to `4|α| max|β|`.
    pub fn use_exact(self, abs_alpha: f64, max_abs_beta: f64) -> bool {
        match self {
            Bessel::Auto => 4.0 * abs_alpha * max_abs_beta <= BESSEL_EXACT_CAP,
            Bessel::Exact => true,
            Bessel::Asymptotic => false,
        }
    }
}

pub fn check_rel_eps(rel_eps: f64) -> CliResult<()> {
    if rel_eps > 0.0 && rel_eps <= 1e-2 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--rel-eps must lie in (0, 1e-2], got {rel_eps}")))
    }
}

#[derive(Serialize)]
pub struct ValueReport {
    pub value: f64,
    pub log_mag: Option<f64>,
    pub sign: i8,
}

impl From<LogReal64> for ValueReport {
    fn from(v: LogReal64) -> Self {
        Self { value: v.value(), log_mag: (v.sign != 0).then_some(v.log_mag), sign: v.sign }
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

pub fn out_path(p: &Option<PathBuf>) -> Option<&Path> {
    p.as_deref()
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
