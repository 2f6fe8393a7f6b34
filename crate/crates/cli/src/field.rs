use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use kerr_qpd::grid::{auto_window, eval_field, integrate_field, write_field, FieldFormat, FieldKind, FieldOptions, GridMode, GridSpec};
use kerr_qpd::{Complex64, FEvalOptions, WignerOptions};
use serde::Serialize;

use crate::common::{check_rel_eps, Bessel, CliError, CliResult, StateArgs};

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Husimi,
    Wigner,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Auto,
    Polar,
    Cartesian,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Csv,
    Json,
}

/// `NxM` node counts.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Resolution(pub [usize; 2]);

impl FromStr for Resolution {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Resolution([parse(a)?, parse(b)?]))
    }
}

/// `A,B` half-widths.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Extent(pub [f64; 2]);

impl FromStr for Extent {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected A,B, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Extent([parse(a)?, parse(b)?]))
    }
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Nodes per axis: radial x angular (polar) or x x p (cartesian).
    #[arg(long, default_value = "200x200")]
    res: Resolution,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Window centre, overriding the automatic window.
    #[arg(long, allow_negative_numbers = true)]
    center_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    center_im: Option<f64>,
    /// Half-widths per axis as `A,B`.
    #[arg(long)]
    extent: Option<Extent>,
    /// Worker threads; 0 uses all cores. Does not change the output.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Bessel::Auto)]
    bessel: Bessel,
    #[arg(long, default_value_t = 1e-8)]
    rel_eps: f64,
    #[arg(long, default_value_t = 1)]
    correction_order: usize,
}

#[derive(Serialize)]
struct FieldConfig {
    command: &'static str,
    state: StateArgs,
    kind: Kind,
    spec: GridSpec<f64>,
    bessel: Bessel,
    exact_bessel: bool,
    rel_eps: f64,
    correction_order: usize,
    format: FormatArg,
}

fn resolve_spec(args: &FieldArgs, auto: GridSpec<f64>) -> CliResult<GridSpec<f64>> {
    let mode = match args.mode {
        ModeArg::Auto => auto.mode,
        ModeArg::Polar => GridMode::Polar,
        ModeArg::Cartesian => GridMode::Cartesian,
    };
    let mut spec = auto;
    if mode != auto.mode {
        spec.mode = mode;
        spec.extent = match mode {
            GridMode::Polar => [4.0, std::f64::consts::PI],
            GridMode::Cartesian => {
                let r = auto.center.norm();
                let h = 4.0 + r * auto.extent[1].min(std::f64::consts::FRAC_PI_2).sin();
                [h, h]
            }
        };
    }
    if args.center_re.is_some() || args.center_im.is_some() {
        spec.center = Complex64::new(args.center_re.unwrap_or(spec.center.re), args.center_im.unwrap_or(spec.center.im));
    }
    if let Some(Extent(e)) = args.extent {
        spec.extent = e;
    }
    spec.resolution = args.res.0;
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(spec)
}

fn max_radius(spec: &GridSpec<f64>) -> f64 {
    match spec.mode {
        GridMode::Polar => spec.range(0).1,
        GridMode::Cartesian => spec.center.norm() + spec.extent[0].hypot(spec.extent[1]),
    }
}

pub fn run(args: &FieldArgs) -> CliResult<ExitCode> {
    let state = args.state.state()?;
    check_rel_eps(args.rel_eps)?;
    let spec = resolve_spec(args, auto_window(&state))?;
    let exact_bessel = args.bessel.use_exact(state.alpha.norm(), max_radius(&spec));
    let kind = match args.kind {
        Kind::Husimi => FieldKind::Husimi,
        Kind::Wigner => FieldKind::Wigner,
    };
    let options = FieldOptions {
        husimi: FEvalOptions { correction_order: args.correction_order, ..Default::default() },
        wigner: WignerOptions { rel_eps: args.rel_eps, kmax_cap: None, exact_bessel },
        workers: args.workers,
    };
    let config = FieldConfig {
        command: "field",
        state: args.state,
        kind: args.kind,
        spec,
        bessel: args.bessel,
        exact_bessel,
        rel_eps: args.rel_eps,
        correction_order: args.correction_order,
        format: args.format,
    };
    let field = eval_field(&state, &spec, kind, &options)?;
    let format = match args.format {
        FormatArg::Csv => FieldFormat::Csv,
        FormatArg::Json => FieldFormat::Json,
    };
    let cfg = serde_json::to_value(&config).expect("config serialises");
    write_field(&field, format, &args.out, Some(cfg))?;

    let (min, max) = field.min_max();
    println!("wrote {} ({} points, {:.3} s)", args.out.display(), field.stats.points, field.stats.wall_time.as_secs_f64());
    println!("normalisation integral = {:.12}", integrate_field(&field));
    println!("max = {max:.6e}");
    if kind == FieldKind::Wigner && min < 0.0 {
        println!("min = {min:.6e}  ** negative: W < 0 on this window **");
    } else {
        println!("min = {min:.6e}");
    }
    if let Some(k) = field.stats.kmax {
        println!("k_max: min {} mean {:.1} max {} (truncated at cap: {})", k.min, k.mean, k.max, k.truncated);
    }
    Ok(ExitCode::SUCCESS)
}
