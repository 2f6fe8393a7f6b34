use std::f64::consts::{FRAC_1_PI, FRAC_2_PI, PI};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, ValueEnum};
use kerr_qpd::husimi::{husimi_direct, husimi_point};
use kerr_qpd::specfun::{bessel_i_exact, lambert_w, stirling3, BRANCH_POINT_EXCLUSION};
use kerr_qpd::wigner::{find_kmax, wigner_fock_oracle, wigner_fourier_exact, wigner_point, wigner_qseries_oracle};
use kerr_qpd::{Complex64, FEvalOptions, KerrState64, WignerOptions};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::common::{emit, out_path, to_json, CliResult};
use crate::point::ReportFormat;

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Small,
    Full,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = Scale::Small)]
    scale: Scale,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ValidateConfig {
    command: &'static str,
    scale: Scale,
    seed: u64,
}

#[derive(Serialize)]
struct Suite {
    name: &'static str,
    passed: bool,
    checks: usize,
    /// Largest error metric seen, in the units of `tolerance`.
    max_error: f64,
    tolerance: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, passed: true, checks: 0, max_error: 0.0, tolerance, failures: Vec::new() }
    }

    fn check(&mut self, err: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if err > self.max_error || err.is_nan() {
            self.max_error = err;
        }
        if !(err <= self.tolerance) {
            self.passed = false;
            if self.failures.len() < 10 {
                self.failures.push(format!("{}: error {err:.3e}", what()));
            }
        }
    }

    fn fail(&mut self, msg: String) {
        self.checks += 1;
        self.passed = false;
        if self.failures.len() < 10 {
            self.failures.push(msg);
        }
    }
}

#[derive(Serialize)]
struct ValidateReport {
    config: ValidateConfig,
    passed: bool,
    suites: Vec<Suite>,
}

fn lambert(rng: &mut ChaCha8Rng, n: usize) -> Suite {
    let mut s = Suite::new("lambert_residual", 1e-12);
    for _ in 0..n {
        let k = rng.gen_range(-8i64..=8);
        let z = Complex64::from_polar(10f64.powf(rng.gen_range(-4.0..8.0)), rng.gen_range(-PI..=PI));
        if (z + (-1.0f64).exp()).norm() < 1e3 * BRANCH_POINT_EXCLUSION {
            continue;
        }
        match lambert_w(k, z) {
            Ok(w) => s.check((w * w.exp() - z).norm() / z.norm().max(1.0), || format!("W_{k}({z})")),
            Err(e) => s.fail(format!("W_{k}({z}): {e}")),
        }
    }
    s
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}

/// `Σ n!/(m₁!⋯m_k!)` over compositions of `n` into `k` parts each ≥ 3.
fn compositions(n: usize, k: usize) -> BigUint {
    fn go(rest: usize, k: usize, denom: BigUint, nf: &BigUint) -> BigUint {
        if k == 0 {
            return if rest == 0 { nf / denom } else { BigUint::from(0u32) };
        }
        (3..=rest).map(|m| go(rest - m, k - 1, &denom * factorial(m), nf)).sum()
    }
    go(n, k, BigUint::from(1u32), &factorial(n))
}

fn stirling() -> Suite {
    let mut s = Suite::new("stirling_identities", 0.0);
    // n!·[tⁿuᵏ] exp(u(eᵗ - 1 - t - t²/2)) = (1/k!)·Σ over ordered compositions
    for n in 0..=12 {
        for k in 0..=n / 3 {
            let gf = if n == 0 && k == 0 { BigUint::from(1u32) } else { compositions(n, k) / factorial(k) };
            let table = stirling3(n, k);
            s.check(if gf == table { 0.0 } else { 1.0 }, || format!("S3({n},{k}) = {table}, generating function gives {gf}"));
            if n >= 3 && k >= 1 {
                let rec = BigUint::from(k) * stirling3(n - 1, k) + BigUint::from((n - 1) * (n - 2) / 2) * stirling3(n - 3, k - 1);
                s.check(if rec == table { 0.0 } else { 1.0 }, || format!("recurrence at S3({n},{k})"));
            }
        }
    }
    s
}

fn bessel(rng: &mut ChaCha8Rng, n: usize) -> Suite {
    let mut s = Suite::new("bessel_recurrence", 1e-9);
    for _ in 0..n {
        let k = rng.gen_range(1i64..40);
        let z = Complex64::from_polar(rng.gen_range(0.1..200.0), rng.gen_range(-PI..=PI));
        match (bessel_i_exact(k - 1, z), bessel_i_exact(k, z), bessel_i_exact(k + 1, z)) {
            (Ok(a), Ok(b), Ok(c)) => {
                let mid = b * (2.0 * k as f64) / z;
                let scale = a.norm().max(c.norm()).max(mid.norm());
                s.check((a - c - mid).norm() / scale, || format!("I_{k}({z})"));
            }
            _ => s.fail(format!("I_k({z}) failed near k={k}")),
        }
    }
    s
}

fn zero_gamma(rng: &mut ChaCha8Rng, n: usize) -> Suite {
    let mut s = Suite::new("zero_gamma_closed_forms", 1e-10);
    let opts = FEvalOptions::default();
    let wopts = WignerOptions::default();
    for &a in &[1.0, 100.0, 1e4] {
        let st = KerrState64::from_polar(a, rng.gen_range(-PI..PI), 0.0);
        for _ in 0..n {
            let b = st.alpha + Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let d2 = (b - st.alpha).norm_sqr();
            let q = FRAC_1_PI * (-d2).exp();
            let w = FRAC_2_PI * (-2.0 * d2).exp();
            match (husimi_point(&st, b, &opts), wigner_point(&st, b, &wopts)) {
                (Ok(gq), Ok(gw)) => {
                    s.check((gq.value() - q).abs() / q, || format!("Q at |alpha|={a}, beta={b}"));
                    s.check((gw.value() - w).abs() / w, || format!("W at |alpha|={a}, beta={b}"));
                }
                (Err(e), _) | (_, Err(e)) => s.fail(format!("|alpha|={a}, beta={b}: {e}")),
            }
            if a <= 1.0 {
                // the oracles take no shortcut at Γ = 0; their error is relative to the peak
                match (husimi_direct(&st, b), wigner_fock_oracle(&st, b, 60)) {
                    (Ok(d), Ok(f)) => {
                        s.check((d.value() - q).abs() / FRAC_1_PI, || format!("direct Q at beta={b}"));
                        s.check((f - w).abs() / FRAC_2_PI, || format!("Fock W at beta={b}"));
                    }
                    (Err(e), _) | (_, Err(e)) => s.fail(format!("oracle at beta={b}: {e}")),
                }
            }
        }
    }
    s
}

/// β drawn around the ridge of the evolved state.
fn banana(rng: &mut ChaCha8Rng, st: &KerrState64) -> Complex64 {
    let a = st.alpha.norm();
    let centre = st.alpha.arg() + 2.0 * st.gamma * a * a;
    let r = (a + rng.gen_range(-1.5..1.5)).max(0.05);
    let ph = centre + rng.gen_range(-1.0..1.0) * (1.5 / a.max(1.0) + 2.0 * st.gamma.abs() * a);
    Complex64::from_polar(r, ph)
}

fn husimi_oracle(rng: &mut ChaCha8Rng, amps: &[f64], n: usize) -> Vec<Suite> {
    let opts = FEvalOptions::default();
    // below 2 ln 1e-15 the direct series is cancellation noise
    let floor = (-200f64).max(2.0 * 1e-15f64.ln());
    [1e-2, 1e-3]
        .iter()
        .map(|&g| {
            let mut s = Suite::new(if g == 1e-2 { "husimi_oracle_gamma_1e-2" } else { "husimi_oracle_gamma_1e-3" }, 100.0 * g);
            for &a in amps {
                let st = KerrState64::from_polar(a, rng.gen_range(-PI..PI), g);
                for _ in 0..n {
                    let b = banana(rng, &st);
                    match (husimi_direct(&st, b), husimi_point(&st, b, &opts)) {
                        (Ok(d), Ok(f)) => {
                            if d.sign == 0 || d.log_mag < floor {
                                continue;
                            }
                            s.check((f.log_mag - d.log_mag).abs(), || format!("|alpha|={a}, beta={b}"));
                        }
                        (Err(e), _) | (_, Err(e)) => s.fail(format!("|alpha|={a}, beta={b}: {e}")),
                    }
                }
            }
            s
        })
        .collect()
}

fn wigner_chain(rng: &mut ChaCha8Rng, n: usize) -> Suite {
    let mut s = Suite::new("wigner_oracle_chain", 1e-6);
    let st = KerrState64::from_polar(2.5, rng.gen_range(-PI..PI), 0.01);
    let opts = WignerOptions { exact_bessel: true, ..Default::default() };
    for _ in 0..n {
        let b = banana(rng, &st);
        let run = || -> kerr_qpd::Result<[f64; 4]> {
            let f = wigner_fock_oracle(&st, b, 120)?;
            let q = wigner_qseries_oracle(&st, b, 0)?;
            let fe = wigner_fourier_exact(&st, b, find_kmax(&st, b, &opts)?.kmax)?;
            let p = wigner_point(&st, b, &opts)?.value();
            Ok([f, q, fe, p])
        };
        match run() {
            Ok(v) => {
                for i in 0..4 {
                    for j in i + 1..4 {
                        s.check((v[i] - v[j]).abs(), || format!("beta={b}, pair ({i},{j})"));
                    }
                }
            }
            Err(e) => s.fail(format!("beta={b}: {e}")),
        }
    }
    s
}

fn render_text(r: &ValidateReport) -> String {
    let mut out = String::new();
    for s in &r.suites {
        out += &format!(
            "{:<28} {}  checks {:>5}  max error {:.3e}  tolerance {:.1e}\n",
            s.name,
            if s.passed { "PASS" } else { "FAIL" },
            s.checks,
            s.max_error,
            s.tolerance
        );
        for f in &s.failures {
            out += &format!("    {f}\n");
        }
    }
    out += if r.passed { "overall: PASS\n" } else { "overall: FAIL\n" };
    out
}

pub fn run(args: &ValidateArgs) -> CliResult<ExitCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let full = args.scale == Scale::Full;
    let mut suites = vec![
        lambert(&mut rng, if full { 5000 } else { 500 }),
        stirling(),
        bessel(&mut rng, if full { 2000 } else { 200 }),
        zero_gamma(&mut rng, if full { 200 } else { 20 }),
    ];
    let amps: &[f64] = if full { &[10.0, 30.0, 100.0] } else { &[10.0, 30.0] };
    suites.extend(husimi_oracle(&mut rng, amps, if full { 64 } else { 16 }));
    suites.push(wigner_chain(&mut rng, if full { 32 } else { 8 }));
    let passed = suites.iter().all(|s| s.passed);
    let report = ValidateReport { config: ValidateConfig { command: "validate", scale: args.scale, seed: args.seed }, passed, suites };
    let text = match args.format {
        ReportFormat::Text => render_text(&report),
        ReportFormat::Json => to_json(&report),
    };
    emit(out_path(&args.out), &text)?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
