//! Saddle-point evaluation of `F(A)` over Lambert-W branches.

use std::sync::OnceLock;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::direct::f_direct;
use crate::error::{Error, Result};
use crate::logdomain::{log_sum_exp_complex, LogComplex};
use crate::scalar::{lit, signum0, wrap_phase, Real};
use crate::specfun::{lambert_w, stirling3_real};

/// Highest correction order supported by [`cfww_correction`].
pub const MAX_CORRECTION_ORDER: usize = 8;

/// Tuning knobs of the fast `F(A)` evaluator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FEvalOptions {
    /// Number of correction terms beyond the leading saddle-point term.
    pub correction_order: usize,
    /// Extra branches on each side of `k̄`.
    pub branch_window: usize,
    /// `|A|` at or below which the direct series is used.
    pub direct_fallback_threshold: f64,
}

impl Default for FEvalOptions {
    fn default() -> Self {
        Self { correction_order: 1, branch_window: 1, direct_fallback_threshold: 30.0 }
    }
}

/// Contribution of one saddle point `z_k = i W_k(Z)`, `Z = -2iAΓ`.
#[derive(Clone, Copy, Debug)]
pub struct SaddleTerm<T: Real> {
    pub branch_k: i64,
    pub z_k: Complex<T>,
    /// `f(z_k) = z_k²/(2i) + iZ e^{i z_k}`.
    pub f_zk: Complex<T>,
    /// Correction factor from [`cfww_correction`].
    pub correction: Complex<T>,
    /// The term's share of `F(A)`, corrections and global phase included.
    pub amplitude: LogComplex<T>,
}

/// Full result of a saddle-point evaluation.
#[derive(Clone, Debug)]
pub struct SaddleEval<T: Real> {
    pub value: LogComplex<T>,
    pub kbar: i64,
    pub delta_kbar: T,
    pub terms: Vec<SaddleTerm<T>>,
    /// Two neighbouring branches have `|Re f|` within `2|Γ|` of each other.
    pub two_term_regime: bool,
    /// `k̄` lay outside the admissible half and was moved to the nearest
    /// admissible branch.
    pub clamped: bool,
}

fn round_half_toward_zero<T: Real>(x: T) -> T {
    let fl = x.floor();
    let fr = x - fl;
    let half = lit::<T>(0.5);
    if fr > half {
        fl + T::one()
    } else if fr < half {
        fl
    } else if x > T::zero() {
        fl
    } else {
        fl + T::one()
    }
}

/// Dominant branch `k̄` and rounding quality `Δk̄ ∈ [0, 1]`.
///
/// With `Z = -2iAΓ = R e^{iΦ}`, `k̄ = -round((Φ + (R + π/2) sgn Γ) / 2π)`.
/// `Δk̄` is 1 when the bracket is an integer and 0 at a rounding tie.
pub fn select_kbar<T: Real>(a: Complex<T>, gamma: T) -> Result<(i64, T)> {
    if gamma == T::zero() || (a.re == T::zero() && a.im == T::zero()) {
        return Err(Error::Precondition("select_kbar: needs A ≠ 0 and Γ ≠ 0".into()));
    }
    let z = Complex::new(T::zero(), lit::<T>(-2.0)) * a * gamma;
    let r = z.norm();
    let phi = z.im.atan2(z.re);
    let x = (phi + (r + T::FRAC_PI_2()) * signum0(gamma)) / T::TAU();
    let kbar = -round_half_toward_zero(x);
    let frac = x - x.floor();
    let delta = (T::one() - lit::<T>(2.0) * frac).abs();
    Ok((kbar.to_i64().unwrap_or(0), delta))
}

fn correction_coefficients() -> &'static Vec<Vec<f64>> {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=MAX_CORRECTION_ORDER)
            .map(|n| {
                (0..=2 * n)
                    .map(|j| {
                        let s = stirling3_real::<f64>(2 * n + 2 * j, j);
                        let f: f64 = (1..=(n + j)).map(|i| i as f64).product();
                        s / f
                    })
                    .collect()
            })
            .collect()
    })
}

/// Higher-order saddle-point factor
/// `1 + Σ_{n=1}^{order} (-Γ/(i+z))ⁿ Σ_{j=0}^{2n} (-z/(2(i+z)))ʲ S₃(2n+2j, j)/(n+j)!`.
pub fn cfww_correction<T: Real>(z_k: Complex<T>, gamma: T, order: usize) -> Result<Complex<T>> {
    if order > MAX_CORRECTION_ORDER {
        return Err(Error::Precondition(format!(
            "cfww_correction: order {order} exceeds {MAX_CORRECTION_ORDER}"
        )));
    }
    let one = Complex::new(T::one(), T::zero());
    if order == 0 {
        return Ok(one);
    }
    let ipz = z_k + Complex::new(T::zero(), T::one());
    let dist = ipz.norm();
    if dist < lit(1e-8) {
        return Err(Error::DegenerateSaddle(dist.to_f64().unwrap_or(0.0)));
    }
    let outer = Complex::new(-gamma, T::zero()) / ipz;
    let inner_ratio = -z_k / (ipz * lit::<T>(2.0));
    let table = correction_coefficients();
    let mut total = one;
    let mut outer_pow = one;
    for coeffs in table.iter().take(order + 1).skip(1) {
        outer_pow = outer_pow * outer;
        // Horner in the inner ratio
        let mut inner = Complex::new(T::zero(), T::zero());
        for &c in coeffs.iter().rev() {
            inner = inner * inner_ratio + lit::<T>(c);
        }
        total = total + outer_pow * inner;
    }
    Ok(total)
}

fn saddle_term<T: Real>(a: Complex<T>, gamma: T, k: i64, order: usize) -> Result<SaddleTerm<T>> {
    let zc = Complex::new(T::zero(), lit::<T>(-2.0)) * a * gamma;
    let w = lambert_w(k, zc)?;
    let i = Complex::new(T::zero(), T::one());
    let z = i * w;
    let half = lit::<T>(0.5);
    // at the saddle i Z e^{iz} = z, so f = (i/2)(W+1)² - i/2
    let wp1 = w + T::one();
    let f = i * wp1 * wp1 * half - i * half;
    let s = signum0(gamma);
    let ipz = z + i;
    let correction = cfww_correction(z, gamma, order)?;
    let log_amp = f / (gamma * lit::<T>(2.0)) - (ipz * (-s)).ln() * half
        + Complex::new(T::zero(), -T::FRAC_PI_4() * s);
    let amplitude = LogComplex::exp(log_amp) * LogComplex::from_complex(correction);
    Ok(SaddleTerm { branch_k: k, z_k: z, f_zk: f, correction, amplitude })
}

/// Saddle-point sum over branches `k̄ - window ..= k̄ + window` on the
/// admissible half (`k ≤ 0` for `Γ > 0`, `k ≥ 0` for `Γ < 0`).
///
/// Accuracy is `1 + O(Γ^{order+1})` relative; no fallback is applied.
pub fn saddle_sum<T: Real>(a: Complex<T>, gamma: T, opts: &FEvalOptions) -> Result<SaddleEval<T>> {
    let (kbar, delta_kbar) = select_kbar(a, gamma)?;
    let positive = gamma > T::zero();
    let admissible = |k: i64| if positive { k <= 0 } else { k >= 0 };
    let win = opts.branch_window as i64;
    let mut ks: Vec<i64> = (kbar - win..=kbar + win).filter(|&k| admissible(k)).collect();
    let clamped = !admissible(kbar);
    if ks.is_empty() {
        ks.push(0);
    }
    let terms = ks
        .iter()
        .map(|&k| saddle_term(a, gamma, k, opts.correction_order))
        .collect::<Result<Vec<_>>>()?;
    let two = lit::<T>(2.0) * gamma.abs();
    let two_term_regime = terms.windows(2).any(|p| (p[0].f_zk.re - p[1].f_zk.re).abs() < two);
    let amps: Vec<_> = terms.iter().map(|t| t.amplitude).collect();
    let value = log_sum_exp_complex(&amps);
    Ok(SaddleEval { value, kbar, delta_kbar, terms, two_term_regime, clamped })
}

/// `F(A, Γ)` by the fastest applicable route.
///
/// `Γ` is reduced with `F(A, Γ + 2π) = F(A, Γ)` and `F(A, Γ + π) = F(-A, Γ)`.
/// `Γ = 0` gives `e^A`, `|A|` up to the fallback threshold uses the direct
/// series, everything else the saddle-point sum.
pub fn f_saddle<T: Real>(a: Complex<T>, gamma: T, opts: &FEvalOptions) -> Result<LogComplex<T>> {
    let (a, g) = reduce_gamma(a, gamma);
    if g == T::zero() {
        return Ok(LogComplex::exp(a));
    }
    if a.norm() <= lit(opts.direct_fallback_threshold) {
        return f_direct(a, g, T::epsilon() * lit(1e-2));
    }
    Ok(saddle_sum(a, g, opts)?.value)
}

pub(crate) fn reduce_gamma<T: Real>(a: Complex<T>, gamma: T) -> (Complex<T>, T) {
    let g = wrap_phase(gamma);
    let half_pi = T::FRAC_PI_2();
    if g > half_pi {
        (-a, g - T::PI())
    } else if g <= -half_pi {
        (-a, g + T::PI())
    } else {
        (a, g)
    }
}
