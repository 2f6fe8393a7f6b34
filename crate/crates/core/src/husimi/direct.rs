//! Direct summation of `F(A) = Σ Aⁿ e^{iΓn²} / n!`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::logdomain::LogComplex;
use crate::scalar::{cis, from_usize, lit, ln_factorial, mul_mod_2pi, Real};

/// Largest `|A|` accepted by [`f_direct`].
pub const F_DIRECT_CAP: f64 = 2e4;

/// Half-width of the Poisson window, in units of `sqrt(|A| + 1)`.
const WINDOW_SIGMAS: f64 = 12.0;

/// `F(A)` by summing the series around its largest term.
///
/// Terms are carried relative to the peak term `n ≈ |A|`, and the phase
/// `n·arg A + Γn²` is reduced exactly, so the result is accurate to a few ulp
/// of the peak term magnitude. Summation covers `|n - |A|| ≤ 12 sqrt(|A|+1)` and
/// continues until the terms drop below `rel_tol` of the peak.
pub fn f_direct<T: Real>(a: Complex<T>, gamma: T, rel_tol: T) -> Result<LogComplex<T>> {
    if !(rel_tol > T::zero()) {
        return Err(Error::Precondition(format!("f_direct: rel_tol must be positive, got {rel_tol}")));
    }
    if !a.re.is_finite() || !a.im.is_finite() || !gamma.is_finite() {
        return Err(Error::Domain("f_direct: non-finite input".into()));
    }
    let abs_a = a.norm();
    if abs_a > lit(F_DIRECT_CAP) {
        return Err(Error::TooLarge { abs_a: abs_a.to_f64().unwrap_or(f64::INFINITY), cap: F_DIRECT_CAP });
    }
    if abs_a == T::zero() {
        return Ok(LogComplex::one());
    }
    let theta = a.im.atan2(a.re);
    let half_width = lit::<T>(WINDOW_SIGMAS) * (abs_a + T::one()).sqrt();
    let hi_edge = abs_a + half_width;
    let lo_edge = abs_a - half_width;
    let peak = abs_a.floor().to_usize().unwrap_or(0);
    let log_peak = from_usize::<T>(peak) * abs_a.ln() - ln_factorial::<T>(peak);

    let phase = |n: usize| {
        let nf = from_usize::<T>(n);
        mul_mod_2pi(nf, theta) + mul_mod_2pi(gamma, nf * nf)
    };
    let mut acc = cis(phase(peak));

    let mut r = T::one();
    let mut n = peak;
    loop {
        n += 1;
        r = r * abs_a / from_usize::<T>(n);
        acc += cis(phase(n)) * r;
        if from_usize::<T>(n) > hi_edge && r < rel_tol {
            break;
        }
    }
    let mut r = T::one();
    let mut n = peak;
    while n > 0 {
        r = r * from_usize::<T>(n) / abs_a;
        n -= 1;
        acc += cis(phase(n)) * r;
        if from_usize::<T>(n) < lo_edge && r < rel_tol {
            break;
        }
    }
    Ok(LogComplex::from_complex(acc).scale_ln(log_peak))
}
