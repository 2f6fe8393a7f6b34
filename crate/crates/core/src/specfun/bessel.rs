//! Modified Bessel functions `I_k(z)` of integer order and complex argument.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::logdomain::LogComplex;
use crate::scalar::{cis, from_usize, lit, ln_factorial, Real};

/// Largest `|z|` accepted by [`bessel_i_exact`].
pub const BESSEL_EXACT_CAP: f64 = 1e3;
/// Largest `|z|` accepted by [`bessel_i_exact_log`].
pub const BESSEL_EXACT_LOG_CAP: f64 = 1e6;
/// Lower bound on `sqrt(k² + |z|²)` for [`bessel_i_log_asymptotic`].
pub const BESSEL_ASYMPTOTIC_THRESHOLD: f64 = 25.0;

const SERIES_CUTOFF: f64 = 1e-18;

/// `log I_k(z)` for integer order and `|z| ≤ 10⁶`.
///
/// Uses the ascending series `Σ_m (z/2)^{2m+k} / (m! (m+k)!)` where it is well
/// conditioned, i.e. when `I_k(|z|)` is not much larger than `e^{|Re z|}`, and
/// otherwise the trapezoid rule on `(1/π)∫₀^π e^{z cos t} cos(kt) dt`, which
/// converges geometrically for integer order. Either way the result is
/// accurate relative to the smaller of those two scales.
pub fn bessel_i_exact_log<T: Real>(order: i64, z: Complex<T>) -> Result<LogComplex<T>> {
    let abs_z = z.norm();
    if !abs_z.is_finite() {
        return Err(Error::Domain(format!("bessel_i: non-finite argument {z:?}")));
    }
    if abs_z > lit(BESSEL_EXACT_LOG_CAP) {
        return Err(Error::UseAsymptotic {
            abs_z: abs_z.to_f64().unwrap_or(f64::INFINITY),
            cap: BESSEL_EXACT_LOG_CAP,
        });
    }
    let k = order.unsigned_abs() as usize;
    if abs_z == T::zero() {
        return Ok(if k == 0 { LogComplex::one() } else { LogComplex::zero() });
    }
    let kf = from_usize::<T>(k);
    let series_scale = if abs_z <= T::one() {
        T::neg_infinity()
    } else {
        let s = (abs_z * abs_z + kf * kf).sqrt();
        s - kf * (kf / abs_z).asinh() - s.ln() * lit(0.5)
    };
    if series_scale <= z.re.abs() + lit(3.0) {
        Ok(series_log(k, z))
    } else {
        Ok(quadrature_log(k, z))
    }
}

fn quadrature_log<T: Real>(k: usize, z: Complex<T>) -> LogComplex<T> {
    let abs_z = z.norm().to_f64().unwrap();
    // aliasing error is I_{2N-k}(|z|) and smaller
    let n = (abs_z + 0.5 * k as f64 + 40.0).ceil() as usize;
    let shift = z.re.abs();
    let h = T::PI() / from_usize::<T>(n);
    let kf = from_usize::<T>(k);
    let f = |t: T| {
        let e = z * t.cos();
        let (s, c) = e.im.sin_cos();
        Complex::new(c, s) * ((e.re - shift).exp() * (kf * t).cos())
    };
    let mut acc = (f(T::zero()) + f(T::PI())) * lit::<T>(0.5);
    for j in 1..n {
        acc += f(from_usize::<T>(j) * h);
    }
    LogComplex::from_complex(acc / from_usize::<T>(n)).scale_ln(shift)
}

fn series_log<T: Real>(k: usize, z: Complex<T>) -> LogComplex<T> {
    let abs_z = z.norm();
    let kf = from_usize::<T>(k);
    let half = abs_z * lit(0.5);
    let half_sq = half * half;
    let ln_half = half.ln();
    let theta = z.im.atan2(z.re);

    // (m+1)(m+k+1) = (|z|/2)² at the peak
    let disc = (kf * kf + lit::<T>(4.0) * half_sq).sqrt();
    let peak = ((disc - kf - lit(2.0)) * lit(0.5)).max(T::zero()).round();
    let m0 = peak.to_usize().unwrap_or(0);
    let m0f = from_usize::<T>(m0);
    let log_peak = (m0f * lit(2.0) + kf) * ln_half - ln_factorial::<T>(m0) - ln_factorial::<T>(m0 + k);

    let cutoff = lit::<T>(SERIES_CUTOFF);
    let term = |m: usize, r: T| cis((from_usize::<T>(2 * m + k)) * theta) * r;
    let mut acc = term(m0, T::one());

    let mut r = T::one();
    let mut m = m0;
    loop {
        r = r * half_sq / (from_usize::<T>(m + 1) * from_usize::<T>(m + k + 1));
        m += 1;
        acc += term(m, r);
        if r < cutoff {
            break;
        }
    }
    let mut r = T::one();
    let mut m = m0;
    while m > 0 {
        r = r * from_usize::<T>(m) * from_usize::<T>(m + k) / half_sq;
        m -= 1;
        acc += term(m, r);
        if r < cutoff {
            break;
        }
    }
    LogComplex::from_complex(acc).scale_ln(log_peak)
}

/// `I_k(z)` for `|z| <= 10³`; `I_{-k} = I_k`.
///
/// Values beyond the floating point range (around `|Re z| > 709` in `f64`)
/// report [`Error::Overflow`]; use [`bessel_i_exact_log`] there.
pub fn bessel_i_exact<T: Real>(order: i64, z: Complex<T>) -> Result<Complex<T>> {
    let abs_z = z.norm();
    if abs_z > lit(BESSEL_EXACT_CAP) {
        return Err(Error::UseAsymptotic {
            abs_z: abs_z.to_f64().unwrap_or(f64::INFINITY),
            cap: BESSEL_EXACT_CAP,
        });
    }
    let v = bessel_i_exact_log(order, z)?;
    if v.log_mag > T::max_value().ln() {
        return Err(Error::Overflow(format!("I_{order}({z:?}) exceeds the scalar range")));
    }
    Ok(v.to_complex())
}

/// Principal `asinh(w) = ln(w + sqrt(w² + 1))`.
pub(crate) fn asinh_principal<T: Real>(w: Complex<T>) -> Complex<T> {
    (w + (w * w + T::one()).sqrt()).ln()
}

/// Uniform large-argument asymptotic `log I_k(z) ≈ V_k(z) - ½ log 2π` with
/// `V_k(z) = sqrt(z² + k²) - k·asinh(k/z) - ¼ log(z² + k²)`.
///
/// Relative error of the exponentiated value is `O(1/sqrt(k² + z²))`.
pub fn bessel_i_log_asymptotic<T: Real>(order: i64, z: Complex<T>) -> Result<LogComplex<T>> {
    if !(z.re > T::zero()) {
        return Err(Error::Domain(format!("bessel_i_log_asymptotic: Re z must be positive, got {z:?}")));
    }
    let k = lit::<T>(order as f64);
    let scale = (z.norm_sqr() + k * k).sqrt();
    if scale < lit(BESSEL_ASYMPTOTIC_THRESHOLD) {
        return Err(Error::UseExact {
            scale: scale.to_f64().unwrap_or(0.0),
            threshold: BESSEL_ASYMPTOTIC_THRESHOLD,
        });
    }
    let s = z * z + k * k;
    let quarter: T = lit(0.25);
    let v = s.sqrt() - asinh_principal(Complex::new(k, T::zero()) / z) * k - s.ln() * quarter;
    let ln_sqrt_2pi = lit::<T>(0.918_938_533_204_672_741_78);
    Ok(LogComplex::exp(v - ln_sqrt_2pi))
}
