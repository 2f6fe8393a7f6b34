//! Summands of the Fourier–Bessel series for `W(β)`.
//!
//! With `X = 4|αβ|`, `θ = kΓ` and `Φ₀ = arg(αβ* e^{-iΓ})`,
//! `W = (2/π) e^{-2(|β|-|α|)²} Σ_k e^{ikΦ₀} I_k(X e^{iθ}) exp(|α|²(1 - e^{2iθ}) - X)`.
//! [`TermModel::log_term`] returns the log of the `k`-th summand without the
//! `e^{ikΦ₀}` factor; its real part depends on `|α|`, `|β|` and `k` only.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::logdomain::LogComplex;
use crate::scalar::{lit, Real};
use crate::specfun::{bessel_i_exact_log, BESSEL_ASYMPTOTIC_THRESHOLD};

/// `ln(1 + u)` without cancellation for small `u`.
fn ln_1p<T: Real>(u: Complex<T>) -> Complex<T> {
    let two = lit::<T>(2.0);
    let re = (two * u.re + u.norm_sqr()).ln_1p() * lit(0.5);
    let im = u.im.atan2(T::one() + u.re);
    Complex::new(re, im)
}

/// `asinh(w)` as `ln(1 + w + w²/(1 + sqrt(1 + w²)))`.
fn asinh_small<T: Real>(w: Complex<T>) -> Complex<T> {
    let w2 = w * w;
    ln_1p(w + w2 / ((w2 + T::one()).sqrt() + T::one()))
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct TermModel<T> {
    a2: T,
    x: T,
    gamma: T,
    /// `ln(2/π) - 2(|β| - |α|)²`
    base: T,
    exact: bool,
}

impl<T: Real> TermModel<T> {
    pub(crate) fn new(abs_alpha: T, abs_beta: T, gamma: T, exact: bool) -> Result<Self> {
        let x = lit::<T>(4.0) * abs_alpha * abs_beta;
        if !exact && x < lit(BESSEL_ASYMPTOTIC_THRESHOLD) {
            return Err(Error::UseExact {
                scale: x.to_f64().unwrap_or(0.0),
                threshold: BESSEL_ASYMPTOTIC_THRESHOLD,
            });
        }
        let d = abs_beta - abs_alpha;
        let base = (lit::<T>(2.0) / T::PI()).ln() - lit::<T>(2.0) * d * d;
        Ok(Self { a2: abs_alpha * abs_alpha, x, gamma, base, exact })
    }

    /// `|α|²(1 - e^{2iθ}) = -2i|α|² sinθ e^{iθ}`.
    fn kerr_factor(&self, theta: T) -> Complex<T> {
        let (s, c) = theta.sin_cos();
        let two = lit::<T>(2.0);
        Complex::new(two * self.a2 * s * s, -two * self.a2 * s * c)
    }

    pub(crate) fn log_term(&self, k: i64) -> Result<LogComplex<T>> {
        let kf = lit::<T>(k as f64);
        let theta = kf * self.gamma;
        if self.exact {
            if self.x == T::zero() {
                return Ok(if k == 0 { LogComplex::exp(Complex::new(self.base, T::zero())) } else { LogComplex::zero() });
            }
            let (s, c) = theta.sin_cos();
            let z = Complex::new(c, s) * self.x;
            let bessel = bessel_i_exact_log(k, z)?;
            if bessel.is_zero() {
                return Ok(LogComplex::zero());
            }
            let l = bessel.ln() + self.kerr_factor(theta) + Complex::new(self.base - self.x, T::zero());
            return Ok(LogComplex::exp(l));
        }
        debug_assert!(theta.abs() < T::FRAC_PI_2(), "Re z > 0 needs |kΓ| < π/2");
        let (s, c) = theta.sin_cos();
        let two = lit::<T>(2.0);
        let q = kf / self.x;
        // z² + k² = X²(1 + u)
        let u = Complex::new(-two * s * s + q * q, two * s * c);
        let root = (u + T::one()).sqrt();
        let sqrt_minus_x = u * self.x / (root + T::one());
        let asinh = asinh_small(Complex::new(c, -s) * q);
        let quarter_log = (ln_1p(u) + Complex::new(two * self.x.ln(), T::zero())) * lit::<T>(0.25);
        let ln_sqrt_2pi = lit::<T>(0.918_938_533_204_672_741_78);
        let l = sqrt_minus_x - asinh * kf - quarter_log
            + self.kerr_factor(theta)
            + Complex::new(self.base - ln_sqrt_2pi, T::zero());
        Ok(LogComplex::exp(l))
    }

    pub(crate) fn log_mag(&self, k: i64) -> Result<T> {
        Ok(self.log_term(k)?.log_mag)
    }
}
