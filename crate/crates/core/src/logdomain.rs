//! Log-domain scalars.
//!
//! The evaluators routinely handle factors like `exp(|α|²)` with `|α|² ~ 10⁷`,
//! far outside the floating point range. Values are therefore carried as a
//! natural-log magnitude plus a phase (complex) or sign (real).

use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::{wrap_phase, Real};

/// `exp(log_mag) · exp(i·phase)`; `log_mag = -∞` is an exact zero with phase 0.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex<T> {
    pub log_mag: T,
    pub phase: T,
}

/// `sign · exp(log_mag)`; `sign == 0` iff `log_mag == -∞`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogReal<T> {
    pub log_mag: T,
    pub sign: i8,
}

/// `cos + i sin` that is exact on the axes, so `1∠0 + 1∠π` cancels to zero.
#[inline]
fn cis_exact<T: Real>(phase: T) -> Complex<T> {
    let pi = T::PI();
    let half = T::FRAC_PI_2();
    if phase == T::zero() {
        Complex::new(T::one(), T::zero())
    } else if phase == pi || phase == -pi {
        Complex::new(-T::one(), T::zero())
    } else if phase == half {
        Complex::new(T::zero(), T::one())
    } else if phase == -half {
        Complex::new(T::zero(), -T::one())
    } else {
        let (s, c) = phase.sin_cos();
        Complex::new(c, s)
    }
}

impl<T: Real> LogComplex<T> {
    pub fn zero() -> Self {
        Self { log_mag: T::neg_infinity(), phase: T::zero() }
    }

    pub fn one() -> Self {
        Self { log_mag: T::zero(), phase: T::zero() }
    }

    /// Builds from a log-magnitude and an arbitrary (unreduced) phase.
    pub fn from_polar(log_mag: T, phase: T) -> Self {
        if log_mag == T::neg_infinity() {
            return Self::zero();
        }
        Self { log_mag, phase: wrap_phase(phase) }
    }

    /// `exp(z)`.
    pub fn exp(z: Complex<T>) -> Self {
        Self::from_polar(z.re, z.im)
    }

    pub fn from_complex(c: Complex<T>) -> Self {
        if c.re == T::zero() && c.im == T::zero() {
            return Self::zero();
        }
        Self { log_mag: c.re.hypot(c.im).ln(), phase: c.im.atan2(c.re) }
    }

    pub fn from_real(x: T) -> Self {
        Self::from_complex(Complex::new(x, T::zero()))
    }

    pub fn to_complex(self) -> Complex<T> {
        if self.is_zero() {
            return Complex::new(T::zero(), T::zero());
        }
        cis_exact(self.phase) * self.log_mag.exp()
    }

    /// Linear value times `exp(s)`, for values whose own magnitude is out of
    /// range.
    pub fn to_complex_scaled(self, s: T) -> Complex<T> {
        if self.is_zero() {
            return Complex::new(T::zero(), T::zero());
        }
        cis_exact(self.phase) * (self.log_mag + s).exp()
    }

    /// Principal complex logarithm, `log_mag + i·phase`.
    pub fn ln(self) -> Complex<T> {
        Complex::new(self.log_mag, self.phase)
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == T::neg_infinity()
    }

    pub fn conj(self) -> Self {
        Self::from_polar(self.log_mag, -self.phase)
    }

    /// Multiplies by `exp(s)` for real `s`.
    pub fn scale_ln(self, s: T) -> Self {
        if self.is_zero() {
            return self;
        }
        Self { log_mag: self.log_mag + s, phase: self.phase }
    }

    /// Principal square root.
    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return self;
        }
        let half = T::one() / (T::one() + T::one());
        Self { log_mag: self.log_mag * half, phase: self.phase * half }
    }

    pub fn powi(self, n: i32) -> Self {
        if self.is_zero() {
            return if n == 0 { Self::one() } else { self };
        }
        let nf = T::from_i32(n).unwrap();
        Self::from_polar(self.log_mag * nf, self.phase * nf)
    }

    /// Real part in signed log form.
    pub fn re(self) -> LogReal<T> {
        if self.is_zero() {
            return LogReal::zero();
        }
        let c = cis_exact(self.phase).re;
        if c == T::zero() {
            return LogReal::zero();
        }
        LogReal { log_mag: self.log_mag + c.abs().ln(), sign: if c > T::zero() { 1 } else { -1 } }
    }

    pub fn abs_ln(self) -> T {
        self.log_mag
    }
}

impl<T: Real> Mul for LogComplex<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::from_polar(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
    }
}

impl<T: Real> Div for LogComplex<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::from_polar(self.log_mag - rhs.log_mag, self.phase - rhs.phase)
    }
}

impl<T: Real> Neg for LogComplex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::from_polar(self.log_mag, self.phase + T::PI())
    }
}

impl<T: Real> fmt::Debug for LogComplex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({:?})∠{:?}", self.log_mag, self.phase)
    }
}

impl<T: Real> LogReal<T> {
    pub fn zero() -> Self {
        Self { log_mag: T::neg_infinity(), sign: 0 }
    }

    pub fn new(log_mag: T, sign: i8) -> Self {
        if sign == 0 || log_mag == T::neg_infinity() {
            Self::zero()
        } else {
            Self { log_mag, sign: sign.signum() }
        }
    }

    pub fn from_value(x: T) -> Self {
        if x == T::zero() {
            Self::zero()
        } else {
            Self { log_mag: x.abs().ln(), sign: if x > T::zero() { 1 } else { -1 } }
        }
    }

    /// Linear value; underflows to zero and overflows to ±∞.
    pub fn value(self) -> T {
        match self.sign {
            0 => T::zero(),
            s if s > 0 => self.log_mag.exp(),
            _ => -self.log_mag.exp(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn scale_ln(self, s: T) -> Self {
        if self.is_zero() {
            return self;
        }
        Self { log_mag: self.log_mag + s, sign: self.sign }
    }

    pub fn to_log_complex(self) -> LogComplex<T> {
        match self.sign {
            0 => LogComplex::zero(),
            s if s > 0 => LogComplex { log_mag: self.log_mag, phase: T::zero() },
            _ => LogComplex { log_mag: self.log_mag, phase: T::PI() },
        }
    }
}

impl<T: Real> Mul for LogReal<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.log_mag + rhs.log_mag, self.sign * rhs.sign)
    }
}

impl<T: Real> fmt::Debug for LogReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            0 => "0",
            s if s > 0 => "+",
            _ => "-",
        };
        write!(f, "{s}exp({:?})", self.log_mag)
    }
}

/// Sums log-domain terms by shifting with the largest magnitude.
///
/// Exact zeros are skipped; an empty input or complete cancellation yields an
/// exact zero.
pub fn log_sum_exp_complex<T: Real>(terms: &[LogComplex<T>]) -> LogComplex<T> {
    let shift = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.log_mag)
        .fold(T::neg_infinity(), T::max);
    if shift == T::neg_infinity() {
        return LogComplex::zero();
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for t in terms.iter().filter(|t| !t.is_zero()) {
        acc += cis_exact(t.phase) * (t.log_mag - shift).exp();
    }
    LogComplex::from_complex(acc).scale_ln(shift)
}

/// Streaming variant of [`log_sum_exp_complex`] that rescales on the fly.
#[derive(Clone, Copy, Debug)]
pub struct LogSumAccumulator<T> {
    shift: T,
    acc: Complex<T>,
}

impl<T: Real> Default for LogSumAccumulator<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> LogSumAccumulator<T> {
    pub fn new() -> Self {
        Self { shift: T::neg_infinity(), acc: Complex::new(T::zero(), T::zero()) }
    }

    pub fn push(&mut self, t: LogComplex<T>) {
        if t.is_zero() {
            return;
        }
        if t.log_mag > self.shift {
            if self.shift != T::neg_infinity() {
                self.acc = self.acc * (self.shift - t.log_mag).exp();
            }
            self.shift = t.log_mag;
        }
        self.acc += cis_exact(t.phase) * (t.log_mag - self.shift).exp();
    }

    /// Largest log-magnitude pushed so far.
    pub fn peak(&self) -> T {
        self.shift
    }

    pub fn finish(self) -> LogComplex<T> {
        if self.shift == T::neg_infinity() {
            return LogComplex::zero();
        }
        LogComplex::from_complex(self.acc).scale_ln(self.shift)
    }
}
