//! Husimi `Q` function of the Kerr-evolved coherent state.
//!
//! `Q(β) = e^{-|α|²-|β|²} |F(αβ* e^{-iΓ})|² / π` with
//! `F(A) = Σ Aⁿ e^{iΓn²} / n!`.

mod direct;
mod rational;
mod saddle;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub use direct::{f_direct, F_DIRECT_CAP};
pub use rational::{f_rational, RationalGamma, RATIONAL_DEN_CAP};
pub use saddle::{
    cfww_correction, f_saddle, saddle_sum, select_kbar, FEvalOptions, SaddleEval, SaddleTerm,
    MAX_CORRECTION_ORDER,
};

use crate::error::{Error, Result};
use crate::logdomain::{LogComplex, LogReal};
use crate::scalar::{cis, Real};

/// Coherent state `|α⟩` evolved for a Kerr phase `Γ`:
/// `cₙ = e^{-|α|²/2} αⁿ e^{iΓn(n-1)} / sqrt(n!)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KerrState<T> {
    pub alpha: Complex<T>,
    pub gamma: T,
}

impl<T: Real> KerrState<T> {
    pub fn new(alpha: Complex<T>, gamma: T) -> Self {
        Self { alpha, gamma }
    }

    pub fn from_polar(abs_alpha: T, arg_alpha: T, gamma: T) -> Self {
        Self { alpha: Complex::from_polar(abs_alpha, arg_alpha), gamma }
    }

    pub fn mean_photon_number(&self) -> T {
        self.alpha.norm_sqr()
    }

    /// `A = αβ* e^{-iΓ}`, the argument of `F` in `Q(β)`.
    pub fn kerr_argument(&self, beta: Complex<T>) -> Complex<T> {
        self.alpha * beta.conj() * cis(-self.gamma)
    }

    fn coherent_log_q(&self, beta: Complex<T>) -> LogReal<T> {
        LogReal::new(-(beta - self.alpha).norm_sqr() - T::PI().ln(), 1)
    }

    fn log_q_from_f(&self, beta: Complex<T>, f: LogComplex<T>) -> LogReal<T> {
        if f.is_zero() {
            return LogReal::zero();
        }
        let two = T::one() + T::one();
        LogReal::new(two * f.log_mag - self.alpha.norm_sqr() - beta.norm_sqr() - T::PI().ln(), 1)
    }
}

/// `Q(β)` through [`f_saddle`]; exact coherent form at `Γ = 0`.
pub fn husimi_point<T: Real>(state: &KerrState<T>, beta: Complex<T>, opts: &FEvalOptions) -> Result<LogReal<T>> {
    if state.gamma == T::zero() {
        return Ok(state.coherent_log_q(beta));
    }
    let f = f_saddle(state.kerr_argument(beta), state.gamma, opts)?;
    Ok(state.log_q_from_f(beta, f))
}

/// `Q(β)` through the direct series; `|α||β| ≤ 2·10⁴`.
pub fn husimi_direct<T: Real>(state: &KerrState<T>, beta: Complex<T>) -> Result<LogReal<T>> {
    let size = state.alpha.norm() * beta.norm();
    if size > crate::scalar::lit(F_DIRECT_CAP) {
        return Err(Error::OracleOutOfRange {
            what: "|alpha|*|beta|",
            value: size.to_f64().unwrap_or(f64::INFINITY),
            cap: F_DIRECT_CAP,
        });
    }
    let f = f_direct(state.kerr_argument(beta), state.gamma, T::epsilon() * crate::scalar::lit(1e-2))?;
    Ok(state.log_q_from_f(beta, f))
}
