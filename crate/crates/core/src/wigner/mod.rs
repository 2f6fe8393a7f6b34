//! Wigner function of the Kerr-evolved coherent state.

mod oracles;
mod terms;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub use oracles::{wigner_fock_oracle, wigner_fourier_exact, wigner_qseries_oracle, FOCK_CUTOFF_CAP, QSERIES_ALPHA_CAP};

use crate::error::{Error, Result};
use crate::husimi::KerrState;
use crate::logdomain::{LogComplex, LogReal, LogSumAccumulator};
use crate::scalar::{cis, lit, mul_mod_2pi, Real};
use terms::TermModel;

/// Number of coarse samples used to locate the term-magnitude peak.
const KMAX_SCAN_POINTS: u64 = 512;

/// Truncation and kernel choice for the Fourier–Bessel series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerOptions {
    /// Terms below `rel_eps` times the largest term are dropped.
    pub rel_eps: f64,
    /// Hard cap on `k_max`; `None` means the largest `k` with `k|Γ| < π/2`.
    pub kmax_cap: Option<u64>,
    /// Use the exact Bessel series instead of the uniform asymptotic form.
    pub exact_bessel: bool,
}

impl Default for WignerOptions {
    fn default() -> Self {
        Self { rel_eps: 1e-8, kmax_cap: None, exact_bessel: false }
    }
}

impl WignerOptions {
    fn validate(&self) -> Result<()> {
        if !(self.rel_eps > 0.0 && self.rel_eps <= 1e-2) {
            return Err(Error::Precondition(format!("rel_eps must lie in (0, 1e-2], got {}", self.rel_eps)));
        }
        if self.kmax_cap == Some(0) {
            return Err(Error::Precondition("kmax_cap must be at least 1".into()));
        }
        Ok(())
    }

    /// Effective cap for a given `Γ ≠ 0`.
    pub fn cap_for<T: Real>(&self, gamma: T) -> u64 {
        let window = (T::FRAC_PI_2() / gamma.abs()).ceil().to_f64().unwrap_or(f64::MAX);
        let window = if window >= 1.8e19 { u64::MAX } else { (window as u64).saturating_sub(1).max(1) };
        self.kmax_cap.map_or(window, |c| c.min(window))
    }
}

/// Outcome of [`find_kmax`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KmaxSearch {
    pub kmax: u64,
    /// Position of the largest term.
    pub peak_k: u64,
    /// The cap was reached before the tail fell below the target.
    pub truncated: bool,
}

/// Full result of [`wigner_point_detailed`].
#[derive(Clone, Copy, Debug)]
pub struct WignerEval<T: Real> {
    pub value: LogReal<T>,
    pub kmax: KmaxSearch,
    /// `|Im Σ|` relative to the largest term; zero up to rounding.
    pub imag_residue: T,
}

/// `|β_s|`, below which the term profile has two maxima; `None` when
/// `|α|²|Γ| < 1/2`.
pub fn beta_split<T: Real>(state: &KerrState<T>) -> Option<T> {
    let a = state.alpha.norm();
    let s = a * a * state.gamma.abs();
    if s < lit(0.5) {
        return None;
    }
    let inv = T::one() / (lit::<T>(2.0) * s);
    Some(a * lit(0.5) * (T::one() + (T::one() - inv * inv).sqrt()))
}

fn kmax_search<T: Real>(model: &TermModel<T>, cap: u64, rel_eps: f64) -> Result<KmaxSearch> {
    let g = |k: u64| model.log_mag(k as i64);
    let stride = cap.div_ceil(KMAX_SCAN_POINTS).max(1);
    let mut samples = Vec::new();
    let mut k = 0u64;
    loop {
        samples.push((k, g(k)?));
        if k == cap {
            break;
        }
        k = (k + stride).min(cap);
    }
    let (peak_k, peak) = samples
        .iter()
        .copied()
        .fold((0, T::neg_infinity()), |acc, s| if s.1 > acc.1 { s } else { acc });
    let threshold = peak + lit::<T>(rel_eps.ln());
    // last coarse sample still above the threshold; covers a split maximum
    let last = samples.iter().rposition(|s| s.1 >= threshold).unwrap_or(0);
    if last + 1 == samples.len() {
        return Ok(KmaxSearch { kmax: cap, peak_k, truncated: samples[last].1 >= threshold && cap > 0 });
    }
    // smallest k in (lo, hi] below the threshold
    let (mut lo, mut hi) = (samples[last].0, samples[last + 1].0);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if g(mid)? < threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(KmaxSearch { kmax: hi, peak_k, truncated: false })
}

fn model_for<T: Real>(state: &KerrState<T>, abs_beta: T, opts: &WignerOptions) -> Result<TermModel<T>> {
    TermModel::new(state.alpha.norm(), abs_beta, state.gamma, opts.exact_bessel)
}

/// Smallest `k_max` at which the series terms have dropped below `rel_eps`
/// of the largest term.
///
/// The whole admissible range is sampled on a coarse stride first, so a
/// second maximum of the term profile is never cut off.
pub fn find_kmax<T: Real>(state: &KerrState<T>, beta: Complex<T>, opts: &WignerOptions) -> Result<KmaxSearch> {
    opts.validate()?;
    if state.gamma == T::zero() {
        return Err(Error::Precondition("find_kmax: Γ = 0 has a closed form".into()));
    }
    let model = model_for(state, beta.norm(), opts)?;
    kmax_search(&model, opts.cap_for(state.gamma), opts.rel_eps)
}

fn phi0<T: Real>(state: &KerrState<T>, beta: Complex<T>) -> T {
    let p = state.kerr_argument(beta);
    p.im.atan2(p.re)
}

fn coherent_log_w<T: Real>(state: &KerrState<T>, beta: Complex<T>) -> LogReal<T> {
    LogReal::new((lit::<T>(2.0) / T::PI()).ln() - lit::<T>(2.0) * (beta - state.alpha).norm_sqr(), 1)
}

/// [`wigner_point`] together with the truncation and reality diagnostics.
pub fn wigner_point_detailed<T: Real>(
    state: &KerrState<T>,
    beta: Complex<T>,
    opts: &WignerOptions,
) -> Result<WignerEval<T>> {
    opts.validate()?;
    if state.gamma == T::zero() {
        return Ok(WignerEval {
            value: coherent_log_w(state, beta),
            kmax: KmaxSearch { kmax: 0, peak_k: 0, truncated: false },
            imag_residue: T::zero(),
        });
    }
    let model = model_for(state, beta.norm(), opts)?;
    let search = kmax_search(&model, opts.cap_for(state.gamma), opts.rel_eps)?;
    let phi = phi0(state, beta);
    let kmax = search.kmax as i64;
    let mut acc = LogSumAccumulator::new();
    for k in -kmax..=kmax {
        let t = model.log_term(k)?;
        if t.is_zero() {
            continue;
        }
        acc.push(LogComplex::from_polar(t.log_mag, t.phase + mul_mod_2pi(lit(k as f64), phi)));
    }
    let peak = acc.peak();
    let sum = acc.finish();
    let imag = sum.to_complex_scaled(-peak).im.abs();
    Ok(WignerEval { value: sum.re(), kmax: search, imag_residue: imag })
}

/// `W(β)` from the Fourier–Bessel series; `(2/π) e^{-2|β-α|²}` at `Γ = 0`.
pub fn wigner_point<T: Real>(state: &KerrState<T>, beta: Complex<T>, opts: &WignerOptions) -> Result<LogReal<T>> {
    Ok(wigner_point_detailed(state, beta, opts)?.value)
}

/// Series coefficients for every `β` on one circle `|β| = r`.
///
/// The term magnitudes and `k_max` depend on `|β|` only, so a polar grid row
/// shares them and each angle costs one pass over `k`.
#[derive(Clone, Debug)]
pub struct WignerRing<T: Real> {
    state: KerrState<T>,
    radius: T,
    search: KmaxSearch,
    shift: T,
    coeffs: Vec<Complex<T>>,
}

/// Rotations are re-anchored with an exact `cis(kΦ)` this often.
const RING_REANCHOR: usize = 64;

impl<T: Real> WignerRing<T> {
    pub fn new(state: &KerrState<T>, radius: T, opts: &WignerOptions) -> Result<Self> {
        opts.validate()?;
        let mut ring = Self {
            state: *state,
            radius,
            search: KmaxSearch { kmax: 0, peak_k: 0, truncated: false },
            shift: T::zero(),
            coeffs: Vec::new(),
        };
        if state.gamma == T::zero() {
            return Ok(ring);
        }
        let model = model_for(state, radius, opts)?;
        ring.search = kmax_search(&model, opts.cap_for(state.gamma), opts.rel_eps)?;
        let logs = (0..=ring.search.kmax as i64).map(|k| model.log_term(k)).collect::<Result<Vec<_>>>()?;
        ring.shift = logs.iter().map(|l| l.log_mag).fold(T::neg_infinity(), T::max);
        let two = lit::<T>(2.0);
        ring.coeffs = logs
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let c = l.to_complex_scaled(-ring.shift);
                if k == 0 { c } else { c * two }
            })
            .collect();
        Ok(ring)
    }

    pub fn kmax(&self) -> KmaxSearch {
        self.search
    }

    /// `W(r e^{iφ})`.
    pub fn eval(&self, arg_beta: T) -> LogReal<T> {
        let beta = Complex::from_polar(self.radius, arg_beta);
        if self.state.gamma == T::zero() {
            return coherent_log_w(&self.state, beta);
        }
        let phi = phi0(&self.state, beta);
        let step = cis(phi);
        let mut sum = T::zero();
        let mut rot = Complex::new(T::one(), T::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            if k % RING_REANCHOR == 0 {
                rot = cis(mul_mod_2pi(lit(k as f64), phi));
            }
            sum += c.re * rot.re - c.im * rot.im;
            rot = rot * step;
        }
        LogReal::from_value(sum).scale_ln(self.shift)
    }
}
