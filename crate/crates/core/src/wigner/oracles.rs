//! Slow reference evaluators of `W(β)` for small amplitudes.

use num_complex::Complex;

use super::terms::TermModel;
use crate::error::{Error, Result};
use crate::husimi::{husimi_direct, KerrState};
use crate::logdomain::{LogComplex, LogSumAccumulator};
use crate::scalar::{from_usize, lit, ln_factorial, mul_mod_2pi, Real};
use crate::specfun::BESSEL_EXACT_CAP;

/// Largest `|α|` accepted by [`wigner_qseries_oracle`].
pub const QSERIES_ALPHA_CAP: f64 = 3.0;
/// Largest Fock cutoff accepted by [`wigner_fock_oracle`].
pub const FOCK_CUTOFF_CAP: usize = 400;

const FOCK_TAIL_LIMIT: f64 = 1e-12;

/// The state rotated onto the real axis, with `β` rotated alongside.
fn canonical<T: Real>(state: &KerrState<T>, beta: Complex<T>) -> (KerrState<T>, Complex<T>) {
    let a = state.alpha.norm();
    if a == T::zero() {
        return (*state, beta);
    }
    let rel = beta * state.alpha.conj();
    (KerrState::new(Complex::new(a, T::zero()), state.gamma), rel / a)
}

/// Fourier–Bessel series with exact Bessel functions, `|k| ≤ k_max`.
pub fn wigner_fourier_exact<T: Real>(state: &KerrState<T>, beta: Complex<T>, k_max: u64) -> Result<T> {
    let (a, b) = (state.alpha.norm(), beta.norm());
    let x = lit::<T>(4.0) * a * b;
    if x > lit(BESSEL_EXACT_CAP) {
        return Err(Error::OracleOutOfRange {
            what: "4|alpha*beta|",
            value: x.to_f64().unwrap_or(f64::INFINITY),
            cap: BESSEL_EXACT_CAP,
        });
    }
    let model = TermModel::new(a, b, state.gamma, true)?;
    let p = state.kerr_argument(beta);
    let phi = p.im.atan2(p.re);
    let kmax = k_max as i64;
    let mut acc = LogSumAccumulator::new();
    for k in -kmax..=kmax {
        let t = model.log_term(k)?;
        if !t.is_zero() {
            acc.push(LogComplex::from_polar(t.log_mag, t.phase + mul_mod_2pi(lit(k as f64), phi)));
        }
    }
    Ok(acc.finish().re().value())
}

/// `W(β) = 2e^{2|β|²} Σ_m (-|α|²)^m/m! · Q(2β e^{-2imΓ})` with the direct
/// Husimi series, for `|α| ≤ 3`.
///
/// The alternating sum cancels `e^{|α|²}`-sized terms down to `O(1)`, so the
/// absolute error is about `1e-16 · e^{2|α|²}`.
pub fn wigner_qseries_oracle<T: Real>(state: &KerrState<T>, beta: Complex<T>, m_max: usize) -> Result<T> {
    let a = state.alpha.norm();
    if a > lit(QSERIES_ALPHA_CAP) {
        return Err(Error::OracleOutOfRange {
            what: "|alpha|",
            value: a.to_f64().unwrap_or(f64::INFINITY),
            cap: QSERIES_ALPHA_CAP,
        });
    }
    let (state, beta) = canonical(state, beta);
    let state = &state;
    let a2 = a * a;
    let needed = (a2.to_f64().unwrap() * std::f64::consts::E.powi(2) + 40.0).ceil() as usize;
    let m_top = m_max.max(needed);
    let lead = lit::<T>(2.0).ln() + lit::<T>(2.0) * beta.norm_sqr();
    let mut logs = Vec::with_capacity(m_top + 1);
    for m in 0..=m_top {
        if m > 0 && a2 == T::zero() {
            break;
        }
        let rot = Complex::from_polar(lit::<T>(2.0), -lit::<T>(2.0 * m as f64) * state.gamma);
        let q = husimi_direct(state, beta * rot)?;
        if q.sign == 0 {
            continue;
        }
        let pow = if m == 0 { T::zero() } else { from_usize::<T>(m) * a2.ln() };
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        logs.push((lead + pow - ln_factorial::<T>(m) + q.log_mag, lit::<T>(sign)));
    }
    let shift = logs.iter().map(|l| l.0).fold(T::neg_infinity(), T::max);
    if shift == T::neg_infinity() {
        return Ok(T::zero());
    }
    let sum = logs.iter().fold(T::zero(), |s, &(l, sg)| s + sg * (l - shift).exp());
    Ok(sum * shift.exp())
}

/// Poisson weight of photon numbers above `n_cut`.
fn poisson_tail<T: Real>(a2: T, n_cut: usize) -> T {
    if a2 == T::zero() {
        return T::zero();
    }
    let ln_a2 = a2.ln();
    let mut tail = T::zero();
    let mut n = n_cut + 1;
    loop {
        let l = -a2 + from_usize::<T>(n) * ln_a2 - ln_factorial::<T>(n);
        let t = l.exp();
        tail += t;
        if (from_usize::<T>(n) > a2 && t < tail * lit(1e-17)) || t == T::zero() && from_usize::<T>(n) > a2 {
            break;
        }
        n += 1;
    }
    tail
}

/// `W(β)` in the Fock basis truncated at `n_cut`:
/// `Σ_{m ≤ n} c_m c_n* W_mn + c.c.` with
/// `W_mn = (2/π)(-1)^m sqrt(m!/n!) (2β)^{n-m} e^{-2|β|²} L_m^{(n-m)}(4|β|²)`.
///
/// Laguerre values come from the normalised three-term recurrence with a
/// running log scale.
pub fn wigner_fock_oracle<T: Real>(state: &KerrState<T>, beta: Complex<T>, n_cut: usize) -> Result<T> {
    if n_cut > FOCK_CUTOFF_CAP {
        return Err(Error::Precondition(format!("fock cutoff {n_cut} exceeds {FOCK_CUTOFF_CAP}")));
    }
    let a = state.alpha.norm();
    let a2 = a * a;
    let tail = poisson_tail(a2, n_cut);
    let window = a2 + lit::<T>(10.0) * (a2 + T::one()).sqrt();
    if tail > lit(FOCK_TAIL_LIMIT) || window > from_usize(n_cut) {
        return Err(Error::CutoffInsufficient { n_cut, tail: tail.to_f64().unwrap_or(1.0) });
    }
    let (state, beta) = canonical(state, beta);
    let arg_b = beta.im.atan2(beta.re);
    let half = lit::<T>(0.5);
    let coeffs: Vec<(T, T)> = (0..=n_cut)
        .map(|n| {
            let nf = from_usize::<T>(n);
            let log_mag = if n == 0 {
                -a2 * half
            } else if a == T::zero() {
                T::neg_infinity()
            } else {
                -a2 * half + nf * a.ln() - ln_factorial::<T>(n) * half
            };
            let phase = mul_mod_2pi(state.gamma, nf * (nf - T::one()));
            (log_mag, phase)
        })
        .collect();

    let x = lit::<T>(4.0) * beta.norm_sqr();
    let ln_norm = (lit::<T>(2.0) / T::PI()).ln();
    let rescale = lit::<T>(1e100);
    let ln_rescale = rescale.ln();
    let mut total = T::zero();
    for d in 0..=n_cut {
        if d > 0 && x == T::zero() {
            break;
        }
        let df = from_usize::<T>(d);
        let mut scale = if d == 0 { -x * half } else { df * half * x.ln() - x * half - ln_factorial::<T>(d) * half };
        let (mut prev, mut cur) = (T::zero(), T::one());
        let mult = if d == 0 { T::one() } else { lit(2.0) };
        for m in 0..=(n_cut - d) {
            let n = m + d;
            let (lm, pm) = coeffs[m];
            let (ln_, pn) = coeffs[n];
            if cur != T::zero() && lm > T::neg_infinity() && ln_ > T::neg_infinity() {
                let log_mag = lm + ln_ + ln_norm + scale + cur.abs().ln();
                let mut phase = pm - pn + mul_mod_2pi(df, arg_b);
                if (m % 2 == 1) != (cur < T::zero()) {
                    phase += T::PI();
                }
                total += mult * log_mag.exp() * phase.cos();
            }
            let mf = from_usize::<T>(m);
            let next = ((lit::<T>(2.0) * mf + T::one() + df - x) * cur - (mf * (mf + df)).sqrt() * prev)
                / ((mf + T::one()) * (mf + T::one() + df)).sqrt();
            prev = cur;
            cur = next;
            if cur.abs() > rescale {
                cur = cur / rescale;
                prev = prev / rescale;
                scale += ln_rescale;
            }
        }
    }
    Ok(total)
}
