//! Complex Lambert W on every branch.
//!
//! Branch `k` uses the standard cut convention: the principal branch is cut
//! along `(-∞, -1/e]`, the others along `(-∞, 0]`, values on a cut are the
//! limits from above, and `Im W_k` sits near `2πk` for large `|z|`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, two_pi, Real};

const MAX_ITER: usize = 64;

/// Distance from `-1/e` below which branches 0 and -1 are refused.
pub const BRANCH_POINT_EXCLUSION: f64 = 1e-12;

#[inline]
fn inv_e<T: Real>() -> T {
    (-T::one()).exp()
}

/// Series around the branch point in `p = sqrt(2(e z + 1))`.
fn branch_point_seed<T: Real>(z: Complex<T>, flip: bool) -> Complex<T> {
    let two = lit::<T>(2.0);
    let mut p = ((z * T::one().exp() + T::one()) * two).sqrt();
    if flip {
        p = -p;
    }
    let p2 = p * p;
    let p3 = p2 * p;
    -Complex::new(T::one(), T::zero()) + p - p2 / lit::<T>(3.0) + p3 * lit::<T>(11.0 / 72.0)
        - p2 * p2 * lit::<T>(43.0 / 540.0)
}

fn asymptotic_seed<T: Real>(z: Complex<T>, k: i64) -> Complex<T> {
    let l1 = z.ln() + Complex::new(T::zero(), two_pi::<T>() * lit::<T>(k as f64));
    let l2 = l1.ln();
    l1 - l2 + l2 / l1 + l2 * (l2 - lit::<T>(2.0)) / (l1 * l1 * lit::<T>(2.0))
}

/// Halley step on `w e^w - z`.
fn halley<T: Real>(w: Complex<T>, z: Complex<T>) -> Complex<T> {
    let two = lit::<T>(2.0);
    let ew = w.exp();
    let f = w * ew - z;
    let wp1 = w + T::one();
    let denom = ew * wp1 - (w + two) * f / (wp1 * two);
    w - f / denom
}

fn converged<T: Real>(w: Complex<T>, step: Complex<T>) -> bool {
    step.norm() <= lit::<T>(4.0) * T::epsilon() * w.norm().max(T::one())
}

/// Newton on `w + ln w - (ln z + 2πik)`, whose roots are exactly branch `k`
/// away from the real segment of `W_{-1}`.
fn solve_log_form<T: Real>(z: Complex<T>, k: i64, mut w: Complex<T>) -> Complex<T> {
    let target = z.ln() + Complex::new(T::zero(), two_pi::<T>() * lit::<T>(k as f64));
    for _ in 0..MAX_ITER {
        let g = w + w.ln() - target;
        let step = g * w / (w + T::one());
        let next = w - step;
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        w = next;
        if converged(w, step) {
            break;
        }
    }
    w
}

fn polish<T: Real>(z: Complex<T>, mut w: Complex<T>) -> Complex<T> {
    for _ in 0..MAX_ITER {
        let next = halley(w, z);
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        let step = next - w;
        w = next;
        if converged(w, step) {
            break;
        }
    }
    w
}

/// Real lower branch `W_{-1}` on `(-1/e, 0)`.
fn real_lower_branch<T: Real>(x: T) -> T {
    let mut w = if x < lit::<T>(-0.25) {
        branch_point_seed(Complex::new(x, T::zero()), true).re
    } else {
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    let two = lit::<T>(2.0);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + T::one();
        let step = f / (ew * wp1 - (w + two) * f / (wp1 * two));
        w -= step;
        if step.abs() <= lit::<T>(4.0) * T::epsilon() * w.abs() {
            break;
        }
    }
    w
}

/// `W_branch(z)`: the solution of `w e^w = z` on the requested branch.
pub fn lambert_w<T: Real>(branch: i64, z: Complex<T>) -> Result<Complex<T>> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("lambert_w: non-finite argument {z:?}")));
    }
    let zero = T::zero();
    if z.re == zero && z.im == zero {
        return if branch == 0 {
            Ok(Complex::new(zero, zero))
        } else {
            Err(Error::Domain(format!("lambert_w: W_{branch}(0) is -∞")))
        };
    }

    let bp_dist = (z + inv_e::<T>()).norm();
    if (branch == 0 || branch == -1) && bp_dist < lit(BRANCH_POINT_EXCLUSION) {
        return Err(Error::NearBranchPoint { branch, distance: bp_dist.to_f64().unwrap_or(0.0) });
    }

    // W_{-1} is real on (-1/e, 0); the log identity does not select it there.
    if branch == -1 && z.im == zero && z.re < zero && z.re > -inv_e::<T>() {
        return Ok(Complex::new(real_lower_branch(z.re), zero));
    }

    let near_bp = bp_dist < lit(0.5);
    let upper = z.im >= zero;
    let seed = match branch {
        0 if z.norm() < lit(0.3) => z * (Complex::new(T::one(), zero) - z + z * z * lit::<T>(1.5)),
        0 if near_bp => branch_point_seed(z, false),
        0 if z.norm() <= lit(3.0) && z.re >= zero => (z + T::one()).ln(),
        -1 if near_bp && upper => branch_point_seed(z, true),
        1 if near_bp && !upper => branch_point_seed(z, true),
        k => asymptotic_seed(z, k),
    };
    let on_branch = |w: Complex<T>| {
        w.re.is_finite() && w.im.is_finite() && (branch_index(z, w) - lit::<T>(branch as f64)).abs() < lit(1e-3)
    };
    let mut w = polish(z, solve_log_form(z, branch, seed));
    if !on_branch(w) {
        // fall back to the other seeds before giving up
        for alt in [asymptotic_seed(z, branch), branch_point_seed(z, false), branch_point_seed(z, true)] {
            let cand = polish(z, solve_log_form(z, branch, alt));
            if on_branch(cand) {
                w = cand;
                break;
            }
        }
    }

    if !on_branch(w) {
        return Err(Error::Domain(format!("lambert_w: iteration did not settle on branch {branch} at {z:?}")));
    }
    Ok(w)
}

/// Winding index `(w + ln w - ln z) / 2πi`, equal to the branch of `w`
/// everywhere except the real segment of `W_{-1}`.
pub fn branch_index<T: Real>(z: Complex<T>, w: Complex<T>) -> T {
    ((w + w.ln() - z.ln()) / Complex::new(T::zero(), two_pi::<T>())).re
}
