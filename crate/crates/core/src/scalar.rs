//! Scalar abstraction shared by every kernel.
//!
//! All numerics are written against [`Real`], so the same code runs in `f32`
//! or `f64`. Tolerances quoted in tests assume `f64`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar usable by the evaluators.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline(always)]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an integer index into `T`.
#[inline(always)]
pub fn from_i64<T: Real>(x: i64) -> T {
    T::from_i64(x).expect("integer representable in scalar type")
}

#[inline(always)]
pub fn from_usize<T: Real>(x: usize) -> T {
    T::from_usize(x).expect("integer representable in scalar type")
}

#[inline(always)]
pub(crate) fn two_pi<T: Real>() -> T {
    T::TAU()
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_phase<T: Real>(phase: T) -> T {
    let pi = T::PI();
    if phase > -pi && phase <= pi {
        return phase;
    }
    let tau = two_pi::<T>();
    let mut r = phase % tau;
    if r > pi {
        r -= tau;
    } else if r <= -pi {
        r += tau;
    }
    r
}

/// `sign(x)` as `-1`, `0` or `+1` in `T`.
#[inline]
pub fn signum0<T: Real>(x: T) -> T {
    if x > T::zero() {
        T::one()
    } else if x < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

#[inline]
pub(crate) fn cis<T: Real>(phase: T) -> Complex<T> {
    let (s, c) = phase.sin_cos();
    Complex::new(c, s)
}

/// `a·b` reduced to `(-π, π]` without the rounding error of the product.
///
/// Uses an error-free product and a two-word `2π`, so phases such as `Γn²`
/// with `n ~ 10⁴` keep full relative accuracy in the reduced result.
pub fn mul_mod_2pi<T: Real>(a: T, b: T) -> T {
    let hi = a * b;
    let lo = a.mul_add(b, -hi);
    let tau_hi = two_pi::<T>();
    let tau_lo: T = lit((std::f64::consts::TAU - tau_hi.to_f64().unwrap()) + 2.449_293_598_294_706_4e-16);
    let q = (hi / tau_hi).round();
    let r = (-q).mul_add(tau_hi, hi);
    wrap_phase(r - q * tau_lo + lo)
}

/// Natural log of the gamma function for `x > 0`.
///
/// Shifts the argument above 12 and applies the Stirling series; accurate to a
/// few ulp in `f64`.
pub fn ln_gamma<T: Real>(x: T) -> T {
    debug_assert!(x > T::zero());
    let twelve = lit::<T>(12.0);
    let mut x = x;
    let mut prod = T::one();
    while x < twelve {
        prod *= x;
        x += T::one();
    }
    let shift = prod.ln();
    let inv = x.recip();
    let inv2 = inv * inv;
    // Bernoulli-number coefficients B_{2j} / (2j (2j-1))
    let series = inv
        * (lit::<T>(1.0 / 12.0)
            + inv2
                * (lit::<T>(-1.0 / 360.0)
                    + inv2
                        * (lit::<T>(1.0 / 1260.0)
                            + inv2
                                * (lit::<T>(-1.0 / 1680.0)
                                    + inv2
                                        * (lit::<T>(1.0 / 1188.0)
                                            + inv2 * lit::<T>(-691.0 / 360360.0))))));
    (x - lit(0.5)) * x.ln() - x + lit::<T>(0.918_938_533_204_672_741_78) + series - shift
}

/// `ln(n!)`.
pub fn ln_factorial<T: Real>(n: usize) -> T {
    if n < 2 {
        return T::zero();
    }
    if n <= 20 {
        // exact in f64 up to 22!
        let p: u64 = (2..=n as u64).product();
        return lit::<T>(p as f64).ln();
    }
    ln_gamma(from_usize::<T>(n) + T::one())
}
