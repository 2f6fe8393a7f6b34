//! Closed form of `F(A)` for `Γ/2π` rational.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logdomain::{log_sum_exp_complex, LogComplex};
use crate::scalar::{lit, Real};

/// Largest denominator accepted by [`f_rational`].
pub const RATIONAL_DEN_CAP: i64 = 100_000;

/// `Γ/2π = num/den` in lowest terms with `den` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalGamma {
    pub num: i64,
    pub den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RationalGamma {
    /// Checks that the fraction is reduced and the denominator odd.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den < 1 || den % 2 == 0 {
            return Err(Error::Precondition(format!("rational gamma: denominator {den} must be odd and positive")));
        }
        if gcd(num, den) != 1 {
            return Err(Error::Precondition(format!("rational gamma: {num}/{den} is not reduced")));
        }
        Ok(Self { num, den })
    }

    /// `Γ = 2π·num/den`.
    pub fn gamma<T: Real>(&self) -> T {
        T::TAU() * lit::<T>(self.num as f64) / lit::<T>(self.den as f64)
    }

    /// Closest continued-fraction convergent of `gamma/2π` with odd
    /// denominator not exceeding `max_den`.
    pub fn approximate(gamma: f64, max_den: i64) -> Option<Self> {
        let x = gamma / std::f64::consts::TAU;
        let (mut h0, mut h1) = (0i64, 1i64);
        let (mut k0, mut k1) = (1i64, 0i64);
        let mut y = x;
        let mut best: Option<Self> = None;
        for _ in 0..64 {
            let a = y.floor();
            if a.abs() > 1e15 {
                break;
            }
            let a = a as i64;
            let h2 = a.checked_mul(h1)?.checked_add(h0)?;
            let k2 = a.checked_mul(k1)?.checked_add(k0)?;
            if k2 > max_den {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            if k1 % 2 == 1 {
                best = Some(Self { num: h1, den: k1 });
            }
            let frac = y - y.floor();
            if frac < 1e-15 {
                break;
            }
            y = 1.0 / frac;
        }
        best
    }
}

/// `F(A)` for `Γ = 2π·num/den` from the finite sum
/// `Σ_j q^{-j²} exp(A q^{2j}) / Σ_j q^{-j²}`, `q = e^{iΓ}`, `j = 0..den`.
///
/// Root-of-unity phases are reduced in integer arithmetic.
pub fn f_rational<T: Real>(a: Complex<T>, frac: RationalGamma) -> Result<LogComplex<T>> {
    let RationalGamma { num, den } = RationalGamma::new(frac.num, frac.den)?;
    if den > RATIONAL_DEN_CAP {
        return Err(Error::Precondition(format!("rational gamma: denominator {den} exceeds {RATIONAL_DEN_CAP}")));
    }
    let n = den as i128;
    let k = (num as i128).rem_euclid(n);
    let step = T::TAU() / lit::<T>(den as f64);
    let root = |r: i128| {
        let r = r.rem_euclid(n);
        // nearest representative keeps the angle small
        let r = if 2 * r > n { r - n } else { r };
        lit::<T>(r as f64) * step
    };
    let mut num_terms = Vec::with_capacity(den as usize);
    let mut den_terms = Vec::with_capacity(den as usize);
    for j in 0..n {
        let gauss = -root(k * j * j);
        let rot = root(2 * k * j);
        let (s, c) = rot.sin_cos();
        let e = a * Complex::new(c, s);
        num_terms.push(LogComplex::exp(Complex::new(e.re, e.im + gauss)));
        den_terms.push(LogComplex::from_polar(T::zero(), gauss));
    }
    let top = log_sum_exp_complex(&num_terms);
    let bottom = log_sum_exp_complex(&den_terms);
    Ok(top / bottom)
}
