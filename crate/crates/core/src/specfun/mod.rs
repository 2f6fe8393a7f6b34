//! Special-function kernels: multi-branch Lambert W, modified Bessel `I_k`
//! (exact series and log-domain asymptotic), associated Stirling numbers, and
//! log-domain summation.

mod bessel;
mod lambert;
mod stirling;

pub use bessel::{
    bessel_i_exact, bessel_i_exact_log, bessel_i_log_asymptotic, BESSEL_ASYMPTOTIC_THRESHOLD,
    BESSEL_EXACT_CAP, BESSEL_EXACT_LOG_CAP,
};
pub use lambert::{branch_index, lambert_w, BRANCH_POINT_EXCLUSION};
pub use stirling::{stirling3, stirling3_real, Stirling3Table};

pub use crate::logdomain::log_sum_exp_complex;
