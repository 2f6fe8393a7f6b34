//! Associated Stirling numbers of the second kind with minimum block size 3.
//!
//! `S₃(n, k)` counts partitions of `n` labelled items into `k` blocks of size
//! at least 3; equivalently `exp(u(t³/3! + t⁴/4! + …)) = Σ S₃(n,k) uᵏ tⁿ/n!`.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::Real;

/// Triangular table of exact values, grown on demand.
#[derive(Debug, Clone)]
pub struct Stirling3Table {
    max_n: usize,
    // rows[n][k] for 0 <= 3k <= n
    rows: Vec<Vec<BigUint>>,
}

impl Default for Stirling3Table {
    fn default() -> Self {
        Self::new()
    }
}

fn binom2(n: usize) -> BigUint {
    BigUint::from(n * n.saturating_sub(1) / 2)
}

impl Stirling3Table {
    pub fn new() -> Self {
        Self { max_n: 0, rows: vec![vec![BigUint::from(1u32)]] }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// Extends the table through row `n` using
    /// `S₃(n+1, k) = k·S₃(n, k) + C(n, 2)·S₃(n-2, k-1)`.
    pub fn grow_to(&mut self, n: usize) {
        while self.max_n < n {
            let m = self.max_n;
            let next_len = (m + 1) / 3 + 1;
            let mut row = Vec::with_capacity(next_len);
            for k in 0..next_len {
                let mut v = BigUint::zero();
                if let Some(prev) = self.rows[m].get(k) {
                    v += prev * BigUint::from(k);
                }
                if k >= 1 && m >= 2 {
                    if let Some(prev2) = self.rows[m - 2].get(k - 1) {
                        v += prev2 * binom2(m);
                    }
                }
                row.push(v);
            }
            self.rows.push(row);
            self.max_n += 1;
        }
    }

    /// Value if already tabulated; zero outside the triangle.
    pub fn get(&self, n: usize, k: usize) -> Option<BigUint> {
        if n > self.max_n {
            return None;
        }
        Some(self.rows[n].get(k).cloned().unwrap_or_else(BigUint::zero))
    }
}

fn cache() -> &'static RwLock<Stirling3Table> {
    static CACHE: OnceLock<RwLock<Stirling3Table>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Stirling3Table::new()))
}

/// Exact `S₃(n, k)` from the shared, grow-only cache.
pub fn stirling3(n: usize, k: usize) -> BigUint {
    if 3 * k > n {
        return if n == 0 && k == 0 { BigUint::from(1u32) } else { BigUint::zero() };
    }
    if let Some(v) = cache().read().expect("stirling cache poisoned").get(n, k) {
        return v;
    }
    let mut table = cache().write().expect("stirling cache poisoned");
    table.grow_to(n);
    table.get(n, k).expect("row just grown")
}

/// `S₃(n, k)` rounded into the scalar type.
pub fn stirling3_real<T: Real>(n: usize, k: usize) -> T {
    let v = stirling3(n, k);
    T::from_f64(v.to_f64().unwrap_or(f64::INFINITY)).unwrap()
}
