//! Scalar kernels shared by every distribution: log-factorials, Laguerre
//! polynomials and log-domain weight normalization.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LOG_FACTORIAL_TABLE_LEN: usize = 4096;

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LOG_FACTORIAL_TABLE_LEN);
        let mut acc = 0.0_f64;
        table.push(0.0);
        for k in 1..LOG_FACTORIAL_TABLE_LEN {
            acc += (k as f64).ln();
            table.push(acc);
        }
        table
    })
}

/// `ln(n!)`.
///
/// Tabulated as a cumulative sum of logs below 4096; larger arguments use the
/// Stirling series, which is accurate to machine precision there.
pub fn log_factorial(n: u64) -> f64 {
    let table = log_factorial_table();
    if (n as usize) < table.len() {
        return table[n as usize];
    }
    let x = n as f64 + 1.0;
    // ln Γ(x) for x > 4096
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0)));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// Laguerre polynomial `L_r(z)` by the upward three-term recurrence
/// `(k+1) L_{k+1} = (2k+1-z) L_k - k L_{k-1}`.
pub fn laguerre(r: u32, z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if r == 0 {
        return one;
    }
    let mut prev = one;
    let mut curr = one - z;
    for k in 1..r {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - z) * curr - kf * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// A nonnegative quantity stored by its natural log. Exact zeros are carried
/// structurally so that selection-rule zeros never turn into `-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogWeight {
    log_magnitude: f64,
    zero_flag: bool,
}

impl LogWeight {
    pub const ZERO: LogWeight = LogWeight {
        log_magnitude: 0.0,
        zero_flag: true,
    };

    pub fn from_log(log_magnitude: f64) -> Self {
        debug_assert!(!log_magnitude.is_nan());
        LogWeight {
            log_magnitude,
            zero_flag: false,
        }
    }

    /// Weight of a plain nonnegative value; `0.0` becomes an exact zero.
    pub fn from_value(value: f64) -> Self {
        debug_assert!(value >= 0.0);
        if value == 0.0 {
            Self::ZERO
        } else {
            Self::from_log(value.ln())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero_flag
    }

    /// `None` for an exact zero.
    pub fn log_magnitude(&self) -> Option<f64> {
        (!self.zero_flag).then_some(self.log_magnitude)
    }

    pub fn value(&self) -> f64 {
        if self.zero_flag {
            0.0
        } else {
            self.log_magnitude.exp()
        }
    }
}

/// `ln Σ exp(w)` over the nonzero weights; `None` if all are exact zeros.
pub fn log_sum_exp(weights: &[LogWeight]) -> Option<f64> {
    let max = weights
        .iter()
        .filter_map(LogWeight::log_magnitude)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    let sum: f64 = weights
        .iter()
        .filter_map(LogWeight::log_magnitude)
        .map(|l| (l - max).exp())
        .sum();
    Some(max + sum.ln())
}

/// Turns log-domain weights into probabilities summing to one. The maximum
/// log weight is subtracted before exponentiating.
pub fn normalize_log_weights(weights: &[LogWeight]) -> Result<Vec<f64>> {
    let max = weights
        .iter()
        .filter_map(LogWeight::log_magnitude)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::AllZero);
    }
    let mut probs: Vec<f64> = weights
        .iter()
        .map(|w| match w.log_magnitude() {
            Some(l) => (l - max).exp(),
            None => 0.0,
        })
        .collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    Ok(probs)
}
