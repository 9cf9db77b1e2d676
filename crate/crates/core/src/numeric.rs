//! Log-space arithmetic shared by the EPPF, ESC and sampler code.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

const FACTORIAL_TABLE_LEN: usize = 171;

fn ln_factorial_table() -> &'static [f64; FACTORIAL_TABLE_LEN] {
    static TABLE: OnceLock<[f64; FACTORIAL_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; FACTORIAL_TABLE_LEN];
        let mut fact = 1.0_f64;
        for (i, slot) in table.iter_mut().enumerate().skip(1) {
            fact *= i as f64;
            *slot = fact.ln();
        }
        table
    })
}

/// `ln(n!)`, exact-table backed up to 170.
pub fn ln_factorial(n: usize) -> f64 {
    if n < FACTORIAL_TABLE_LEN {
        ln_factorial_table()[n]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

pub fn ln_gamma(x: f64) -> f64 {
    if x.fract() == 0.0 && x >= 1.0 && x <= FACTORIAL_TABLE_LEN as f64 {
        return ln_factorial(x as usize - 1);
    }
    statrs::function::gamma::ln_gamma(x)
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln C(n, k)` for nonnegative integers; `-inf` when `k > n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln(x (x+1) ... (x+m-1))` for `x > 0`.
pub fn ln_rising(x: f64, m: usize) -> f64 {
    if m <= 64 {
        (0..m).map(|i| (x + i as f64).ln()).sum()
    } else {
        ln_gamma(x + m as f64) - ln_gamma(x)
    }
}

/// `ln(K (K-1) ... (K-k+1))`, `-inf` when `k > K`.
pub fn ln_falling(big_k: usize, k: usize) -> f64 {
    if k > big_k {
        return f64::NEG_INFINITY;
    }
    ln_factorial(big_k) - ln_factorial(big_k - k)
}

pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Normalizes log weights in place into probabilities; returns the log normalizer.
pub fn normalize_log_weights(weights: &mut [f64]) -> f64 {
    let lse = log_sum_exp(weights);
    for w in weights.iter_mut() {
        *w = (*w - lse).exp();
    }
    lse
}

/// Result of a signed log-space sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogSum {
    /// `ln |sum|`.
    pub ln_abs: f64,
    pub negative: bool,
    /// `ln(sum |terms|) - ln |sum|`: how many e-folds of cancellation occurred.
    pub cancellation: f64,
}

/// Sums `sign_i * exp(ln_abs_i)` keeping positive and negative parts apart.
pub fn signed_log_sum(terms: &[(f64, bool)]) -> SignedLogSum {
    let pos: Vec<f64> = terms.iter().filter(|t| !t.1).map(|t| t.0).collect();
    let neg: Vec<f64> = terms.iter().filter(|t| t.1).map(|t| t.0).collect();
    let lp = log_sum_exp(&pos);
    let ln_ = log_sum_exp(&neg);
    let total = log_add_exp(lp, ln_);
    let (hi, lo, negative) = if lp >= ln_ { (lp, ln_, false) } else { (ln_, lp, true) };
    let ln_abs = if lo == f64::NEG_INFINITY {
        hi
    } else if hi == lo {
        f64::NEG_INFINITY
    } else {
        hi + (-(lo - hi).exp()).ln_1p()
    };
    SignedLogSum {
        ln_abs,
        negative,
        cancellation: total - ln_abs,
    }
}

/// Natural log of a big unsigned integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |x|` and sign of a big signed integer.
pub fn ln_bigint(x: &BigInt) -> (f64, bool) {
    (ln_biguint(x.magnitude()), x.is_negative())
}

/// Formats a real with 17 significant digits; round-trips through `str::parse::<f64>`.
/// Negative zero prints as zero.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        format!("{:.16e}", 0.0)
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x:.16e}")
    }
}
