//! Stirling numbers in log space. Rows up to [`EXACT_LIMIT`] come from an exact
//! big-integer table; larger rows use the positive-term recurrences with log-sum-exp.

use crate::numeric::{ln_biguint, log_add_exp};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::sync::OnceLock;

/// Largest `n` served from the exact tables.
pub const EXACT_LIMIT: usize = 200;

type Table = Vec<Vec<BigUint>>;

fn build(second_kind: bool) -> Table {
    let mut rows: Table = vec![vec![BigUint::one()]];
    for n in 1..=EXACT_LIMIT {
        let prev = &rows[n - 1];
        let mut row = vec![BigUint::zero(); n + 1];
        for k in 1..=n {
            let stay = if k < n { &prev[k] * if second_kind { k } else { n - 1 } } else { BigUint::zero() };
            row[k] = stay + &prev[k - 1];
        }
        rows.push(row);
    }
    rows
}

/// Exact `S_2(n, k)` table for `n <= EXACT_LIMIT`.
pub fn stirling2_table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| build(true))
}

/// Exact `|S_1(n, k)|` table for `n <= EXACT_LIMIT`.
pub fn stirling1_table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| build(false))
}

fn log_recurrence(n: usize, k: usize, second_kind: bool) -> f64 {
    let mut row = vec![f64::NEG_INFINITY; k + 1];
    row[0] = 0.0;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            let factor = if second_kind { j } else { m - 1 };
            let stay = if j < m && factor > 0 {
                row[j] + (factor as f64).ln()
            } else {
                f64::NEG_INFINITY
            };
            row[j] = log_add_exp(stay, row[j - 1]);
        }
        row[0] = f64::NEG_INFINITY;
    }
    row[k]
}

/// `ln S_2(n, k)`; `-inf` when the number is zero.
pub fn log_stirling2(n: usize, k: usize) -> f64 {
    if k > n || (k == 0 && n > 0) {
        return f64::NEG_INFINITY;
    }
    if n <= EXACT_LIMIT {
        return ln_biguint(&stirling2_table()[n][k]);
    }
    log_recurrence(n, k, true)
}

/// `ln |S_1(n, k)|`; `-inf` when the number is zero.
pub fn log_stirling1_abs(n: usize, k: usize) -> f64 {
    if k > n || (k == 0 && n > 0) {
        return f64::NEG_INFINITY;
    }
    if n <= EXACT_LIMIT {
        return ln_biguint(&stirling1_table()[n][k]);
    }
    log_recurrence(n, k, false)
}

/// `ln |S_1(n, j)|` for `j = 0..=n`.
pub fn log_stirling1_abs_row(n: usize) -> Vec<f64> {
    if n <= EXACT_LIMIT {
        return stirling1_table()[n].iter().map(ln_biguint).collect();
    }
    let mut row = vec![0.0];
    for m in 1..=n {
        let mut next = vec![f64::NEG_INFINITY; m + 1];
        for j in 1..=m {
            let stay = if j < m { row[j] + ((m - 1) as f64).ln() } else { f64::NEG_INFINITY };
            next[j] = log_add_exp(stay, row[j - 1]);
        }
        row = next;
    }
    row
}

/// `ln S_2(m, k)` for all `0 <= k <= m <= n`, indexed `[m][k]`.
pub fn log_stirling2_triangle(n: usize) -> Vec<Vec<f64>> {
    let table = (n <= EXACT_LIMIT).then(stirling2_table);
    let mut rows: Vec<Vec<f64>> = vec![vec![0.0]];
    for m in 1..=n {
        let row = match table {
            Some(t) => t[m].iter().map(ln_biguint).collect(),
            None => {
                let prev = &rows[m - 1];
                (0..=m)
                    .map(|k| {
                        if k == 0 {
                            return f64::NEG_INFINITY;
                        }
                        let stay = if k < m { prev[k] + (k as f64).ln() } else { f64::NEG_INFINITY };
                        log_add_exp(stay, prev[k - 1])
                    })
                    .collect()
            }
        };
        rows.push(row);
    }
    rows
}
