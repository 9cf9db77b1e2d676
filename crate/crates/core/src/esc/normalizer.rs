//! `ln P(E_n | μ)`, the probability that i.i.d. cluster sizes drawn from `μ`
//! have a partial sum hitting `n` exactly.

use super::mu::{ln_one_minus_pow, MuFamily};
use super::stirling::{log_stirling1_abs_row, log_stirling2_triangle, stirling1_table, stirling2_table, EXACT_LIMIT};
use crate::error::{domain, Error, Result};
use crate::numeric::{ln_bigint, ln_binomial, ln_factorial, log_sum_exp, signed_log_sum};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Relative accuracy below which a signed sum is reported as a precision failure.
const PRECISION_FLOOR: f64 = 1e-6;

/// Closed-form normalizer for the built-in families.
pub fn log_prob_en_closed(mu: &MuFamily, n: usize) -> Result<f64> {
    if n == 0 {
        return domain("n must be positive");
    }
    mu.validate()?;
    let nf = n as f64;
    match *mu {
        MuFamily::ShiftedBinomial { trials, p } => {
            let (lp, lq) = (p.ln(), (-p).ln_1p());
            let terms: Vec<f64> = (n.div_ceil(trials + 1)..=n)
                .map(|k| {
                    let nk = trials * k;
                    ln_binomial(nk, n - k) + (n - k) as f64 * lp + (nk + k - n) as f64 * lq
                })
                .collect();
            Ok(log_sum_exp(&terms))
        }
        MuFamily::ZtBinomial { trials, p } => Ok(zt_binomial(trials, p, n)),
        MuFamily::ZtPoisson { lambda } => {
            let s2 = log_stirling2_triangle(n);
            let base = nf * lambda.ln() - ln_factorial(n);
            let per = lambda.exp_m1().ln();
            let terms: Vec<f64> = (1..=n)
                .map(|k| ln_factorial(k) + base - k as f64 * per + s2[n][k])
                .collect();
            Ok(log_sum_exp(&terms))
        }
        MuFamily::ZtNegBinomial { r, p } if r == 1.0 => Ok((-p).ln_1p()),
        MuFamily::Geometric { p } => Ok(p.ln()),
        MuFamily::ZtNegBinomial { r, p } => zt_neg_binomial(r, p, n),
        MuFamily::Logarithmic { p } => {
            let s1 = log_stirling1_abs_row(n);
            let base = nf * p.ln() - ln_factorial(n);
            let per = (-(-p).ln_1p()).ln();
            let terms: Vec<f64> = (1..=n)
                .map(|k| ln_factorial(k) + base - k as f64 * per + s1[k])
                .collect();
            Ok(log_sum_exp(&terms))
        }
    }
}

/// The alternating inner sum `Σ_i (-1)^{k-i} C(k,i) C(Ni, n)` is an integer, so it is
/// accumulated exactly.
fn zt_binomial(trials: usize, p: f64, n: usize) -> f64 {
    let k_min = n.div_ceil(trials);
    // C(N i, n) for i = 0..=n
    let choose: Vec<BigUint> = (0..=n).map(|i| big_binomial(trials * i, n)).collect();
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let l_norm = ln_one_minus_pow(p, trials as f64).0;
    let mut pascal: Vec<BigUint> = vec![BigUint::one()];
    let mut terms = Vec::new();
    for k in 1..=n {
        let mut next = vec![BigUint::one(); k + 1];
        for i in 1..k {
            next[i] = &pascal[i - 1] + &pascal[i];
        }
        pascal = next;
        if k < k_min {
            continue;
        }
        let mut inner = BigInt::zero();
        for i in 1..=k {
            let t = BigInt::from(&pascal[i] * &choose[i]);
            if (k - i) % 2 == 0 {
                inner += t;
            } else {
                inner -= t;
            }
        }
        let (l_inner, _) = ln_bigint(&inner);
        terms.push(l_inner + n as f64 * lp + (trials * k - n) as f64 * lq - k as f64 * l_norm);
    }
    log_sum_exp(&terms)
}

fn big_binomial(a: usize, b: usize) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

/// Uses `Σ_i (-1)^{k-i} C(k,i) (ri)^{(n)} = k! Σ_j |S_1(n,j)| S_2(j,k) r^j`, where `x^{(n)}`
/// is the rising factorial. For `r > 0` every term is positive; for `r < 0` the
/// signs alternate in `j` and the sum is formed exactly while the tables allow.
fn zt_neg_binomial(r: f64, p: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    // a = (1-p)^{-r} - 1, negative for r < 0; P(S_k = n) >= 0 forces inner_k ~ a^k in sign
    let l_a = (-r * (-p).ln_1p()).exp_m1().abs().ln();
    let base = nf * p.ln() - ln_factorial(n);
    let inner = if r > 0.0 {
        positive_inner(r, n)
    } else if n <= EXACT_LIMIT {
        exact_inner(r, n)
    } else {
        signed_inner(r, n)?
    };
    let terms: Vec<f64> = (1..=n)
        .map(|k| base + ln_factorial(k) + inner[k] - k as f64 * l_a)
        .collect();
    Ok(log_sum_exp(&terms))
}

/// `ln Σ_j |S_1(n,j)| S_2(j,k) r^j` for `k = 0..=n`, `r > 0`.
fn positive_inner(r: f64, n: usize) -> Vec<f64> {
    let s1 = log_stirling1_abs_row(n);
    let s2 = log_stirling2_triangle(n);
    let lr = r.ln();
    (0..=n)
        .map(|k| {
            let terms: Vec<f64> = (k.max(1)..=n).map(|j| s1[j] + s2[j][k] + j as f64 * lr).collect();
            log_sum_exp(&terms)
        })
        .collect()
}

fn exact_inner(r: f64, n: usize) -> Vec<f64> {
    let r = BigRational::from_float(r).expect("finite r");
    let (num, den) = (r.numer().clone(), r.denom().clone());
    let s1 = &stirling1_table()[n];
    let s2 = stirling2_table();
    // common denominator den^n: term_j = c_j num^j den^(n-j)
    let num_pows: Vec<BigInt> = std::iter::successors(Some(BigInt::one()), |x| Some(x * &num))
        .take(n + 1)
        .collect();
    let den_pows: Vec<BigInt> = std::iter::successors(Some(BigInt::one()), |x| Some(x * &den))
        .take(n + 1)
        .collect();
    let scaled: Vec<BigInt> = (0..=n)
        .map(|j| BigInt::from(s1[j].clone()) * &num_pows[j] * &den_pows[n - j])
        .collect();
    let ln_den = ln_bigint(&den_pows[n]).0;
    (0..=n)
        .map(|k| {
            let mut acc = BigInt::zero();
            for j in k.max(1)..=n {
                acc += &scaled[j] * BigInt::from(s2[j][k].clone());
            }
            ln_bigint(&acc.abs()).0 - ln_den
        })
        .collect()
}

fn signed_inner(r: f64, n: usize) -> Result<Vec<f64>> {
    let s1 = log_stirling1_abs_row(n);
    let s2 = log_stirling2_triangle(n);
    let lr = r.abs().ln();
    (0..=n)
        .map(|k| {
            if k == 0 {
                return Ok(f64::NEG_INFINITY);
            }
            let terms: Vec<(f64, bool)> = (k..=n)
                .map(|j| (s1[j] + s2[j][k] + j as f64 * lr, j % 2 == 1))
                .collect();
            let sum = signed_log_sum(&terms);
            let rel_err = f64::EPSILON * n as f64 * sum.cancellation.exp();
            if rel_err > PRECISION_FLOOR {
                return Err(Error::Precision(format!(
                    "negative-binomial normalizer at n = {n}, k = {k} lost {:.0} digits to cancellation; \
                     use the convolution recursion instead",
                    sum.cancellation / std::f64::consts::LN_10
                )));
            }
            Ok(sum.ln_abs)
        })
        .collect()
}

/// Convolution oracle: `c[k][m] = Σ_s μ_s c[k-1][m-s]`, `P(E_n) = Σ_k c[k][n]`, in log space.
pub fn log_prob_en_dp(mu: &MuFamily, n: usize) -> f64 {
    log_prob_en_dp_table(mu, n)[n - 1]
}

/// `ln P(E_m)` for `m = 1..=n`, sharing one convolution table.
pub fn log_prob_en_dp_table(mu: &MuFamily, n: usize) -> Vec<f64> {
    assert!(n >= 1, "n must be positive");
    let lmu: Vec<f64> = (0..=n).map(|s| if s == 0 { f64::NEG_INFINITY } else { mu.log_pmf(s) }).collect();
    let smax = mu.support_max().unwrap_or(n).min(n);
    let mut total = vec![f64::NEG_INFINITY; n + 1];
    // prev[m] = ln P(S_{k-1} = m)
    let mut prev = vec![f64::NEG_INFINITY; n + 1];
    prev[0] = 0.0;
    let mut buf = Vec::with_capacity(smax);
    for k in 1..=n {
        let mut cur = vec![f64::NEG_INFINITY; n + 1];
        for m in k..=n {
            buf.clear();
            for s in 1..=smax.min(m) {
                let left = prev[m - s];
                if left > f64::NEG_INFINITY {
                    buf.push(lmu[s] + left);
                }
            }
            cur[m] = log_sum_exp(&buf);
        }
        for m in 1..=n {
            total[m] = crate::numeric::log_add_exp(total[m], cur[m]);
        }
        prev = cur;
    }
    total.remove(0);
    total
}

/// Closed form where it is numerically safe, the convolution oracle otherwise.
pub fn log_prob_en(mu: &MuFamily, n: usize) -> f64 {
    match log_prob_en_closed(mu, n) {
        Ok(v) if v.is_finite() => v,
        _ => log_prob_en_dp(mu, n),
    }
}
