//! Mixtures over the number of components `K`: the balance-neutral family and
//! mixtures of finite Dirichlet-multinomial mixtures.

use crate::error::{domain, Result};
use crate::numeric::{ln_factorial, ln_falling, log_sum_exp};
use serde::{Deserialize, Serialize};

/// Default relative truncation tolerance for the `K` series.
pub const SERIES_EPS: f64 = 1e-15;

const MAX_SERIES_TERMS: usize = 1_000_000;

/// A probability mass function `q(K)` on `K ∈ {1, 2, ..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MixingDistribution {
    /// All mass at one `K`.
    Point { k: usize },
    /// `K = 1 + Poisson(λ)`.
    ShiftedPoisson { lambda: f64 },
    /// Explicit `q(1), q(2), ..`; zero past the end.
    Pmf { q: Vec<f64> },
}

impl MixingDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            MixingDistribution::Point { k } if *k == 0 => domain("point mass needs K >= 1"),
            MixingDistribution::ShiftedPoisson { lambda } if !(*lambda > 0.0) => {
                domain("shifted Poisson needs λ > 0")
            }
            MixingDistribution::Pmf { q } => {
                if q.iter().any(|&v| !(v >= 0.0)) {
                    return domain("pmf entries must be nonnegative");
                }
                let total: f64 = q.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return domain(format!("pmf sums to {total}, not 1"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn log_q(&self, big_k: usize) -> f64 {
        if big_k == 0 {
            return f64::NEG_INFINITY;
        }
        match self {
            MixingDistribution::Point { k } => {
                if big_k == *k {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            MixingDistribution::ShiftedPoisson { lambda } => {
                let j = big_k - 1;
                j as f64 * lambda.ln() - lambda - ln_factorial(j)
            }
            MixingDistribution::Pmf { q } => q.get(big_k - 1).map_or(f64::NEG_INFINITY, |v| v.ln()),
        }
    }

    /// Largest `K` with positive mass, if finite.
    pub fn support_max(&self) -> Option<usize> {
        match self {
            MixingDistribution::Point { k } => Some(*k),
            MixingDistribution::ShiftedPoisson { .. } => None,
            MixingDistribution::Pmf { q } => q.iter().rposition(|&v| v > 0.0).map(|i| i + 1),
        }
    }

    /// A `K` past which `q` is nonincreasing.
    fn mode(&self) -> usize {
        match self {
            MixingDistribution::Point { k } => *k,
            MixingDistribution::ShiftedPoisson { lambda } => 1 + lambda.floor() as usize,
            MixingDistribution::Pmf { q } => q.len(),
        }
    }

    /// Parses `point:K`, `shifted-poisson:λ`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, arg) = spec
            .split_once(':')
            .ok_or_else(|| crate::Error::Domain(format!("mixing spec '{spec}' needs name:arg")))?;
        let q = match name {
            "point" => MixingDistribution::Point {
                k: arg
                    .parse()
                    .map_err(|_| crate::Error::Domain(format!("bad K in '{spec}'")))?,
            },
            "shifted-poisson" => MixingDistribution::ShiftedPoisson {
                lambda: arg
                    .parse()
                    .map_err(|_| crate::Error::Domain(format!("bad λ in '{spec}'")))?,
            },
            _ => return domain(format!("unknown mixing distribution '{name}'")),
        };
        q.validate()?;
        Ok(q)
    }
}

/// Sums `exp(log_q(K) + term(K))` over `K >= k_min`, truncating once the
/// terms are decreasing past the mode of `q` and below `eps` times the running sum.
fn truncated_series(
    q: &MixingDistribution,
    k_min: usize,
    eps: f64,
    term: impl Fn(usize) -> f64,
) -> f64 {
    let upper = q.support_max();
    let mode = q.mode().max(k_min);
    let ln_eps = eps.ln();
    let mut terms = Vec::new();
    let mut running = f64::NEG_INFINITY;
    let mut prev = f64::NEG_INFINITY;
    let mut big_k = k_min;
    while terms.len() < MAX_SERIES_TERMS {
        if let Some(u) = upper {
            if big_k > u {
                break;
            }
        }
        let t = q.log_q(big_k) + term(big_k);
        terms.push(t);
        running = crate::numeric::log_add_exp(running, t);
        if big_k > mode && t < prev && t < running + ln_eps {
            break;
        }
        prev = t;
        big_k += 1;
    }
    log_sum_exp(&terms)
}

/// `log V_{n,k}(q) = log Σ_{K>=k} q(K) K(K-1)..(K-k+1) / K^n`.
pub fn neutral_log_v(q: &MixingDistribution, n: usize, k: usize, eps: f64) -> Result<f64> {
    if k == 0 || k > n {
        return domain(format!("need 1 <= k <= n, got n={n}, k={k}"));
    }
    Ok(truncated_series(q, k, eps, |big_k| {
        ln_falling(big_k, k) - n as f64 * (big_k as f64).ln()
    }))
}

/// `log V_{n,k}` of a mixture over `K` of Dirichlet-multinomial partitions with
/// symmetric weight `γ` (W_s = Γ(s+γ)/Γ(1+γ)).
pub fn mfm_log_v(q: &MixingDistribution, gamma: f64, n: usize, k: usize, eps: f64) -> Result<f64> {
    if k == 0 || k > n {
        return domain(format!("need 1 <= k <= n, got n={n}, k={k}"));
    }
    Ok(truncated_series(q, k, eps, |big_k| {
        crate::gibbs::dirichlet_multinomial_log_v(big_k, gamma, n, k)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_values() {
        let q = MixingDistribution::Point { k: 2 };
        let half = 0.5f64.ln();
        assert!((neutral_log_v(&q, 2, 2, SERIES_EPS).unwrap() - half).abs() < 1e-15);
        assert!((neutral_log_v(&q, 2, 1, SERIES_EPS).unwrap() - half).abs() < 1e-15);
        assert_eq!(neutral_log_v(&q, 3, 3, SERIES_EPS).unwrap(), f64::NEG_INFINITY);
        assert!(neutral_log_v(&q, 2, 3, SERIES_EPS).is_err());
    }

    #[test]
    fn shifted_poisson_series_matches_long_direct_sum() {
        let q = MixingDistribution::ShiftedPoisson { lambda: 3.0 };
        for k in 1..=10 {
            let got = neutral_log_v(&q, 10, k, SERIES_EPS).unwrap();
            // direct sum over K = k..400 in linear space with scaled terms
            let terms: Vec<f64> = (k..400)
                .map(|bk| q.log_q(bk) + ln_falling(bk, k) - 10.0 * (bk as f64).ln())
                .collect();
            let want = log_sum_exp(&terms);
            assert!((got - want).abs() < 1e-13, "k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn parse_specs() {
        assert_eq!(
            MixingDistribution::parse("shifted-poisson:3").unwrap(),
            MixingDistribution::ShiftedPoisson { lambda: 3.0 }
        );
        assert_eq!(
            MixingDistribution::parse("point:4").unwrap(),
            MixingDistribution::Point { k: 4 }
        );
        assert!(MixingDistribution::parse("shifted-poisson:-1").is_err());
        assert!(MixingDistribution::parse("dirac").is_err());
    }
}
