use super::mu::{MuFamily, RawPmf};
use super::normalizer::log_prob_en;
use crate::error::Result;
use crate::gibbs::{classify_balance, BalanceClass, Eppf, GibbsModel, WSequence};
use crate::numeric::ln_factorial;
use crate::partition::IntegerPartition;

/// ESC partition model with fixed `μ`; `ln P(E_m)` is cached for `m <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct EscModel {
    mu: MuFamily,
    log_norm: Vec<f64>,
}

impl EscModel {
    pub fn new(mu: MuFamily, n_max: usize) -> Result<Self> {
        mu.validate()?;
        let log_norm = (1..=n_max).map(|m| log_prob_en(&mu, m)).collect();
        Ok(Self { mu, log_norm })
    }

    pub fn mu(&self) -> &MuFamily {
        &self.mu
    }

    pub fn log_prob_en(&self, m: usize) -> f64 {
        match self.log_norm.get(m.wrapping_sub(1)) {
            Some(&v) => v,
            None => log_prob_en(&self.mu, m),
        }
    }

    /// Gibbs form with `V_{n,k} = μ_1^k k! / (P(E_n) n!)` and `W_s = s! μ_s / μ_1`.
    pub fn to_gibbs(&self, n_max: usize) -> GibbsModel {
        GibbsModel::from_esc(self, n_max)
    }
}

impl Eppf for EscModel {
    fn log_eppf(&self, shape: &IntegerPartition) -> f64 {
        let mut acc = ln_factorial(shape.k()) - ln_factorial(shape.n()) - self.log_prob_en(shape.n());
        for &s in shape.parts() {
            let lm = self.mu.log_pmf(s);
            if lm == f64::NEG_INFINITY {
                return lm;
            }
            acc += ln_factorial(s) + lm;
        }
        acc
    }
}

/// Balance class of the ESC model driven by `mu`, through `W_s = s! μ_s / μ_1`.
pub fn classify_mu(mu: &MuFamily, s_max: usize) -> Result<BalanceClass> {
    classify_balance(&WSequence::Esc(mu.clone()), s_max)
}

/// As [`classify_mu`] for a tabulated pmf; a truncated table is classified up to its length.
pub fn classify_raw_pmf(pmf: &RawPmf, s_max: usize) -> Result<BalanceClass> {
    let w = WSequence::table(pmf.log_w_table(), pmf.finite_support)?;
    let horizon = if pmf.finite_support { s_max.max(pmf.mu.len() + 2) } else { s_max };
    classify_balance(&w, horizon)
}
