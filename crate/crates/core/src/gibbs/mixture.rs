use super::balance::{classify_balance, Balance, BalanceClass};
use super::model::GibbsModel;
use super::Eppf;
use crate::error::{domain, Result};
use crate::numeric::log_sum_exp;
use crate::partition::IntegerPartition;

/// A finite mixture of Gibbs partitions, `p = Σ ν_i p_i`. A continuous mixing
/// measure enters through its quadrature nodes and weights.
#[derive(Debug, Clone)]
pub struct GibbsMixture {
    components: Vec<GibbsModel>,
    log_weights: Vec<f64>,
}

impl GibbsMixture {
    pub fn new(components: Vec<(GibbsModel, f64)>) -> Result<Self> {
        if components.is_empty() {
            return domain("a mixture needs at least one component");
        }
        if components.iter().any(|(_, w)| !(*w >= 0.0) || !w.is_finite()) {
            return domain("mixture weights must be finite and nonnegative");
        }
        let total: f64 = components.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return domain(format!("mixture weights sum to {total}, not 1"));
        }
        let (components, log_weights) = components.into_iter().map(|(m, w)| (m, w.ln())).unzip();
        Ok(Self {
            components,
            log_weights,
        })
    }

    pub fn components(&self) -> &[GibbsModel] {
        &self.components
    }

    /// Sufficient-condition verdict: averse when every component `W` is
    /// log-convex, seeking when every one is log-concave. Anything else is
    /// reported as `Neither`, which only means the check is inconclusive.
    pub fn classify(&self, s_max: usize) -> Result<Balance> {
        let classes = self
            .components
            .iter()
            .map(|m| classify_balance(m.w(), s_max))
            .collect::<Result<Vec<BalanceClass>>>()?;
        let averse = classes.iter().all(|c| c.averse_failure.is_none());
        let seeking = classes.iter().all(|c| c.seeking_failure.is_none());
        Ok(match (averse, seeking) {
            (true, true) => Balance::Neutral,
            (true, false) => Balance::Averse,
            (false, true) => Balance::Seeking,
            (false, false) => Balance::Neither,
        })
    }
}

impl Eppf for GibbsMixture {
    fn log_eppf(&self, shape: &IntegerPartition) -> f64 {
        mixture_log_eppf(&self.components, &self.log_weights, shape)
    }
}

fn mixture_log_eppf(components: &[GibbsModel], log_weights: &[f64], shape: &IntegerPartition) -> f64 {
    let terms: Vec<f64> = components
        .iter()
        .zip(log_weights)
        .map(|(m, lw)| lw + m.log_eppf(shape))
        .collect();
    log_sum_exp(&terms)
}
