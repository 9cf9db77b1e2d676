use super::neutral::{mfm_log_v, neutral_log_v, MixingDistribution, SERIES_EPS};
use super::wseq::WSequence;
use super::Eppf;
use crate::error::{domain, Result};
use crate::esc::{EscModel, MuFamily};
use crate::numeric::{ln_factorial, ln_falling};
use crate::partition::IntegerPartition;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// Which closed form backs a [`GibbsModel`].
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Ewens-Pitman with `σ ∈ [0, 1)`, `θ > -σ`.
    TwoParameter { sigma: f64, theta: f64 },
    /// Ewens-Pitman with `σ = -alpha < 0` and `θ = K alpha`.
    DirichletMultinomial { components: usize, alpha: f64 },
    /// Ewens-Pitman limit `σ = -∞`.
    CouponCollector { components: usize },
    /// Balance-neutral mixture over the number of components.
    NeutralMixture(MixingDistribution),
    /// Mixture over `K` of Dirichlet-multinomial partitions with weight `gamma`.
    MfmMixture { q: MixingDistribution, gamma: f64 },
    /// Gibbs form of an ESC model.
    EscDerived(MuFamily),
    /// User-supplied `V` table and `W` sequence.
    Custom,
}

/// A Gibbs partition `p(n_1..n_k) = V_{n,k} Π W_{n_j}`, evaluated in log space.
///
/// Clones share the memo of series-valued `V_{n,k}`.
#[derive(Debug, Clone)]
pub struct GibbsModel {
    family: Family,
    w: WSequence,
    /// `ln P(E_m)` for ESC-derived models, indexed by `m - 1`.
    esc_log_norm: Vec<f64>,
    /// `custom_v[n-1][k-1]`.
    custom_v: Vec<Vec<f64>>,
    memo: Arc<RwLock<HashMap<(usize, usize), f64>>>,
}

impl PartialEq for GibbsModel {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.w == other.w && self.custom_v == other.custom_v
    }
}

pub(crate) fn dirichlet_multinomial_log_v(components: usize, alpha: f64, n: usize, k: usize) -> f64 {
    if k > components {
        return f64::NEG_INFINITY;
    }
    let theta = components as f64 * alpha;
    let num: f64 = (1..k).map(|i| (alpha * (components - i) as f64).ln()).sum();
    let den: f64 = (1..n).map(|i| (theta + i as f64).ln()).sum();
    num - den
}

impl GibbsModel {
    fn with(family: Family, w: WSequence) -> Self {
        Self {
            family,
            w,
            esc_log_norm: Vec::new(),
            custom_v: Vec::new(),
            memo: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    /// Ewens-Pitman two-parameter model. The admissible regimes are
    /// `σ ∈ [0,1), θ > -σ`; `σ < 0, θ = K|σ|` with integer `K`; and
    /// `σ = -∞`, where `theta` carries the integer `K`.
    pub fn two_parameter(sigma: f64, theta: f64) -> Result<Self> {
        if sigma.is_nan() || theta.is_nan() {
            return domain("σ and θ must be numbers");
        }
        if sigma == f64::NEG_INFINITY {
            let k = as_count(theta)
                .ok_or_else(|| crate::Error::Domain(format!("σ = -∞ needs integer K >= 1, got {theta}")))?;
            return Ok(Self::coupon_collector(k));
        }
        if (0.0..1.0).contains(&sigma) {
            if !(theta > -sigma) || !theta.is_finite() {
                return domain(format!("σ = {sigma} needs θ > -σ, got θ = {theta}"));
            }
            return Ok(Self::with(
                Family::TwoParameter { sigma, theta },
                WSequence::Gamma { sigma },
            ));
        }
        if sigma < 0.0 && sigma.is_finite() {
            let k = as_count(theta / -sigma).ok_or_else(|| {
                crate::Error::Domain(format!("σ = {sigma} < 0 needs θ = K|σ| with integer K, got θ = {theta}"))
            })?;
            return Self::dirichlet_multinomial(k, -sigma);
        }
        domain(format!("σ = {sigma} outside [-∞, 1)"))
    }

    /// Chinese restaurant process, `σ = 0`.
    pub fn crp(theta: f64) -> Result<Self> {
        Self::two_parameter(0.0, theta)
    }

    pub fn dirichlet_multinomial(components: usize, alpha: f64) -> Result<Self> {
        if components == 0 || !(alpha > 0.0) || !alpha.is_finite() {
            return domain("Dirichlet-multinomial needs K >= 1 and |σ| > 0");
        }
        Ok(Self::with(
            Family::DirichletMultinomial { components, alpha },
            WSequence::Gamma { sigma: -alpha },
        ))
    }

    pub fn coupon_collector(components: usize) -> Self {
        assert!(components >= 1, "coupon collector needs K >= 1");
        Self::with(Family::CouponCollector { components }, WSequence::Unit)
    }

    pub fn neutral(q: MixingDistribution) -> Result<Self> {
        q.validate()?;
        Ok(Self::with(Family::NeutralMixture(q), WSequence::Unit))
    }

    pub fn mfm(q: MixingDistribution, gamma: f64) -> Result<Self> {
        q.validate()?;
        if !(gamma > 0.0) || !gamma.is_finite() {
            return domain("MFM needs γ > 0");
        }
        Ok(Self::with(
            Family::MfmMixture { q, gamma },
            WSequence::Gamma { sigma: -gamma },
        ))
    }

    /// Gibbs form of an ESC model, with `P(E_m)` cached for `m <= n_max`.
    pub fn from_esc(model: &EscModel, n_max: usize) -> Self {
        let mut g = Self::with(
            Family::EscDerived(model.mu().clone()),
            WSequence::Esc(model.mu().clone()),
        );
        g.esc_log_norm = (1..=n_max).map(|m| model.log_prob_en(m)).collect();
        g
    }

    /// `log_v[n-1][k-1]` for `1 <= k <= n <= log_v.len()`.
    pub fn custom(log_v: Vec<Vec<f64>>, w: WSequence) -> Result<Self> {
        for (i, row) in log_v.iter().enumerate() {
            if row.len() != i + 1 {
                return domain(format!("V row {} must have {} entries", i + 1, i + 1));
            }
        }
        if log_v.first().and_then(|r| r.first()) != Some(&0.0) {
            return domain("custom V needs log V_{1,1} = 0");
        }
        let mut g = Self::with(Family::Custom, w);
        g.custom_v = log_v;
        Ok(g)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn w(&self) -> &WSequence {
        &self.w
    }

    pub fn log_w(&self, s: usize) -> f64 {
        self.w.log_w(s)
    }

    /// `log V_{n,k}`; `-inf` where the model puts no mass on `k` blocks.
    pub fn log_v(&self, n: usize, k: usize) -> f64 {
        assert!(1 <= k && k <= n, "need 1 <= k <= n");
        match &self.family {
            Family::TwoParameter { sigma, theta } => {
                let num: f64 = (1..k).map(|i| (theta + i as f64 * sigma).ln()).sum();
                let den: f64 = (1..n).map(|i| (theta + i as f64).ln()).sum();
                num - den
            }
            Family::DirichletMultinomial { components, alpha } => {
                dirichlet_multinomial_log_v(*components, *alpha, n, k)
            }
            Family::CouponCollector { components } => {
                ln_falling(*components, k) - n as f64 * (*components as f64).ln()
            }
            Family::NeutralMixture(q) => self.memoized(n, k, || {
                neutral_log_v(q, n, k, SERIES_EPS).expect("1 <= k <= n")
            }),
            Family::MfmMixture { q, gamma } => self.memoized(n, k, || {
                mfm_log_v(q, *gamma, n, k, SERIES_EPS).expect("1 <= k <= n")
            }),
            Family::EscDerived(mu) => {
                let ln_norm = match self.esc_log_norm.get(n - 1) {
                    Some(&v) => v,
                    None => self.memoized(n, 0, || crate::esc::log_prob_en(mu, n)),
                };
                k as f64 * mu.log_pmf(1) - ln_norm + ln_factorial(k) - ln_factorial(n)
            }
            Family::Custom => self
                .custom_v
                .get(n - 1)
                .map_or(f64::NAN, |row| row[k - 1]),
        }
    }

    fn memoized(&self, n: usize, k: usize, compute: impl FnOnce() -> f64) -> f64 {
        if let Some(&v) = self.memo.read().expect("memo lock").get(&(n, k)) {
            return v;
        }
        let v = compute();
        self.memo.write().expect("memo lock").insert((n, k), v);
        v
    }

    /// Largest `n` at which the model is defined, if bounded.
    pub fn n_max(&self) -> Option<usize> {
        match self.family {
            Family::Custom => Some(self.custom_v.len()),
            _ => None,
        }
    }
}

impl Eppf for GibbsModel {
    fn log_eppf(&self, shape: &IntegerPartition) -> f64 {
        let lv = self.log_v(shape.n(), shape.k());
        if lv == f64::NEG_INFINITY {
            return lv;
        }
        lv + shape.parts().iter().map(|&s| self.log_w(s)).sum::<f64>()
    }
}

fn as_count(x: f64) -> Option<usize> {
    let r = x.round();
    if r >= 1.0 && (x - r).abs() <= 1e-9 * r.max(1.0) {
        Some(r as usize)
    } else {
        None
    }
}
