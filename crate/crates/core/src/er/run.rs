use super::dataset::ErDataset;
use super::point::{dahl_point_estimate, fnr_fdr, LinkageErrors};
use super::prior::{mu_param_names, mu_params, Hyperpriors, PartitionPrior};
use super::sampler::{Initialization, Kernel, McmcState, PairProposal};
use crate::error::{Error, Result};
use crate::numeric::fmt_real;
use crate::partition::SetPartition;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Settings for one MCMC run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McmcConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    /// Replace the plain Gibbs sweep over `z` with chaperones moves.
    pub use_chaperones: bool,
    /// Chaperones moves per iteration; `n` when absent.
    pub chaperone_moves: Option<usize>,
    pub pair_proposal: PairProposal,
    pub init: Initialization,
    /// Starting `β`, one per field; the prior mean when absent.
    pub beta_init: Option<Vec<f64>>,
    pub update_beta: bool,
    /// Keep every retained `z` (needed for the point estimate).
    pub keep_partitions: bool,
    /// Check the state invariants after every iteration.
    pub check_invariants: bool,
    pub hyper: Hyperpriors,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            iterations: 6000,
            burn_in: 2000,
            thin: 1,
            seed: 1,
            use_chaperones: false,
            chaperone_moves: None,
            pair_proposal: PairProposal::Uniform,
            init: Initialization::ExactDuplicates,
            beta_init: None,
            update_beta: true,
            keep_partitions: true,
            check_invariants: cfg!(debug_assertions),
            hyper: Hyperpriors::default(),
        }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::Config("thin must be at least 1".into()));
        }
        if self.iterations <= self.burn_in {
            return Err(Error::Config(format!(
                "iterations ({}) must exceed burn_in ({}): no posterior samples",
                self.iterations, self.burn_in
            )));
        }
        Ok(())
    }

    /// Number of retained samples.
    pub fn n_samples(&self) -> usize {
        (self.iterations - self.burn_in).div_ceil(self.thin)
    }
}

/// One retained draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub iter: usize,
    pub k_plus: usize,
    /// `m_s` at index `s - 1`.
    pub size_counts: Vec<usize>,
    pub beta: Vec<f64>,
    pub theta_mu: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ErResult {
    pub config: McmcConfig,
    pub chains: usize,
    pub theta_mu_names: Vec<String>,
    pub samples: Vec<Sample>,
    /// Retained labels, aligned with `samples` when kept.
    pub partitions: Vec<Vec<usize>>,
}

fn prior_mean_beta(hyper: &Hyperpriors, fields: usize) -> Vec<f64> {
    let (a, b) = hyper.beta;
    vec![(a / (a + b)).clamp(1e-6, 0.5); fields]
}

/// Runs one chain on RNG stream `chain` of the configured seed.
pub fn run_chain(data: &ErDataset, prior: &PartitionPrior, config: &McmcConfig, chain: u64) -> Result<ErResult> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(chain);
    let beta = config
        .beta_init
        .clone()
        .unwrap_or_else(|| prior_mean_beta(&config.hyper, data.n_fields()));
    let mut state = McmcState::new(data, prior, beta, config.init, rng)?;
    let update_mu = matches!(prior, PartitionPrior::Esc { fixed: false, .. });
    let mut kernel = Kernel::new(data, prior, &state);
    if config.use_chaperones {
        kernel = kernel.with_pair_proposal(config.pair_proposal);
    }
    let moves = config.chaperone_moves.unwrap_or(data.n());
    let names = state
        .mu()
        .map(|mu| mu_param_names(mu).iter().map(|s| s.to_string()).collect())
        .unwrap_or_default();
    let mut samples = Vec::with_capacity(config.n_samples());
    let mut partitions = Vec::new();
    for iter in 0..config.iterations {
        if config.use_chaperones {
            for _ in 0..moves {
                kernel.chaperones_move(&mut state);
            }
        } else {
            kernel.sweep_z(&mut state);
        }
        kernel.update_y_w(&mut state);
        if update_mu {
            kernel.update_theta_mu(&mut state, &config.hyper)?;
        }
        if config.update_beta {
            kernel.update_beta(&mut state, config.hyper.beta)?;
        }
        if config.check_invariants {
            state.check_invariants(data)?;
        }
        if iter >= config.burn_in && (iter - config.burn_in).is_multiple_of(config.thin) {
            samples.push(Sample {
                iter: iter + 1,
                k_plus: state.n_clusters(),
                size_counts: state.size_counts(),
                beta: state.beta().to_vec(),
                theta_mu: state.mu().map(mu_params).unwrap_or_default(),
            });
            if config.keep_partitions {
                partitions.push(state.partition().labels().to_vec());
            }
        }
    }
    Ok(ErResult {
        config: config.clone(),
        chains: 1,
        theta_mu_names: names,
        samples,
        partitions,
    })
}

/// Single chain on stream 0.
pub fn run_mcmc(data: &ErDataset, prior: &PartitionPrior, config: &McmcConfig) -> Result<ErResult> {
    run_chain(data, prior, config, 0)
}

/// Independent chains in parallel, one RNG stream each, merged in chain order.
pub fn run_chains(data: &ErDataset, prior: &PartitionPrior, config: &McmcConfig, chains: usize) -> Result<ErResult> {
    if chains == 0 {
        return Err(Error::Config("need at least one chain".into()));
    }
    let results: Vec<ErResult> = (0..chains as u64)
        .into_par_iter()
        .map(|c| run_chain(data, prior, config, c))
        .collect::<Result<_>>()?;
    Ok(ErResult::merge(results))
}

/// Mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
}

impl Moments {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.into_iter().collect();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = if v.len() > 1 {
            v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self { mean, sd: var.sqrt() }
    }
}

/// 2.5%, 50% and 97.5% posterior quantiles of `m_s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeQuantiles {
    pub size: usize,
    pub mean: f64,
    pub q025: f64,
    pub q50: f64,
    pub q975: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErSummary {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub chains: usize,
    pub samples: usize,
    pub k_plus: Moments,
    pub size_counts: Vec<SizeQuantiles>,
    pub beta: Vec<Moments>,
    pub theta_mu: Vec<(String, Moments)>,
    pub point_estimate_k: Option<usize>,
    pub point_estimate: Option<Vec<usize>>,
    pub metrics: Option<LinkageErrors>,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl ErResult {
    pub fn merge(mut parts: Vec<ErResult>) -> ErResult {
        let mut out = parts.remove(0);
        for p in parts {
            out.chains += p.chains;
            out.samples.extend(p.samples);
            out.partitions.extend(p.partitions);
        }
        out
    }

    pub fn k_plus(&self) -> Moments {
        Moments::of(self.samples.iter().map(|s| s.k_plus as f64))
    }

    pub fn point_estimate(&self) -> Result<SetPartition> {
        if self.partitions.is_empty() {
            return Err(Error::Config("partitions were not kept".into()));
        }
        dahl_point_estimate(&self.partitions)
    }

    pub fn summary(&self, truth: Option<&SetPartition>) -> Result<ErSummary> {
        let max_size = self.samples.iter().map(|s| s.size_counts.len()).max().unwrap_or(0);
        let size_counts = (1..=max_size)
            .map(|size| {
                let mut v: Vec<f64> = self
                    .samples
                    .iter()
                    .map(|s| s.size_counts.get(size - 1).copied().unwrap_or(0) as f64)
                    .collect();
                v.sort_by(f64::total_cmp);
                SizeQuantiles {
                    size,
                    mean: v.iter().sum::<f64>() / v.len() as f64,
                    q025: quantile(&v, 0.025),
                    q50: quantile(&v, 0.5),
                    q975: quantile(&v, 0.975),
                }
            })
            .collect();
        let fields = self.samples.first().map_or(0, |s| s.beta.len());
        let beta = (0..fields).map(|f| Moments::of(self.samples.iter().map(|s| s.beta[f]))).collect();
        let theta_mu = self
            .theta_mu_names
            .iter()
            .enumerate()
            .map(|(j, name)| (name.clone(), Moments::of(self.samples.iter().map(|s| s.theta_mu[j]))))
            .collect();
        let estimate = if self.partitions.is_empty() { None } else { Some(self.point_estimate()?) };
        let metrics = match (&estimate, truth) {
            (Some(e), Some(t)) => Some(fnr_fdr(e, t)?),
            _ => None,
        };
        Ok(ErSummary {
            iterations: self.config.iterations,
            burn_in: self.config.burn_in,
            thin: self.config.thin,
            chains: self.chains,
            samples: self.samples.len(),
            k_plus: self.k_plus(),
            size_counts,
            beta,
            theta_mu,
            point_estimate_k: estimate.as_ref().map(|e| e.n_blocks()),
            point_estimate: estimate.map(|e| e.labels().iter().map(|l| l + 1).collect()),
            metrics,
        })
    }

    /// `iter,Kplus,beta_1..beta_L,<θ_μ names>`, one row per retained sample.
    pub fn write_trace_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let fields = self.samples.first().map_or(0, |s| s.beta.len());
        let mut header = vec!["iter".to_string(), "Kplus".to_string()];
        header.extend((1..=fields).map(|f| format!("beta_{f}")));
        header.extend(self.theta_mu_names.iter().cloned());
        writeln!(out, "{}", header.join(","))?;
        for s in &self.samples {
            let mut row = vec![s.iter.to_string(), s.k_plus.to_string()];
            row.extend(s.beta.iter().map(|&b| fmt_real(b)));
            row.extend(s.theta_mu.iter().map(|&t| fmt_real(t)));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}
