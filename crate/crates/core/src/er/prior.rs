use super::slice::slice_sample;
use crate::error::{domain, Error, Result};
use crate::esc::{ln_one_minus_pow, MuFamily};
use crate::gibbs::GibbsModel;
use crate::numeric::{ln_beta, ln_rising, normalize_log_weights};
use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

/// Hyperpriors for `θ_μ` and the distortion probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyperpriors {
    /// `λ ~ Gamma(shape, rate)`.
    pub lambda: (f64, f64),
    /// Negative-binomial `r ~ Gamma(shape, rate)`.
    pub nb_r: (f64, f64),
    /// Negative-binomial `p ~ Beta`.
    pub nb_p: (f64, f64),
    /// Zero-truncated binomial `p ~ Beta`.
    pub ztb_p: (f64, f64),
    /// Logarithmic `p ~ Beta`.
    pub log_p: (f64, f64),
    /// Geometric `p ~ Beta`.
    pub geom_p: (f64, f64),
    /// `β_ℓ ~ Beta`, shared by every field.
    pub beta: (f64, f64),
    /// Largest shifted-binomial `N` considered by its discrete update.
    pub sbinom_n_max: usize,
}

impl Default for Hyperpriors {
    fn default() -> Self {
        Self {
            lambda: (1.0, 1.0),
            nb_r: (1.0, 1.0),
            nb_p: (2.0, 2.0),
            ztb_p: (0.5, 0.5),
            log_p: (1.0, 1.0),
            geom_p: (1.0, 1.0),
            beta: beta_from_mean_sd(0.005, 0.01),
            sbinom_n_max: 10_000,
        }
    }
}

/// Beta shape parameters with the given mean and standard deviation.
pub fn beta_from_mean_sd(mean: f64, sd: f64) -> (f64, f64) {
    let total = mean * (1.0 - mean) / (sd * sd) - 1.0;
    (mean * total, (1.0 - mean) * total)
}

/// Partition prior used by the entity-resolution sampler.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionPrior {
    /// ESC prior whose `μ` parameters are updated unless `fixed`.
    Esc { mu: MuFamily, fixed: bool },
    /// Any Gibbs partition with fixed parameters.
    Gibbs(GibbsModel),
}

/// Log prior reallocation weights for the current `θ_μ`: `existing[s]` for
/// joining a cluster that has `s` other members, `new_cluster[k]` for opening
/// a cluster next to `k` others.
#[derive(Debug, Clone)]
pub(crate) struct PriorWeights {
    existing: Vec<f64>,
    new_cluster: Vec<f64>,
}

impl PriorWeights {
    pub(crate) fn build(prior: &PartitionPrior, mu: Option<&MuFamily>, n: usize) -> Self {
        match (prior, mu) {
            (PartitionPrior::Esc { .. }, Some(mu)) => {
                let l1 = mu.log_pmf(1);
                Self {
                    existing: (0..=n).map(|s| if s == 0 { 0.0 } else { mu.log_w_ratio(s) }).collect(),
                    new_cluster: (0..=n).map(|k| ((k + 1) as f64).ln() + l1).collect(),
                }
            }
            (PartitionPrior::Gibbs(g), _) => Self {
                existing: (0..=n).map(|s| if s == 0 { 0.0 } else { g.w().log_ratio(s) }).collect(),
                new_cluster: (0..=n)
                    .map(|k| {
                        if k == 0 {
                            0.0
                        } else if k >= n {
                            f64::NEG_INFINITY
                        } else {
                            g.log_v(n, k + 1) - g.log_v(n, k)
                        }
                    })
                    .collect(),
            },
            (PartitionPrior::Esc { .. }, None) => unreachable!("ESC prior without μ"),
        }
    }

    #[inline]
    pub(crate) fn existing(&self, others: usize) -> f64 {
        self.existing[others]
    }

    #[inline]
    pub(crate) fn new_cluster(&self, k_others: usize) -> f64 {
        self.new_cluster[k_others]
    }
}

/// Parameters of `μ` as a flat vector, in declaration order.
pub fn mu_params(mu: &MuFamily) -> Vec<f64> {
    match *mu {
        MuFamily::ShiftedBinomial { trials, p } | MuFamily::ZtBinomial { trials, p } => vec![trials as f64, p],
        MuFamily::ZtPoisson { lambda } => vec![lambda],
        MuFamily::ZtNegBinomial { r, p } => vec![r, p],
        MuFamily::Logarithmic { p } | MuFamily::Geometric { p } => vec![p],
    }
}

pub fn mu_param_names(mu: &MuFamily) -> &'static [&'static str] {
    match mu {
        MuFamily::ShiftedBinomial { .. } | MuFamily::ZtBinomial { .. } => &["N", "p"],
        MuFamily::ZtPoisson { .. } => &["lambda"],
        MuFamily::ZtNegBinomial { .. } => &["r", "p"],
        MuFamily::Logarithmic { .. } | MuFamily::Geometric { .. } => &["p"],
    }
}

const SLICE_WIDTH: f64 = 1.0;
const SLICE_STEPS: usize = 50;

fn logit(p: f64) -> f64 {
    p.ln() - (-p).ln_1p()
}

fn expit(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

/// `ln p + ln(1-p)` at `p = expit(u)`: the Jacobian of the logit transform.
fn logit_jacobian(u: f64) -> f64 {
    -(u.abs()) - 2.0 * (-u.abs()).exp().ln_1p()
}

fn log_beta_density(p: f64, (a, b): (f64, f64)) -> f64 {
    (a - 1.0) * p.ln() + (b - 1.0) * (-p).ln_1p()
}

/// Draws `θ_μ` given the cluster sizes. The targets drop `P(E_n | μ)`, as in
/// the reference samplers for these priors.
pub fn update_theta_mu<R: Rng + ?Sized>(
    mu: &MuFamily,
    sizes: &[usize],
    hyper: &Hyperpriors,
    rng: &mut R,
) -> Result<MuFamily> {
    if sizes.is_empty() {
        return domain("no clusters");
    }
    let n: usize = sizes.iter().sum();
    let k = sizes.len();
    let (nf, kf) = (n as f64, k as f64);
    let next = match *mu {
        MuFamily::ShiftedBinomial { .. } => {
            let (trials, p) = sample_shifted_binomial(sizes, hyper.sbinom_n_max, rng)?;
            MuFamily::ShiftedBinomial { trials, p }
        }
        MuFamily::ZtBinomial { trials, p } => {
            if let Some(&big) = sizes.iter().max() {
                if big > trials {
                    return Err(Error::Sampler(format!("cluster of size {big} exceeds N = {trials}")));
                }
            }
            let nt = trials as f64;
            let target = |u: f64| {
                let p = expit(u);
                let (l_norm, _) = ln_one_minus_pow(p, nt);
                log_beta_density(p, hyper.ztb_p) + nf * p.ln() + (nt * kf - nf) * (-p).ln_1p() - kf * l_norm
                    + logit_jacobian(u)
            };
            let u = slice_sample(logit(p), target, SLICE_WIDTH, SLICE_STEPS, rng);
            MuFamily::ZtBinomial { trials, p: expit(u) }
        }
        MuFamily::ZtPoisson { lambda } => {
            let (a, b) = hyper.lambda;
            let target = |u: f64| {
                let l = u.exp();
                (a - 1.0) * u - b * l + nf * u - kf * l.exp_m1().ln() + u
            };
            MuFamily::ZtPoisson { lambda: slice_sample(lambda.ln(), target, SLICE_WIDTH, SLICE_STEPS, rng).exp() }
        }
        MuFamily::ZtNegBinomial { r, p } => {
            let (ra, rb) = hyper.nb_r;
            let r_target = |u: f64| {
                let r = u.exp();
                (ra - 1.0) * u - rb * r + nb_size_term(r, p, sizes, kf) + u
            };
            let r = slice_sample(r.max(1e-300).ln(), r_target, SLICE_WIDTH, SLICE_STEPS, rng).exp();
            let p_target = |u: f64| {
                let p = expit(u);
                log_beta_density(p, hyper.nb_p) + nf * p.ln() + nb_size_term(r, p, sizes, kf) + logit_jacobian(u)
            };
            let p = expit(slice_sample(logit(p), p_target, SLICE_WIDTH, SLICE_STEPS, rng));
            MuFamily::ZtNegBinomial { r, p }
        }
        MuFamily::Logarithmic { p } => {
            let target = |u: f64| {
                let p = expit(u);
                log_beta_density(p, hyper.log_p) + nf * p.ln() - kf * (-(-p).ln_1p()).ln() + logit_jacobian(u)
            };
            MuFamily::Logarithmic { p: expit(slice_sample(logit(p), target, SLICE_WIDTH, SLICE_STEPS, rng)) }
        }
        MuFamily::Geometric { .. } => {
            // Π_j p (1-p)^{n_j - 1} is conjugate to the Beta prior
            let (a, b) = hyper.geom_p;
            let dist = Beta::new(a + kf, b + nf - kf).map_err(|e| Error::Sampler(e.to_string()))?;
            MuFamily::Geometric { p: dist.sample(rng).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON) }
        }
    };
    Ok(next)
}

/// `k [r ln(1-p) - ln(1-(1-p)^r)] + Σ_j ln r^{(n_j)}` (rising factorial).
fn nb_size_term(r: f64, p: f64, sizes: &[usize], kf: f64) -> f64 {
    let q = (-p).ln_1p();
    let l_norm = (-(r * q).exp_m1()).ln();
    kf * (r * q - l_norm) + sizes.iter().map(|&s| ln_rising(r, s)).sum::<f64>()
}

/// Exact draw of `N` from its marginal posterior on `max(max n_j - 1, 1) ..= n_max`,
/// then `p | N ~ Beta(n - k + 1/2, Nk - n + k + 1/2)`.
pub fn sample_shifted_binomial<R: Rng + ?Sized>(sizes: &[usize], n_max: usize, rng: &mut R) -> Result<(usize, f64)> {
    let n: usize = sizes.iter().sum();
    let k = sizes.len();
    let biggest = sizes.iter().copied().max().unwrap_or(1);
    let lo = biggest.saturating_sub(1).max(1);
    if lo > n_max {
        return Err(Error::Sampler(format!(
            "shifted-binomial N must be at least {lo}, above the cap {n_max}"
        )));
    }
    let log_w = shifted_binomial_log_weights(sizes, lo, n_max);
    let mut probs = log_w;
    normalize_log_weights(&mut probs);
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut idx = probs.len() - 1;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            idx = i;
            break;
        }
    }
    let trials = lo + idx;
    let a = (n - k) as f64 + 0.5;
    let b = (trials * k + k) as f64 - n as f64 + 0.5;
    let beta = Beta::new(a, b).map_err(|e| Error::Sampler(e.to_string()))?;
    let p = beta.sample(rng).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
    Ok((trials, p))
}

/// `ln B(n-k+1/2, Nk-n+k+1/2) - ln N + Σ_j ln(N! / (N-n_j+1)!)` for `N = lo..=hi`,
/// up to an additive constant.
pub(crate) fn shifted_binomial_log_weights(sizes: &[usize], lo: usize, hi: usize) -> Vec<f64> {
    let n: usize = sizes.iter().sum();
    let k = sizes.len();
    let mut hist: Vec<(usize, usize)> = Vec::new();
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    for s in sorted {
        match hist.last_mut() {
            Some((v, c)) if *v == s => *c += 1,
            _ => hist.push((s, 1)),
        }
    }
    // running Σ_j ln(N (N-1) .. (N-n_j+2)) = Σ_j ln falling(N, n_j - 1)
    let mut falling: f64 = hist
        .iter()
        .map(|&(s, c)| c as f64 * crate::numeric::ln_falling(lo, s - 1))
        .sum();
    let a = (n - k) as f64 + 0.5;
    let mut out = Vec::with_capacity(hi - lo + 1);
    for big_n in lo..=hi {
        if big_n > lo {
            // falling(N, m) / falling(N-1, m) = N / (N - m)
            let nf = big_n as f64;
            falling += hist
                .iter()
                .map(|&(s, c)| c as f64 * (nf.ln() - (nf - (s - 1) as f64).ln()))
                .sum::<f64>();
        }
        let b = (big_n * k + k) as f64 - n as f64 + 0.5;
        out.push(ln_beta(a, b) - (big_n as f64).ln() + falling);
    }
    out
}
