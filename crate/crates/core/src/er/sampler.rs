use super::dataset::ErDataset;
use super::prior::{update_theta_mu, Hyperpriors, PartitionPrior, PriorWeights};
use crate::error::{Error, Result};
use crate::esc::MuFamily;
use crate::partition::SetPartition;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedIndex;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

/// `Σ_ℓ ln[(1-β_ℓ) 1(x_ℓ = y_ℓ) + β_ℓ θ_{ℓ,x_ℓ}]`, the record likelihood with the
/// distortion indicators summed out.
pub fn log_record_likelihood(x: &[u32], y: &[u32], beta: &[f64], theta: &[Vec<f64>]) -> f64 {
    x.iter()
        .zip(y)
        .zip(beta.iter().zip(theta))
        .map(|((&xv, &yv), (&b, t))| {
            let distort = b * t[xv as usize];
            let keep = if xv == yv { 1.0 - b } else { 0.0 };
            (keep + distort).ln()
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
struct Cluster {
    members: Vec<usize>,
    y: Vec<u32>,
}

/// Current `(z, y, w, β, θ_μ)` of the entity-resolution sampler and its RNG.
#[derive(Debug, Clone)]
pub struct McmcState {
    labels: Vec<usize>,
    clusters: Vec<Cluster>,
    w: Vec<Vec<bool>>,
    beta: Vec<f64>,
    mu: Option<MuFamily>,
    rng: ChaCha8Rng,
}

/// How the sampler starts its partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Initialization {
    Singletons,
    /// Records with identical fields share a cluster.
    #[default]
    ExactDuplicates,
}

impl McmcState {
    /// Builds a state with `y` rows copied from a member record and `w = 0`.
    pub fn new(
        data: &ErDataset,
        prior: &PartitionPrior,
        beta: Vec<f64>,
        init: Initialization,
        rng: ChaCha8Rng,
    ) -> Result<Self> {
        if beta.len() != data.n_fields() || beta.iter().any(|b| !(*b > 0.0 && *b < 1.0)) {
            return Err(Error::Config("need one β in (0, 1) per field".into()));
        }
        let n = data.n();
        let cap = match prior {
            PartitionPrior::Esc { mu, .. } => mu.support_max(),
            PartitionPrior::Gibbs(g) => g.w().support_max(),
        }
        .unwrap_or(n);
        let mut groups: Vec<Vec<usize>> = match init {
            Initialization::Singletons => (0..n).map(|i| vec![i]).collect(),
            Initialization::ExactDuplicates => {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| data.record(a).cmp(data.record(b)).then(a.cmp(&b)));
                let mut out: Vec<Vec<usize>> = Vec::new();
                for i in order {
                    match out.last_mut() {
                        Some(g) if data.record(g[0]) == data.record(i) && g.len() < cap => g.push(i),
                        _ => out.push(vec![i]),
                    }
                }
                out
            }
        };
        groups.sort_by_key(|g| g[0]);
        let mut labels = vec![0; n];
        let clusters = groups
            .into_iter()
            .enumerate()
            .map(|(c, members)| {
                for &i in &members {
                    labels[i] = c;
                }
                Cluster {
                    y: data.record(members[0]).to_vec(),
                    members,
                }
            })
            .collect();
        let mu = match prior {
            PartitionPrior::Esc { mu, .. } => Some(mu.clone()),
            PartitionPrior::Gibbs(_) => None,
        };
        let state = Self {
            labels,
            clusters,
            w: vec![vec![false; data.n_fields()]; n],
            beta,
            mu,
            rng,
        };
        Ok(state)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn partition(&self) -> SetPartition {
        SetPartition::from_labels(&self.labels)
    }

    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.members.len()).collect()
    }

    /// `m_s`, the number of clusters of size `s`, at index `s - 1`.
    pub fn size_counts(&self) -> Vec<usize> {
        let mut m = Vec::new();
        for c in &self.clusters {
            let s = c.members.len();
            if m.len() < s {
                m.resize(s, 0);
            }
            m[s - 1] += 1;
        }
        m
    }

    pub fn entity(&self, cluster: usize) -> &[u32] {
        &self.clusters[cluster].y
    }

    pub fn distortion(&self) -> &[Vec<bool>] {
        &self.w
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn mu(&self) -> Option<&MuFamily> {
        self.mu.as_ref()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Checks the bookkeeping: labels and member lists agree, one `y` row per
    /// cluster, and `w = 0` only where the record copies its entity.
    pub fn check_invariants(&self, data: &ErDataset) -> Result<()> {
        let mut seen = vec![false; self.labels.len()];
        for (c, cl) in self.clusters.iter().enumerate() {
            if cl.members.is_empty() {
                return Err(Error::Sampler(format!("cluster {c} is empty")));
            }
            if cl.y.len() != data.n_fields() {
                return Err(Error::Sampler(format!("cluster {c} has a malformed entity row")));
            }
            for &i in &cl.members {
                if self.labels[i] != c || seen[i] {
                    return Err(Error::Sampler(format!("record {i} is misfiled")));
                }
                seen[i] = true;
                for (f, (&x, &y)) in data.record(i).iter().zip(&cl.y).enumerate() {
                    if !self.w[i][f] && x != y {
                        return Err(Error::Sampler(format!("record {i} field {f} differs from its entity with w = 0")));
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Sampler("a record belongs to no cluster".into()));
        }
        Ok(())
    }
}

/// Precomputed log terms for the current `β`.
#[derive(Debug, Clone)]
struct LikTables {
    /// `ln((1-β_ℓ) + β_ℓ θ_{ℓ,v})`
    matched: Vec<Vec<f64>>,
    /// `ln(β_ℓ θ_{ℓ,v})`
    distorted: Vec<Vec<f64>>,
    /// `Σ_ℓ ln θ_{ℓ,x_{iℓ}}` per record: the likelihood under a fresh entity.
    fresh: Vec<f64>,
    ln_theta: Vec<Vec<f64>>,
}

impl LikTables {
    fn new(data: &ErDataset, beta: &[f64]) -> Self {
        let theta = data.theta();
        let matched = theta
            .iter()
            .zip(beta)
            .map(|(t, &b)| t.iter().map(|&tv| ((1.0 - b) + b * tv).ln()).collect())
            .collect();
        let distorted = theta
            .iter()
            .zip(beta)
            .map(|(t, &b)| t.iter().map(|&tv| (b * tv).ln()).collect())
            .collect();
        let ln_theta: Vec<Vec<f64>> = theta.iter().map(|t| t.iter().map(|v| v.ln()).collect()).collect();
        let fresh = data
            .records()
            .iter()
            .map(|x| x.iter().zip(&ln_theta).map(|(&v, lt)| lt[v as usize]).sum())
            .collect();
        Self {
            matched,
            distorted,
            fresh,
            ln_theta,
        }
    }

    #[inline]
    fn record(&self, x: &[u32], y: &[u32]) -> f64 {
        let mut acc = 0.0;
        for (f, (&xv, &yv)) in x.iter().zip(y).enumerate() {
            acc += if xv == yv {
                self.matched[f][xv as usize]
            } else {
                self.distorted[f][xv as usize]
            };
        }
        acc
    }
}

/// Draws an index with probability proportional to `exp(log_w)`.
fn sample_log<R: Rng + ?Sized>(log_w: &mut [f64], rng: &mut R) -> usize {
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert!(max > f64::NEG_INFINITY, "every option has zero probability");
    let mut total = 0.0;
    for v in log_w.iter_mut() {
        *v = (*v - max).exp();
        total += *v;
    }
    let mut u = rng.random::<f64>() * total;
    for (i, &v) in log_w.iter().enumerate() {
        if u < v {
            return i;
        }
        u -= v;
    }
    log_w.iter().rposition(|&v| v > 0.0).expect("positive weight")
}

/// Record pairs for the chaperones move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PairProposal {
    #[default]
    Uniform,
    /// Weight proportional to the number of agreeing fields plus one.
    Agreement,
}

#[derive(Debug, Clone)]
enum PairSampler {
    Uniform(usize),
    Weighted(WeightedIndex<f64>, Vec<(u32, u32)>),
}

impl PairSampler {
    fn new(data: &ErDataset, kind: PairProposal) -> Self {
        let n = data.n();
        match kind {
            PairProposal::Uniform => PairSampler::Uniform(n),
            PairProposal::Agreement => {
                let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
                let mut weights = Vec::with_capacity(pairs.capacity());
                for i in 0..n {
                    for j in i + 1..n {
                        let agree = data.record(i).iter().zip(data.record(j)).filter(|(a, b)| a == b).count();
                        pairs.push((i as u32, j as u32));
                        weights.push(agree as f64 + 1.0);
                    }
                }
                PairSampler::Weighted(WeightedIndex::new(&weights).expect("positive weights"), pairs)
            }
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        match self {
            PairSampler::Uniform(n) => {
                let i = rng.random_range(0..*n);
                let mut j = rng.random_range(0..*n - 1);
                if j >= i {
                    j += 1;
                }
                (i, j)
            }
            PairSampler::Weighted(dist, pairs) => {
                let (i, j) = pairs[dist.sample(rng)];
                (i as usize, j as usize)
            }
        }
    }
}

/// Cached quantities for one dataset and prior; refreshed when `β` or `θ_μ` move.
#[derive(Debug, Clone)]
pub struct Kernel<'a> {
    data: &'a ErDataset,
    prior: &'a PartitionPrior,
    weights: PriorWeights,
    lik: LikTables,
    pairs: Option<PairSampler>,
}

impl<'a> Kernel<'a> {
    pub fn new(data: &'a ErDataset, prior: &'a PartitionPrior, state: &McmcState) -> Self {
        Self {
            data,
            prior,
            weights: PriorWeights::build(prior, state.mu.as_ref(), data.n()),
            lik: LikTables::new(data, &state.beta),
            pairs: None,
        }
    }

    pub fn with_pair_proposal(mut self, kind: PairProposal) -> Self {
        if self.data.n() >= 2 {
            self.pairs = Some(PairSampler::new(self.data, kind));
        }
        self
    }

    fn refresh_prior(&mut self, state: &McmcState) {
        self.weights = PriorWeights::build(self.prior, state.mu.as_ref(), self.data.n());
    }

    fn refresh_likelihood(&mut self, state: &McmcState) {
        self.lik = LikTables::new(self.data, &state.beta);
    }

    fn detach(&self, state: &mut McmcState, i: usize) {
        let c = state.labels[i];
        let members = &mut state.clusters[c].members;
        let pos = members.iter().position(|&m| m == i).expect("member listed");
        members.swap_remove(pos);
        if members.is_empty() {
            state.clusters.swap_remove(c);
            if c < state.clusters.len() {
                for &m in &state.clusters[c].members {
                    state.labels[m] = c;
                }
            }
        }
        state.labels[i] = usize::MAX;
    }

    /// Draws the entity of a new cluster seeded by record `i`: `y = x` with
    /// probability `(1-β) + βθ_x`, otherwise `y ~ θ` restricted to `y != x`.
    fn open_cluster(&self, state: &mut McmcState, i: usize) -> usize {
        let x = self.data.record(i);
        let theta = self.data.theta();
        let y = x
            .iter()
            .enumerate()
            .map(|(f, &xv)| {
                let b = state.beta[f];
                let t = &theta[f];
                let u: f64 = state.rng.random();
                let stay = (1.0 - b) + b * t[xv as usize];
                if u < stay {
                    return xv;
                }
                // remaining mass b θ_v over v != x, total b (1 - θ_x)
                let mut r = (u - stay) / b;
                for (v, &tv) in t.iter().enumerate() {
                    if v as u32 == xv {
                        continue;
                    }
                    if r < tv {
                        return v as u32;
                    }
                    r -= tv;
                }
                t.iter()
                    .enumerate()
                    .rposition(|(v, &tv)| v as u32 != xv && tv > 0.0)
                    .map_or(xv, |v| v as u32)
            })
            .collect();
        state.clusters.push(Cluster { members: Vec::new(), y });
        state.clusters.len() - 1
    }

    fn attach(&self, state: &mut McmcState, i: usize, c: usize) {
        state.clusters[c].members.push(i);
        state.labels[i] = c;
        self.resample_w(state, i);
    }

    fn resample_w(&self, state: &mut McmcState, i: usize) {
        let x = self.data.record(i);
        let y = &state.clusters[state.labels[i]].y;
        for f in 0..x.len() {
            state.w[i][f] = if x[f] != y[f] {
                true
            } else {
                let distort = (self.lik.distorted[f][x[f] as usize] - self.lik.matched[f][x[f] as usize]).exp();
                state.rng.random::<f64>() < distort
            };
        }
    }

    /// Gibbs step for `z_i` with `w_i` summed out; the new-cluster option
    /// integrates its entity against `θ`.
    pub fn update_z(&self, state: &mut McmcState, i: usize) {
        self.detach(state, i);
        let x = self.data.record(i);
        let k = state.clusters.len();
        let mut logw: Vec<f64> = state
            .clusters
            .iter()
            .map(|c| self.weights.existing(c.members.len()) + self.lik.record(x, &c.y))
            .collect();
        logw.push(self.weights.new_cluster(k) + self.lik.fresh[i]);
        let pick = sample_log(&mut logw, &mut state.rng);
        let c = if pick == k { self.open_cluster(state, i) } else { pick };
        self.attach(state, i, c);
    }

    pub fn sweep_z(&self, state: &mut McmcState) {
        for i in 0..self.data.n() {
            self.update_z(state, i);
        }
    }

    /// `z_r` restricted to the clusters of `i` and `j`, or to the shared
    /// cluster and a new singleton when `i` and `j` are together.
    fn restricted_update(&self, state: &mut McmcState, r: usize, i: usize, j: usize) {
        self.detach(state, r);
        let (a, b) = (state.labels[i], state.labels[j]);
        let x = self.data.record(r);
        let join = |c: usize| self.weights.existing(state.clusters[c].members.len()) + self.lik.record(x, &state.clusters[c].y);
        let mut logw = [join(a), if a != b { join(b) } else { self.weights.new_cluster(state.clusters.len()) + self.lik.fresh[r] }];
        let pick = sample_log(&mut logw, &mut state.rng);
        let c = match (pick, a != b) {
            (0, _) => a,
            (_, true) => b,
            (_, false) => self.open_cluster(state, r),
        };
        self.attach(state, r, c);
    }

    /// One chaperones move: draw a record pair, reassign the other members of
    /// their clusters by restricted Gibbs steps in random order, then give both
    /// records an unrestricted Gibbs step. When the pair shares a cluster the
    /// choices are that cluster or a singleton, and current singletons are
    /// visited too.
    pub fn chaperones_move(&self, state: &mut McmcState) {
        let Some(pairs) = &self.pairs else {
            return;
        };
        let (i, j) = pairs.draw(&mut state.rng);
        let (a, b) = (state.labels[i], state.labels[j]);
        let mut others: Vec<usize> = state.clusters[a].members.clone();
        if a != b {
            others.extend_from_slice(&state.clusters[b].members);
        } else {
            // a singleton may join the shared cluster, the reverse of a member
            // splitting off; skipping them would make the move irreversible
            others.extend(state.clusters.iter().filter(|c| c.members.len() == 1).map(|c| c.members[0]));
        }
        others.retain(|&r| r != i && r != j);
        others.shuffle(&mut state.rng);
        for r in others {
            self.restricted_update(state, r, i, j);
        }
        self.update_z(state, i);
        self.update_z(state, j);
    }

    /// Blocked draw of each entity row with `w` summed out, then `w | y`.
    pub fn update_y_w(&self, state: &mut McmcState) {
        let theta = self.data.theta();
        let mut lp = Vec::new();
        for c in 0..state.clusters.len() {
            for f in 0..self.data.n_fields() {
                lp.clear();
                let members = &state.clusters[c].members;
                for v in 0..theta[f].len() {
                    let mut acc = self.lik.ln_theta[f][v];
                    if acc > f64::NEG_INFINITY {
                        for &m in members {
                            let xv = self.data.record(m)[f] as usize;
                            acc += if xv == v { self.lik.matched[f][xv] } else { self.lik.distorted[f][xv] };
                        }
                    }
                    lp.push(acc);
                }
                let v = sample_log(&mut lp, &mut state.rng);
                state.clusters[c].y[f] = v as u32;
            }
            for m in state.clusters[c].members.clone() {
                self.resample_w(state, m);
            }
        }
    }

    /// `β_ℓ ~ Beta(a + Σ_i w_iℓ, b + n - Σ_i w_iℓ)`.
    pub fn update_beta(&mut self, state: &mut McmcState, prior: (f64, f64)) -> Result<()> {
        let n = self.data.n() as f64;
        for f in 0..self.data.n_fields() {
            let hits = state.w.iter().filter(|w| w[f]).count() as f64;
            let dist = Beta::new(prior.0 + hits, prior.1 + n - hits).map_err(|e| Error::Sampler(e.to_string()))?;
            state.beta[f] = dist.sample(&mut state.rng).clamp(1e-300, 1.0 - 1e-16);
        }
        self.refresh_likelihood(state);
        Ok(())
    }

    pub fn update_theta_mu(&mut self, state: &mut McmcState, hyper: &Hyperpriors) -> Result<()> {
        if let Some(mu) = &state.mu {
            let sizes = state.cluster_sizes();
            let next = update_theta_mu(mu, &sizes, hyper, &mut state.rng)?;
            state.mu = Some(next);
            self.refresh_prior(state);
        }
        Ok(())
    }
}

/// One Gibbs step for `z_i` under the current state.
pub fn gibbs_update_z(state: &mut McmcState, data: &ErDataset, prior: &PartitionPrior, i: usize) {
    Kernel::new(data, prior, state).update_z(state, i);
}

/// One chaperones move; a no-op for fewer than two records.
pub fn chaperones_update(state: &mut McmcState, data: &ErDataset, prior: &PartitionPrior, proposal: PairProposal) {
    Kernel::new(data, prior, state).with_pair_proposal(proposal).chaperones_move(state);
}

/// Entity rows and distortion indicators, then `β` from its Beta full conditional.
pub fn update_y_w_beta(state: &mut McmcState, data: &ErDataset, prior: &PartitionPrior, beta_prior: (f64, f64)) -> Result<()> {
    let mut kernel = Kernel::new(data, prior, state);
    kernel.update_y_w(state);
    kernel.update_beta(state, beta_prior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::er::dataset::{generate_synthetic, uniform_theta, Scenario};
    use crate::gibbs::{GibbsModel, MixingDistribution};
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn small_data() -> ErDataset {
        let sc = Scenario::from_counts(vec![3, 2, 2]).unwrap();
        generate_synthetic(&sc, &uniform_theta(3, 4), &[0.1; 3], 4).unwrap()
    }

    #[test]
    fn likelihood_edge_cases() {
        let theta = uniform_theta(2, 3);
        assert_eq!(log_record_likelihood(&[0, 1], &[0, 1], &[0.0, 0.0], &theta), 0.0);
        assert_eq!(log_record_likelihood(&[0, 1], &[0, 2], &[0.0, 0.0], &theta), f64::NEG_INFINITY);
        // Σ_y θ_y [(1-β) 1(x=y) + β θ_x] = θ_x
        let beta = [0.3, 0.7];
        let theta = vec![vec![0.2, 0.5, 0.3], vec![0.6, 0.4]];
        for x0 in 0..3u32 {
            for x1 in 0..2u32 {
                let mut total = 0.0;
                for y0 in 0..3u32 {
                    for y1 in 0..2u32 {
                        let prior = theta[0][y0 as usize] * theta[1][y1 as usize];
                        total += prior * log_record_likelihood(&[x0, x1], &[y0, y1], &beta, &theta).exp();
                    }
                }
                let want = theta[0][x0 as usize] * theta[1][x1 as usize];
                assert!((total - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn tables_match_direct_likelihood() {
        let data = small_data();
        let beta = vec![0.2, 0.05, 0.4];
        let lik = LikTables::new(&data, &beta);
        let y = data.record(3).to_vec();
        for i in 0..data.n() {
            let direct = log_record_likelihood(data.record(i), &y, &beta, data.theta());
            assert!((lik.record(data.record(i), &y) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn sweeps_keep_invariants() {
        let data = small_data();
        let prior = PartitionPrior::Esc {
            mu: MuFamily::ZtPoisson { lambda: 1.5 },
            fixed: false,
        };
        for init in [Initialization::Singletons, Initialization::ExactDuplicates] {
            let mut state = McmcState::new(&data, &prior, vec![0.1; 3], init, rng(3)).unwrap();
            state.check_invariants(&data).unwrap();
            let mut kernel = Kernel::new(&data, &prior, &state).with_pair_proposal(PairProposal::Agreement);
            for _ in 0..50 {
                kernel.sweep_z(&mut state);
                state.check_invariants(&data).unwrap();
                kernel.chaperones_move(&mut state);
                state.check_invariants(&data).unwrap();
                kernel.update_y_w(&mut state);
                kernel.update_theta_mu(&mut state, &Hyperpriors::default()).unwrap();
                kernel.update_beta(&mut state, (1.0, 20.0)).unwrap();
                state.check_invariants(&data).unwrap();
            }
        }
    }

    #[test]
    fn zero_distortion_separates_distinct_entities() {
        // every entity differs from every other in all fields
        let x: Vec<Vec<u32>> = vec![vec![0, 0], vec![1, 1], vec![0, 0], vec![2, 2], vec![1, 1], vec![0, 0]];
        let data = ErDataset::new(x, vec![3, 3], None).unwrap();
        let prior = PartitionPrior::Gibbs(GibbsModel::crp(1.0).unwrap());
        let mut state = McmcState::new(&data, &prior, vec![1e-12; 2], Initialization::Singletons, rng(1)).unwrap();
        let kernel = Kernel::new(&data, &prior, &state);
        for _ in 0..5 {
            kernel.sweep_z(&mut state);
            kernel.update_y_w(&mut state);
        }
        let truth = SetPartition::from_labels(&[0, 1, 0, 2, 1, 0]);
        assert_eq!(state.partition(), truth);
    }

    #[test]
    fn zt_binomial_cap_holds() {
        let data = small_data();
        let prior = PartitionPrior::Esc {
            mu: MuFamily::ZtBinomial { trials: 2, p: 0.9 },
            fixed: true,
        };
        let mut state = McmcState::new(&data, &prior, vec![0.1; 3], Initialization::ExactDuplicates, rng(8)).unwrap();
        let kernel = Kernel::new(&data, &prior, &state).with_pair_proposal(PairProposal::Uniform);
        for _ in 0..200 {
            kernel.sweep_z(&mut state);
            kernel.chaperones_move(&mut state);
            assert!(state.cluster_sizes().iter().all(|&s| s <= 2));
        }
    }

    #[test]
    fn two_record_chaperones_runs() {
        let data = ErDataset::new(vec![vec![0], vec![0]], vec![2], None).unwrap();
        let prior = PartitionPrior::Gibbs(GibbsModel::neutral(MixingDistribution::Point { k: 3 }).unwrap());
        let mut state = McmcState::new(&data, &prior, vec![0.5], Initialization::Singletons, rng(2)).unwrap();
        let mut seen = [false; 2];
        for _ in 0..200 {
            chaperones_update(&mut state, &data, &prior, PairProposal::Uniform);
            seen[state.n_clusters() - 1] = true;
        }
        assert_eq!(seen, [true, true]);
        let single = ErDataset::new(vec![vec![0]], vec![1], None).unwrap();
        let mut st = McmcState::new(&single, &prior, vec![0.5], Initialization::Singletons, rng(2)).unwrap();
        chaperones_update(&mut st, &single, &prior, PairProposal::Uniform);
        assert_eq!(st.n_clusters(), 1);
    }

    #[test]
    fn forced_distortion_and_beta_conjugacy() {
        let x = vec![vec![0], vec![1]];
        let data = ErDataset::new(x, vec![2], None).unwrap();
        let prior = PartitionPrior::Gibbs(GibbsModel::crp(1.0).unwrap());
        let mut state = McmcState::new(&data, &prior, vec![0.3], Initialization::Singletons, rng(4)).unwrap();
        // put both records in one cluster: one of them must be distorted
        let kernel = Kernel::new(&data, &prior, &state);
        kernel.detach(&mut state, 1);
        kernel.attach(&mut state, 1, 0);
        assert!(state.distortion()[1][0]);
        state.check_invariants(&data).unwrap();
    }
}
