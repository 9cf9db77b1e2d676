//! Enumeration oracles shared by the integration tests.
#![allow(dead_code)]

use partition_balance::er::{ErDataset, Initialization, Kernel, McmcState, PairProposal, PartitionPrior};
use partition_balance::{IntegerPartition, SetPartition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub fn lse(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

pub fn ln_fact(n: usize) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum()
}

/// All set partitions of `[n]` as restricted-growth label vectors.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max + 1 {
            if i == 0 && l > 0 {
                break;
            }
            cur.push(l);
            rec(i + 1, n, cur, if i == 0 { 0 } else { max.max(l) }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), 0, &mut out);
    out
}

pub fn block_sizes(labels: &[usize]) -> Vec<usize> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut s = vec![0; k];
    for &l in labels {
        s[l] += 1;
    }
    s
}

pub fn shape_of(labels: &[usize]) -> IntegerPartition {
    IntegerPartition::from_sizes(block_sizes(labels)).unwrap()
}

/// Marginal likelihood of one cluster with its entity summed out.
fn cluster_marginal(data: &ErDataset, members: &[usize], beta: &[f64]) -> f64 {
    let theta = data.theta();
    (0..data.n_fields())
        .map(|f| {
            let terms: Vec<f64> = (0..theta[f].len())
                .map(|v| {
                    theta[f][v].ln()
                        + members
                            .iter()
                            .map(|&i| {
                                let x = data.record(i)[f] as usize;
                                let keep = if x == v { 1.0 - beta[f] } else { 0.0 };
                                (keep + beta[f] * theta[f][x]).ln()
                            })
                            .sum::<f64>()
                })
                .collect();
            lse(&terms)
        })
        .sum()
}

/// ESC prior `K!/n! Π n_j! μ_{n_j}` up to normalization.
pub fn esc_log_prior(mu: &dyn Fn(usize) -> f64, sizes: &[usize]) -> f64 {
    ln_fact(sizes.len()) + sizes.iter().map(|&s| ln_fact(s) + mu(s).ln()).sum::<f64>()
}

/// Total variation between the sampler's partition frequencies over `1e5`
/// iterations and the enumerated posterior of a five-record, two-field instance.
pub fn exact_check(prior: PartitionPrior, log_prior: &dyn Fn(&[usize]) -> f64, seed: u64, chaperones: bool) -> f64 {
    let x = vec![vec![0, 0], vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]];
    let data = ErDataset::new(x, vec![2, 2], None).unwrap();
    let beta = vec![0.35, 0.25];
    let all = set_partitions(5);
    let logs: Vec<f64> = all
        .iter()
        .map(|labels| {
            let k = labels.iter().max().unwrap() + 1;
            let blocks: Vec<Vec<usize>> = (0..k).map(|b| (0..5).filter(|&i| labels[i] == b).collect()).collect();
            log_prior(&block_sizes(labels)) + blocks.iter().map(|m| cluster_marginal(&data, m, &beta)).sum::<f64>()
        })
        .collect();
    let z = lse(&logs);
    let index: HashMap<SetPartition, usize> =
        all.iter().enumerate().map(|(i, l)| (SetPartition::from_labels(l), i)).collect();
    let mut state = McmcState::new(
        &data,
        &prior,
        beta,
        Initialization::Singletons,
        ChaCha8Rng::seed_from_u64(seed),
    )
    .unwrap();
    let kernel = Kernel::new(&data, &prior, &state).with_pair_proposal(PairProposal::Uniform);
    let sweeps = 100_000;
    let mut freq = vec![0usize; all.len()];
    let step = |state: &mut McmcState| {
        if chaperones {
            kernel.chaperones_move(state);
        } else {
            kernel.sweep_z(state);
        }
        kernel.update_y_w(state);
    };
    for _ in 0..1000 {
        step(&mut state);
    }
    for _ in 0..sweeps {
        step(&mut state);
        freq[index[&state.partition()]] += 1;
    }
    0.5 * freq
        .iter()
        .zip(&logs)
        .map(|(&c, &l)| (c as f64 / sweeps as f64 - (l - z).exp()).abs())
        .sum::<f64>()
}

