use crate::error::{domain, Result};
use crate::partition::SetPartition;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Posterior co-clustering frequencies `π̂_ij` over a set of label vectors.
#[derive(Debug, Clone)]
pub struct CoClustering {
    n: usize,
    count: usize,
    /// Row-major `n × n`, only `i < j` filled.
    hits: Vec<u32>,
}

impl CoClustering {
    pub fn new(samples: &[Vec<usize>]) -> Result<Self> {
        let Some(first) = samples.first() else {
            return domain("no partition samples");
        };
        let n = first.len();
        let mut hits = vec![0u32; n * n];
        for labels in samples {
            if labels.len() != n {
                return domain("partition samples have different lengths");
            }
            for block in blocks(labels) {
                for (a, &i) in block.iter().enumerate() {
                    for &j in &block[a + 1..] {
                        hits[i * n + j] += 1;
                    }
                }
            }
        }
        Ok(Self {
            n,
            count: samples.len(),
            hits,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if a == b {
            return 1.0;
        }
        self.hits[a * self.n + b] as f64 / self.count as f64
    }

    /// `Σ_{i<j} (δ_ij - π̂_ij)²`.
    pub fn loss(&self, labels: &[usize]) -> f64 {
        let base: f64 = self.hits.iter().map(|&h| {
            let p = h as f64 / self.count as f64;
            p * p
        })
        .sum();
        base + self.pair_terms(labels)
    }

    fn pair_terms(&self, labels: &[usize]) -> f64 {
        let mut acc = 0.0;
        for block in blocks(labels) {
            for (a, &i) in block.iter().enumerate() {
                for &j in &block[a + 1..] {
                    acc += 1.0 - 2.0 * self.prob(i, j);
                }
            }
        }
        acc
    }
}

/// Member lists of each label, members ascending.
fn blocks(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &l) in labels.iter().enumerate() {
        map.entry(l).or_default().push(i);
    }
    map.into_values().collect()
}

/// The sampled partition closest to the co-clustering matrix in squared loss.
/// Ties go to the earliest sample.
pub fn dahl_point_estimate(samples: &[Vec<usize>]) -> Result<SetPartition> {
    let co = CoClustering::new(samples)?;
    let mut best = (f64::INFINITY, 0);
    for (idx, labels) in samples.iter().enumerate() {
        // the Σπ̂² part is shared by every candidate
        let score = co.pair_terms(labels);
        if score < best.0 {
            best = (score, idx);
        }
    }
    Ok(SetPartition::from_labels(&samples[best.1]))
}

/// Pairwise linkage errors of an estimate against the truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkageErrors {
    /// Pairs linked in both.
    pub correct: u64,
    /// True pairs the estimate misses.
    pub missed: u64,
    /// Estimated pairs absent from the truth.
    pub wrong: u64,
    pub fnr: f64,
    pub fdr: f64,
}

fn pairs(c: u64) -> u64 {
    c * c.saturating_sub(1) / 2
}

/// False negative and false discovery rates over record pairs; each is 0
/// when its denominator is.
pub fn fnr_fdr(estimate: &SetPartition, truth: &SetPartition) -> Result<LinkageErrors> {
    if estimate.n() != truth.n() {
        return domain(format!("estimate has {} records, truth {}", estimate.n(), truth.n()));
    }
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    for (&a, &b) in estimate.labels().iter().zip(truth.labels()) {
        *table.entry((a, b)).or_default() += 1;
    }
    let correct: u64 = table.values().map(|&c| pairs(c)).sum();
    let true_pairs: u64 = truth.block_sizes().iter().map(|&s| pairs(s as u64)).sum();
    let est_pairs: u64 = estimate.block_sizes().iter().map(|&s| pairs(s as u64)).sum();
    let (missed, wrong) = (true_pairs - correct, est_pairs - correct);
    let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    Ok(LinkageErrors {
        correct,
        missed,
        wrong,
        fnr: ratio(missed, true_pairs),
        fdr: ratio(wrong, est_pairs),
    })
}
