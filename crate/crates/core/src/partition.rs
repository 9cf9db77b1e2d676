//! Integer and set partitions, diversity indices and the reverse dominance order.

use crate::error::{domain, Error, Result};
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest `n` for which set partitions may be enumerated (Bell(13) is about 2.7e7).
pub const SET_PARTITION_LIMIT: usize = 13;

/// A nonincreasing tuple of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IntegerPartition {
    parts: Vec<usize>,
    n: usize,
}

impl IntegerPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return domain("integer partition needs at least one part");
        }
        if parts.contains(&0) {
            return domain(format!("parts must be positive: {parts:?}"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return domain(format!("parts must be nonincreasing: {parts:?}"));
        }
        let n = parts.iter().sum();
        Ok(Self { parts, n })
    }

    /// Sorts arbitrary positive block sizes into a partition.
    pub fn from_sizes(mut sizes: Vec<usize>) -> Result<Self> {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(sizes)
    }

    fn from_sorted_unchecked(parts: Vec<usize>) -> Self {
        let n = parts.iter().sum();
        Self { parts, n }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// `m[i]` = number of parts equal to `i` (index 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.parts[0] + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    /// Dash-joined parts, e.g. `6-2-2`.
    pub fn label(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }

    /// Partition with part `j` increased by one (re-sorted).
    pub fn grow_part(&self, j: usize) -> Self {
        let mut parts = self.parts.clone();
        parts[j] += 1;
        let mut i = j;
        while i > 0 && parts[i - 1] < parts[i] {
            parts.swap(i - 1, i);
            i -= 1;
        }
        Self::from_sorted_unchecked(parts)
    }

    /// Partition with a new singleton block appended.
    pub fn add_singleton(&self) -> Self {
        let mut parts = self.parts.clone();
        parts.push(1);
        Self::from_sorted_unchecked(parts)
    }
}

impl TryFrom<Vec<usize>> for IntegerPartition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<IntegerPartition> for Vec<usize> {
    fn from(p: IntegerPartition) -> Self {
        p.parts
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A set partition of `{0, .., n-1}` stored as canonical labels: the first
/// item has label 0 and each new label is one more than the largest seen.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetPartition {
    labels: Vec<usize>,
    n_blocks: usize,
}

impl SetPartition {
    /// Canonicalizes arbitrary labels.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut out = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = map.len();
            out.push(*map.entry(l).or_insert(next));
        }
        Self {
            labels: out,
            n_blocks: map.len(),
        }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return domain("empty block");
            }
            for &i in block {
                if i >= n || labels[i] != usize::MAX {
                    return domain(format!("item {i} out of range or repeated"));
                }
                labels[i] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return domain("blocks do not cover every item");
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
            n_blocks: n,
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.n_blocks];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l].push(i);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_blocks];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn shape(&self) -> IntegerPartition {
        IntegerPartition::from_sizes(self.block_sizes()).expect("nonempty blocks")
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderResult {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl OrderResult {
    pub fn reverse(self) -> Self {
        match self {
            Self::Less => Self::Greater,
            Self::Greater => Self::Less,
            other => other,
        }
    }
}

/// Which covering condition holds for a pair `a ⋖ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cover {
    /// The two changed parts are adjacent.
    Star,
    /// The two changed parts end equal to `s`.
    StarStar { s: usize },
    Both { s: usize },
}

impl Cover {
    pub fn star_star(self) -> Option<usize> {
        match self {
            Cover::Star => None,
            Cover::StarStar { s } | Cover::Both { s } => Some(s),
        }
    }
}

/// All partitions of `n` (into exactly `k` parts when given), lexicographically descending.
pub fn enumerate_integer_partitions(n: usize, k: Option<usize>) -> Result<Vec<IntegerPartition>> {
    if n == 0 {
        return domain("n must be positive");
    }
    if let Some(k) = k {
        if k == 0 || k > n {
            return domain(format!("k = {k} must lie in 1..={n}"));
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    match k {
        Some(k) => fixed_length(n, n, k, &mut current, &mut out),
        None => any_length(n, n, &mut current, &mut out),
    }
    Ok(out)
}

fn any_length(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<IntegerPartition>) {
    if rem == 0 {
        out.push(IntegerPartition::from_sorted_unchecked(cur.clone()));
        return;
    }
    for first in (1..=rem.min(max)).rev() {
        cur.push(first);
        any_length(rem - first, first, cur, out);
        cur.pop();
    }
}

fn fixed_length(
    rem: usize,
    max: usize,
    left: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<IntegerPartition>,
) {
    if left == 0 {
        if rem == 0 {
            out.push(IntegerPartition::from_sorted_unchecked(cur.clone()));
        }
        return;
    }
    let hi = max.min(rem + 1 - left);
    let lo = rem.div_ceil(left);
    for first in (lo..=hi).rev() {
        cur.push(first);
        fixed_length(rem - first, first, left - 1, cur, out);
        cur.pop();
    }
}

/// Shannon index with natural log.
pub fn shannon_index(p: &IntegerPartition) -> f64 {
    let n = p.n() as f64;
    -p.parts()
        .iter()
        .map(|&x| {
            let q = x as f64 / n;
            q * q.ln()
        })
        .sum::<f64>()
}

pub fn gini_simpson_index(p: &IntegerPartition) -> f64 {
    let n = p.n() as f64;
    1.0 - p
        .parts()
        .iter()
        .map(|&x| (x as f64 / n).powi(2))
        .sum::<f64>()
}

fn check_same_space(a: &IntegerPartition, b: &IntegerPartition) -> Result<()> {
    if a.n() != b.n() || a.k() != b.k() {
        return domain(format!(
            "order is defined within a single (n, k): got {a} and {b}"
        ));
    }
    Ok(())
}

/// Reverse dominance order: `Less` means `a ≺ b`, i.e. `b` is more balanced.
pub fn dominance_compare(a: &IntegerPartition, b: &IntegerPartition) -> Result<OrderResult> {
    check_same_space(a, b)?;
    if a == b {
        return Ok(OrderResult::Equal);
    }
    let (mut sa, mut sb) = (0usize, 0usize);
    let (mut a_ge, mut b_ge) = (true, true);
    for (x, y) in a.parts().iter().zip(b.parts()) {
        sa += x;
        sb += y;
        a_ge &= sa >= sb;
        b_ge &= sb >= sa;
    }
    Ok(match (a_ge, b_ge) {
        (true, false) => OrderResult::Less,
        (false, true) => OrderResult::Greater,
        _ => OrderResult::Incomparable,
    })
}

/// Every distinct partition reachable by moving one unit from a larger part to a smaller one.
pub fn one_step_downshifts(a: &IntegerPartition) -> Vec<IntegerPartition> {
    let parts = a.parts();
    let k = parts.len();
    let mut out = Vec::new();
    for u in 0..k {
        for v in (u + 1)..k {
            if parts[u] >= parts[v] + 2 {
                let mut next = parts.to_vec();
                next[u] -= 1;
                next[v] += 1;
                next.sort_unstable_by(|x, y| y.cmp(x));
                out.push(IntegerPartition::from_sorted_unchecked(next));
            }
        }
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    out.dedup();
    out
}

/// Whether `b` covers `a` in the reverse dominance order, with the covering case.
pub fn covers(a: &IntegerPartition, b: &IntegerPartition) -> Result<Option<Cover>> {
    check_same_space(a, b)?;
    let diff: Vec<usize> = (0..a.k()).filter(|&j| a.parts()[j] != b.parts()[j]).collect();
    if diff.len() != 2 {
        return Ok(None);
    }
    let (u, v) = (diff[0], diff[1]);
    let (au, av, bu, bv) = (a.parts()[u], a.parts()[v], b.parts()[u], b.parts()[v]);
    if bu + 1 != au || bv != av + 1 {
        return Ok(None);
    }
    let star = v == u + 1;
    let star_star = bu == bv;
    Ok(match (star, star_star) {
        (true, true) => Some(Cover::Both { s: bu }),
        (true, false) => Some(Cover::Star),
        (false, true) => Some(Cover::StarStar { s: bu }),
        (false, false) => None,
    })
}

/// Number of set partitions of `[n]` whose sorted block sizes equal `a`.
pub fn shape_multiplicity(a: &IntegerPartition) -> BigUint {
    let fact = |m: usize| -> BigUint { (1..=m).fold(BigUint::one(), |acc, i| acc * i) };
    let mut denom = BigUint::one();
    for (i, &m) in a.multiplicities().iter().enumerate().skip(1) {
        if m > 0 {
            denom *= fact(i).pow(m as u32) * fact(m);
        }
    }
    fact(a.n()) / denom
}

/// Iterator over set partitions of `[n]` as restricted growth strings, in lexicographic order.
pub struct SetPartitions {
    labels: Vec<usize>,
    /// `maxes[i]` = max label among `labels[..i]`.
    maxes: Vec<usize>,
    done: bool,
}

pub fn enumerate_set_partitions(n: usize) -> Result<SetPartitions> {
    if n == 0 {
        return domain("n must be positive");
    }
    if n > SET_PARTITION_LIMIT {
        return Err(Error::Guard {
            n,
            limit: SET_PARTITION_LIMIT,
        });
    }
    Ok(SetPartitions {
        labels: vec![0; n],
        maxes: vec![0; n],
        done: false,
    })
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let n = self.labels.len();
        let n_blocks = self.labels.iter().max().map_or(0, |m| m + 1);
        let current = SetPartition {
            labels: self.labels.clone(),
            n_blocks,
        };
        // advance: rightmost position that can be incremented
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.labels[i] <= self.maxes[i] {
                self.labels[i] += 1;
                for j in (i + 1)..n {
                    self.labels[j] = 0;
                    self.maxes[j] = self.maxes[j - 1].max(self.labels[j - 1]);
                }
                break;
            }
        }
        Some(current)
    }
}
