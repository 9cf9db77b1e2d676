use super::model::GibbsModel;
use super::Eppf;
use crate::error::{domain, Error, Result};
use crate::numeric::{fmt_real, log_sum_exp, normalize_log_weights};
use crate::partition::{
    covers, enumerate_integer_partitions, gini_simpson_index, shannon_index, shape_multiplicity,
    IntegerPartition, SET_PARTITION_LIMIT,
};
use num_bigint::BigUint;
use std::io::Write;

/// Log weights `(log f(n_1), .., log f(n_k), log g(n, k))` for placing item `n+1`
/// given clusters of sizes `counts`: `f(s) = W_{s+1}/W_s`, `g = V_{n+1,k+1}/V_{n+1,k}`.
pub fn log_reallocation_weights(m: &GibbsModel, counts: &[usize], n: usize) -> Result<Vec<f64>> {
    if counts.iter().sum::<usize>() != n || counts.contains(&0) {
        return domain(format!("cluster sizes {counts:?} do not sum to n = {n}"));
    }
    if counts.is_empty() {
        // first item always opens a cluster
        return Ok(vec![0.0]);
    }
    let k = counts.len();
    let v_same = m.log_v(n + 1, k);
    if v_same == f64::NEG_INFINITY {
        return Err(Error::Degenerate(format!("V_{{{},{}}} = 0", n + 1, k)));
    }
    let mut out: Vec<f64> = counts.iter().map(|&s| m.w().log_ratio(s)).collect();
    out.push(m.log_v(n + 1, k + 1) - v_same);
    Ok(out)
}

/// Normalized reallocation probabilities.
pub fn reallocation_probabilities(m: &GibbsModel, counts: &[usize], n: usize) -> Result<Vec<f64>> {
    let mut w = log_reallocation_weights(m, counts, n)?;
    normalize_log_weights(&mut w);
    Ok(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivityReport {
    pub holds: bool,
    /// First shape (and both sides of the addition rule, in log) that failed.
    pub first_failure: Option<(IntegerPartition, f64, f64)>,
}

/// Checks `p(n) = Σ_j p(n with n_j + 1) + p(n, 1)` for every shape with at most
/// `n_max` items, to relative tolerance `tol`.
pub fn check_projectivity<M: Eppf + ?Sized>(m: &M, n_max: usize, tol: f64) -> Result<ProjectivityReport> {
    for n in 1..=n_max {
        for shape in enumerate_integer_partitions(n, None)? {
            let lhs = m.log_eppf(&shape);
            let mut terms: Vec<f64> = (0..shape.k()).map(|j| m.log_eppf(&shape.grow_part(j))).collect();
            terms.push(m.log_eppf(&shape.add_singleton()));
            let rhs = log_sum_exp(&terms);
            let ok = (lhs == f64::NEG_INFINITY && rhs == f64::NEG_INFINITY)
                || ((rhs - lhs).exp() - 1.0).abs() <= tol;
            if !ok {
                return Ok(ProjectivityReport {
                    holds: false,
                    first_failure: Some((shape, lhs, rhs)),
                });
            }
        }
    }
    Ok(ProjectivityReport {
        holds: true,
        first_failure: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub shape: IntegerPartition,
    pub k: usize,
    pub shannon: f64,
    pub gini: f64,
    pub log_eppf: f64,
    pub multiplicity: BigUint,
}

/// One row per integer partition of `n`.
pub fn eppf_spectrum<M: Eppf + ?Sized>(m: &M, n: usize) -> Result<Vec<SpectrumRow>> {
    if n > SET_PARTITION_LIMIT {
        return Err(Error::Guard {
            n,
            limit: SET_PARTITION_LIMIT,
        });
    }
    Ok(enumerate_integer_partitions(n, None)?
        .into_iter()
        .map(|shape| SpectrumRow {
            k: shape.k(),
            shannon: shannon_index(&shape),
            gini: gini_simpson_index(&shape),
            log_eppf: m.log_eppf(&shape),
            multiplicity: shape_multiplicity(&shape),
            shape,
        })
        .collect())
}

/// Total probability of a spectrum, `Σ multiplicity · exp(log_eppf)`.
pub fn spectrum_total(rows: &[SpectrumRow]) -> f64 {
    let terms: Vec<f64> = rows
        .iter()
        .map(|r| r.log_eppf + crate::numeric::ln_biguint(&r.multiplicity))
        .collect();
    log_sum_exp(&terms).exp()
}

pub const SPECTRUM_HEADER: &str = "shape,k,H,G,log_eppf,multiplicity";

pub fn write_spectrum_csv<W: Write>(rows: &[SpectrumRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SPECTRUM_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.shape.label(),
            r.k,
            fmt_real(r.shannon),
            fmt_real(r.gini),
            fmt_real(r.log_eppf),
            r.multiplicity
        )?;
    }
    Ok(())
}

/// Exact slope `(log p(b) - log p(a)) / (H(b) - H(a))` along a (**)-cover `a ⋖ b`.
pub fn slope_ratio<M: Eppf + ?Sized>(m: &M, a: &IntegerPartition, b: &IntegerPartition) -> Result<f64> {
    match covers(a, b)?.and_then(|c| c.star_star()) {
        Some(s) if s >= 2 => {}
        _ => return domain(format!("{a} -> {b} is not a (**)-cover")),
    }
    let dp = m.log_eppf(b) - m.log_eppf(a);
    if dp.is_nan() {
        return domain("EPPF is zero on both shapes");
    }
    Ok(dp / (shannon_index(b) - shannon_index(a)))
}

/// `H(b) - H(a)` along a (**)-cover at level `s` in `n` items, from the closed form.
pub fn shannon_step(n: usize, s: usize) -> f64 {
    let (n, s) = (n as f64, s as f64);
    let t = |x: f64| if x > 0.0 { x * (x / n).ln() } else { 0.0 };
    (t(s + 1.0) - 2.0 * t(s) + t(s - 1.0)) / n
}
