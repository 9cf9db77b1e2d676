use super::wseq::WSequence;
use super::Eppf;
use crate::error::{domain, Error, Result};
use crate::partition::{dominance_compare, enumerate_integer_partitions, OrderResult};
use serde::{Deserialize, Serialize};

/// Tolerance on second log-differences when classifying `W`.
pub const CLASSIFY_TOL: f64 = 1e-9;
/// Default number of `W` terms inspected for infinite supports.
pub const DEFAULT_HORIZON: usize = 200;
/// Largest `n` accepted by the exhaustive pairwise check.
pub const BRUTE_FORCE_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Balance {
    Averse,
    Seeking,
    Neutral,
    Neither,
}

impl std::fmt::Display for Balance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Balance::Averse => "averse",
            Balance::Seeking => "seeking",
            Balance::Neutral => "neutral",
            Balance::Neither => "neither",
        })
    }
}

/// Outcome of a balancedness check. The failure fields hold the first `s`
/// (or `n` for the pairwise check) at which the averse or seeking condition broke.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceClass {
    pub kind: Balance,
    pub averse_failure: Option<usize>,
    pub seeking_failure: Option<usize>,
    /// Largest index the verdict covers.
    pub horizon: usize,
}

impl BalanceClass {
    fn from_failures(averse_failure: Option<usize>, seeking_failure: Option<usize>, horizon: usize) -> Self {
        let kind = match (averse_failure, seeking_failure) {
            (None, None) => Balance::Neutral,
            (None, Some(_)) => Balance::Averse,
            (Some(_), None) => Balance::Seeking,
            (Some(_), Some(_)) => Balance::Neither,
        };
        Self {
            kind,
            averse_failure,
            seeking_failure,
            horizon,
        }
    }
}

fn within(d2: f64, scale: f64) -> bool {
    d2.abs() <= CLASSIFY_TOL * scale.max(1.0)
}

/// Classifies `W` by log-convexity (averse) and log-concavity without internal
/// zeros (seeking), inspecting `W_1..W_{s_max}`.
pub fn classify_balance(w: &WSequence, s_max: usize) -> Result<BalanceClass> {
    if s_max < 3 {
        return domain("classification needs s_max >= 3");
    }
    let s_max = match w.known_horizon() {
        Some(h) => s_max.min(h),
        None => s_max,
    };
    if s_max < 3 {
        return domain("W table too short to classify");
    }
    let lw: Vec<f64> = (0..=s_max)
        .map(|s| if s == 0 { f64::NAN } else { w.log_w(s) })
        .collect();
    let mut averse_failure = None;
    let mut seeking_failure = None;
    let mut seen_zero = false;
    for s in 2..s_max {
        let (a, b, c) = (lw[s - 1], lw[s], lw[s + 1]);
        let (convex, concave) = if a.is_finite() && b.is_finite() && c.is_finite() {
            let (r1, r0) = (w.log_ratio(s), w.log_ratio(s - 1));
            let d2 = r1 - r0;
            let tie = within(d2, r1.abs().max(r0.abs()));
            (d2 >= 0.0 || tie, d2 <= 0.0 || tie)
        } else if b == f64::NEG_INFINITY {
            seen_zero |= a.is_finite();
            // W_s = 0: convex holds; concave holds only past the end of the support
            (true, c == f64::NEG_INFINITY)
        } else if c == f64::NEG_INFINITY {
            // support ends at s
            (false, true)
        } else {
            // a = 0 < b: an internal zero behind us
            (true, false)
        };
        let internal_zero = seen_zero && b.is_finite();
        if !convex && averse_failure.is_none() {
            averse_failure = Some(s);
        }
        if (!concave || internal_zero) && seeking_failure.is_none() {
            seeking_failure = Some(s);
        }
    }
    Ok(BalanceClass::from_failures(averse_failure, seeking_failure, s_max))
}

/// Pairwise check of the balancedness definition over every comparable pair
/// of shapes with `n` items and equal block counts.
pub fn brute_force_balance_check<M: Eppf + ?Sized>(m: &M, n: usize) -> Result<BalanceClass> {
    if n == 0 {
        return domain("n must be positive");
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::Guard {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut averse_failure = None;
    let mut seeking_failure = None;
    for k in 1..=n {
        let shapes = enumerate_integer_partitions(n, Some(k))?;
        let lp: Vec<f64> = shapes.iter().map(|s| m.log_eppf(s)).collect();
        for i in 0..shapes.len() {
            for j in 0..shapes.len() {
                if dominance_compare(&shapes[i], &shapes[j])? != OrderResult::Less {
                    continue;
                }
                // shapes[i] ≺ shapes[j]
                let (lo, hi) = (lp[i], lp[j]);
                if lo == hi {
                    continue;
                }
                let tie = lo.is_finite() && hi.is_finite() && within(lo - hi, lo.abs().max(hi.abs()));
                if tie {
                    continue;
                }
                if lo < hi {
                    averse_failure.get_or_insert(n);
                } else {
                    seeking_failure.get_or_insert(n);
                }
            }
        }
    }
    Ok(BalanceClass::from_failures(averse_failure, seeking_failure, n))
}

/// `B_s = -s (log W_{s+1} - 2 log W_s + log W_{s-1})`, `+∞` when `W_{s+1} = 0`.
pub fn b_sequence(w: &WSequence, s: usize) -> Result<f64> {
    if s < 2 {
        return domain("B_s is defined for s >= 2");
    }
    let (a, b) = (w.log_w(s - 1), w.log_w(s));
    if a.is_nan() || b.is_nan() {
        return domain(format!("W unknown at s = {s}"));
    }
    if a == f64::NEG_INFINITY {
        return domain(format!("W_{} = 0", s - 1));
    }
    if b == f64::NEG_INFINITY {
        return Err(Error::Degenerate(format!(
            "internal zero: W_{s} = 0 while W_{} > 0",
            s - 1
        )));
    }
    let c = w.log_w(s + 1);
    if c.is_nan() {
        return domain(format!("W unknown at s = {}", s + 1));
    }
    if c == f64::NEG_INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(-(s as f64) * (w.log_ratio(s) - w.log_ratio(s - 1)))
}

/// The first `s_max - 1` terms `B_2..B_{s_max}`.
pub fn b_sequence_up_to(w: &WSequence, s_max: usize) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    for s in 2..=s_max {
        let b = b_sequence(w, s)?;
        out.push((s, b));
        if b == f64::INFINITY {
            break;
        }
    }
    Ok(out)
}

fn support_within(inner: &WSequence, outer: &WSequence) -> bool {
    match (inner.support_max(), outer.support_max()) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b,
    }
}

fn b_ge(x: f64, y: f64) -> bool {
    x >= y || (x.is_finite() && y.is_finite() && within(x - y, x.abs().max(y.abs())))
}

fn lc_le_by_b(w: &WSequence, w2: &WSequence, s_max: usize) -> Result<bool> {
    if !support_within(w, w2) {
        return Ok(false);
    }
    let last = match w.support_max() {
        Some(m) => s_max.min(m.saturating_sub(1)),
        None => s_max,
    };
    for s in 2..=last {
        if !b_ge(b_sequence(w, s)?, b_sequence(w2, s)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Relative log-concavity compared through B-sequences: `Less` means `w ≤_lc w2`,
/// i.e. `B_s(w) >= B_s(w2)` for every checked `s` and `supp(w) ⊆ supp(w2)`.
pub fn lc_compare(w: &WSequence, w2: &WSequence, s_max: usize) -> Result<OrderResult> {
    let le = lc_le_by_b(w, w2, s_max)?;
    let ge = lc_le_by_b(w2, w, s_max)?;
    Ok(match (le, ge) {
        (true, true) => OrderResult::Equal,
        (true, false) => OrderResult::Less,
        (false, true) => OrderResult::Greater,
        (false, false) => OrderResult::Incomparable,
    })
}

/// `w ≤_lc w2` straight from the definition: support containment and
/// concavity of `log(W_s / W2_s)` on the support of `w`, for `s < s_max`.
pub fn relative_log_concave(w: &WSequence, w2: &WSequence, s_max: usize) -> bool {
    if !support_within(w, w2) {
        return false;
    }
    let last = match w.support_max() {
        Some(m) => s_max.min(m.saturating_sub(1)),
        None => s_max,
    };
    let h = |s: usize| w.log_w(s) - w2.log_w(s);
    (2..=last).all(|s| {
        let d2 = h(s + 1) - 2.0 * h(s) + h(s - 1);
        let scale = h(s + 1).abs().max(h(s).abs());
        d2 <= 0.0 || d2.abs() <= CLASSIFY_TOL * scale.max(1.0) * 4.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gibbs::GibbsModel;

    #[test]
    fn classify_examples() {
        let pyp = WSequence::Gamma { sigma: 0.8 };
        assert_eq!(classify_balance(&pyp, DEFAULT_HORIZON).unwrap().kind, Balance::Averse);
        let unit = WSequence::Unit;
        let c = classify_balance(&unit, DEFAULT_HORIZON).unwrap();
        assert_eq!(c.kind, Balance::Neutral);
        assert_eq!(c.horizon, DEFAULT_HORIZON);
        assert!(classify_balance(&unit, 2).is_err());
    }

    #[test]
    fn classify_tables() {
        // log-concave, finite support
        let seeking = WSequence::from_values(&[1.0, 3.0, 4.0, 2.0], true).unwrap();
        assert_eq!(classify_balance(&seeking, 10).unwrap().kind, Balance::Seeking);
        // internal zero spoils log-concavity
        let holed = WSequence::from_values(&[1.0, 1.0, 0.0, 1.0], true).unwrap();
        let c = classify_balance(&holed, 10).unwrap();
        assert_eq!(c.kind, Balance::Neither);
        // mixed curvature
        let mixed = WSequence::from_values(&[1.0, 2.0, 3.0, 10.0, 20.0], false).unwrap();
        let c = classify_balance(&mixed, 50).unwrap();
        assert_eq!(c.kind, Balance::Neither);
        assert_eq!(c.averse_failure, Some(2));
        assert_eq!(c.seeking_failure, Some(3));
        assert_eq!(c.horizon, 5);
    }

    #[test]
    fn b_sequence_examples() {
        let crp = WSequence::Gamma { sigma: 0.0 };
        assert!((b_sequence(&crp, 2).unwrap() + 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!(b_sequence(&crp, 1).is_err());
        let finite = WSequence::from_values(&[1.0, 2.0, 2.0], true).unwrap();
        assert_eq!(b_sequence(&finite, 3).unwrap(), f64::INFINITY);
        let holed = WSequence::from_values(&[1.0, 0.0, 1.0], true).unwrap();
        assert!(matches!(b_sequence(&holed, 2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn lc_compare_follows_b_sequences() {
        let pyp = WSequence::Gamma { sigma: 0.8 };
        let crp = WSequence::Gamma { sigma: 0.0 };
        let dm = WSequence::Gamma { sigma: -1.0 };
        let half = WSequence::Gamma { sigma: 0.5 };
        // B(CRP) >= B(PYP), so CRP ≤_lc PYP
        assert_eq!(lc_compare(&crp, &pyp, 50).unwrap(), OrderResult::Less);
        assert_eq!(lc_compare(&pyp, &crp, 50).unwrap(), OrderResult::Greater);
        assert_eq!(lc_compare(&half, &dm, 50).unwrap(), OrderResult::Greater);
        assert_eq!(lc_compare(&pyp, &pyp, 50).unwrap(), OrderResult::Equal);
        let mixed = WSequence::from_values(&[1.0, 2.0, 3.0, 10.0, 20.0], false).unwrap();
        assert_eq!(lc_compare(&mixed, &crp, 4).unwrap(), OrderResult::Incomparable);
    }

    #[test]
    fn brute_force_trivial_cases() {
        let crp = GibbsModel::crp(1.0).unwrap();
        assert_eq!(brute_force_balance_check(&crp, 1).unwrap().kind, Balance::Neutral);
        assert_eq!(brute_force_balance_check(&crp, 8).unwrap().kind, Balance::Averse);
        assert!(brute_force_balance_check(&crp, 11).is_err());
    }
}
