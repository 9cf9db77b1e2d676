use crate::error::{domain, Result};
use crate::esc::MuFamily;
use crate::numeric::ln_gamma;

/// The `W` half of a Gibbs EPPF, exposed through `log W_s` for `s >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum WSequence {
    /// `W_s = Γ(s - σ) / Γ(1 - σ)` for finite `σ < 1`.
    Gamma { sigma: f64 },
    /// `W_s ≡ 1`.
    Unit,
    /// `W_s = s! μ_s / μ_1` of an ESC model.
    Esc(MuFamily),
    /// Explicit `log W_1, .., log W_m`. Past `m` the sequence is zero when
    /// `finite_support` holds and unknown otherwise.
    Table {
        log_w: Vec<f64>,
        finite_support: bool,
    },
}

impl WSequence {
    pub fn table(log_w: Vec<f64>, finite_support: bool) -> Result<Self> {
        match log_w.first() {
            Some(&w1) if w1 == 0.0 => {}
            _ => return domain("a W table must start with log W_1 = 0"),
        }
        if log_w.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return domain("W table entries must be finite or -inf");
        }
        Ok(WSequence::Table {
            log_w,
            finite_support,
        })
    }

    /// Builds a table from `W_s` values on the linear scale.
    pub fn from_values(w: &[f64], finite_support: bool) -> Result<Self> {
        if w.iter().any(|&v| v < 0.0) {
            return domain("W values must be nonnegative");
        }
        Self::table(w.iter().map(|v| v.ln()).collect(), finite_support)
    }

    pub fn log_w(&self, s: usize) -> f64 {
        assert!(s >= 1, "W is indexed from 1");
        match self {
            WSequence::Gamma { sigma } => ln_gamma(s as f64 - sigma) - ln_gamma(1.0 - sigma),
            WSequence::Unit => 0.0,
            WSequence::Esc(mu) => mu.log_w(s),
            WSequence::Table {
                log_w,
                finite_support,
            } => match log_w.get(s - 1) {
                Some(&v) => v,
                None if *finite_support => f64::NEG_INFINITY,
                None => f64::NAN,
            },
        }
    }

    /// `log(W_{s+1} / W_s)`; `-inf` when `W_{s+1} = 0`, NaN when `W_s = 0`.
    pub fn log_ratio(&self, s: usize) -> f64 {
        match self {
            WSequence::Gamma { sigma } => (s as f64 - sigma).ln(),
            WSequence::Unit => 0.0,
            WSequence::Esc(mu) => mu.log_w_ratio(s),
            WSequence::Table { .. } => {
                let (a, b) = (self.log_w(s), self.log_w(s + 1));
                if a == f64::NEG_INFINITY {
                    f64::NAN
                } else {
                    b - a
                }
            }
        }
    }

    /// Largest `s` with `W_s > 0` when the support is finite.
    pub fn support_max(&self) -> Option<usize> {
        match self {
            WSequence::Gamma { .. } | WSequence::Unit => None,
            WSequence::Esc(mu) => mu.support_max(),
            WSequence::Table {
                log_w,
                finite_support,
            } => {
                if *finite_support {
                    Some(
                        log_w
                            .iter()
                            .rposition(|v| *v > f64::NEG_INFINITY)
                            .map_or(1, |i| i + 1),
                    )
                } else {
                    None
                }
            }
        }
    }

    /// Largest `s` at which `W_s` is known (`None` for analytic sequences).
    pub fn known_horizon(&self) -> Option<usize> {
        match self {
            WSequence::Table {
                log_w,
                finite_support: false,
            } => Some(log_w.len()),
            _ => None,
        }
    }
}
