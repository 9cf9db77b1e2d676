use crate::error::{domain, Error, Result};
use crate::numeric::{ln_binomial, ln_factorial, ln_rising};
use serde::{Deserialize, Serialize};

/// Cluster-size distributions on `{1, 2, ..}` driving an ESC model.
///
/// Negative-binomial and logarithmic `p` multiply `s` in the pmf, so
/// `μ_{s+1}/μ_s` grows with `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MuFamily {
    /// `1 + Binomial(N, p)`, support `1..=N+1`.
    ShiftedBinomial { trials: usize, p: f64 },
    /// Binomial conditioned on `>= 1`, support `1..=N`.
    ZtBinomial { trials: usize, p: f64 },
    ZtPoisson { lambda: f64 },
    /// Engen's extended negative binomial, `r > -1`, `r != 0`.
    ZtNegBinomial { r: f64, p: f64 },
    Logarithmic { p: f64 },
    /// `μ_s = p (1-p)^{s-1}`: the `r = 1` negative binomial, kept separate so
    /// that its normalizer is `p` itself.
    Geometric { p: f64 },
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        domain(format!("p = {p} outside (0, 1)"))
    }
}

/// `ln(1 - (1-p)^a)` and its sign, for `a != 0`.
pub(crate) fn ln_one_minus_pow(p: f64, a: f64) -> (f64, bool) {
    let v = -(a * (-p).ln_1p()).exp_m1();
    (v.abs().ln(), v < 0.0)
}

impl MuFamily {
    pub fn geometric(p: f64) -> Result<Self> {
        check_p(p)?;
        Ok(MuFamily::Geometric { p })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MuFamily::ShiftedBinomial { trials, p } | MuFamily::ZtBinomial { trials, p } => {
                if trials == 0 {
                    return domain("number of trials must be >= 1");
                }
                check_p(p)
            }
            MuFamily::ZtPoisson { lambda } => {
                if lambda > 0.0 && lambda.is_finite() {
                    Ok(())
                } else {
                    domain(format!("λ = {lambda} must be positive"))
                }
            }
            MuFamily::ZtNegBinomial { r, p } => {
                if !(r > -1.0) || r == 0.0 || !r.is_finite() {
                    return domain(format!("r = {r} must satisfy r > -1, r != 0"));
                }
                check_p(p)
            }
            MuFamily::Logarithmic { p } | MuFamily::Geometric { p } => check_p(p),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MuFamily::ShiftedBinomial { .. } => "shifted-binomial",
            MuFamily::ZtBinomial { .. } => "zt-binomial",
            MuFamily::ZtPoisson { .. } => "zt-poisson",
            MuFamily::ZtNegBinomial { .. } => "zt-neg-binomial",
            MuFamily::Logarithmic { .. } => "logarithmic",
            MuFamily::Geometric { .. } => "geometric",
        }
    }

    /// Largest `s` with `μ_s > 0`, if finite.
    pub fn support_max(&self) -> Option<usize> {
        match *self {
            MuFamily::ShiftedBinomial { trials, .. } => Some(trials + 1),
            MuFamily::ZtBinomial { trials, .. } => Some(trials),
            _ => None,
        }
    }

    fn in_support(&self, s: usize) -> bool {
        s >= 1 && self.support_max().is_none_or(|m| s <= m)
    }

    pub fn log_pmf(&self, s: usize) -> f64 {
        if !self.in_support(s) {
            return f64::NEG_INFINITY;
        }
        let sf = s as f64;
        match *self {
            MuFamily::ShiftedBinomial { trials, p } => {
                ln_binomial(trials, s - 1) + (sf - 1.0) * p.ln() + (trials + 1 - s) as f64 * (-p).ln_1p()
            }
            MuFamily::ZtBinomial { trials, p } => {
                ln_binomial(trials, s) + sf * p.ln() + (trials - s) as f64 * (-p).ln_1p()
                    - ln_one_minus_pow(p, trials as f64).0
            }
            MuFamily::ZtPoisson { lambda } => sf * lambda.ln() - ln_factorial(s) - lambda.exp_m1().ln(),
            MuFamily::ZtNegBinomial { r, p } => {
                // C(s+r-1, s) = r (r+1)..(r+s-1) / s!, negative together with the normalizer when r < 0
                r.abs().ln() + ln_rising(r + 1.0, s - 1) - ln_factorial(s) + r * (-p).ln_1p() + sf * p.ln()
                    - ln_one_minus_pow(p, r).0
            }
            MuFamily::Logarithmic { p } => sf * p.ln() - sf.ln() - (-(-p).ln_1p()).ln(),
            MuFamily::Geometric { p } => p.ln() + (sf - 1.0) * (-p).ln_1p(),
        }
    }

    pub fn pmf(&self, s: usize) -> f64 {
        self.log_pmf(s).exp()
    }

    /// `log W_s` with `W_s = s! μ_s / μ_1`.
    pub fn log_w(&self, s: usize) -> f64 {
        if s == 1 {
            return 0.0;
        }
        if !self.in_support(s) {
            return f64::NEG_INFINITY;
        }
        let sf = s as f64;
        match *self {
            MuFamily::ShiftedBinomial { trials, p } => {
                ln_factorial(s) + ln_binomial(trials, s - 1) + (sf - 1.0) * log_odds(p)
            }
            MuFamily::ZtBinomial { trials, p } => {
                ln_factorial(trials) - ln_factorial(trials - s) - (trials as f64).ln()
                    + (sf - 1.0) * log_odds(p)
            }
            MuFamily::ZtPoisson { lambda } => (sf - 1.0) * lambda.ln(),
            MuFamily::ZtNegBinomial { r, p } => ln_rising(r + 1.0, s - 1) + (sf - 1.0) * p.ln(),
            MuFamily::Logarithmic { p } => ln_factorial(s - 1) + (sf - 1.0) * p.ln(),
            MuFamily::Geometric { p } => ln_factorial(s) + (sf - 1.0) * (-p).ln_1p(),
        }
    }

    /// `log(W_{s+1}/W_s)`: `-inf` at the support boundary, NaN past it.
    pub fn log_w_ratio(&self, s: usize) -> f64 {
        if !self.in_support(s) {
            return f64::NAN;
        }
        if !self.in_support(s + 1) {
            return f64::NEG_INFINITY;
        }
        let sf = s as f64;
        match *self {
            MuFamily::ShiftedBinomial { trials, p } => {
                ((sf + 1.0) / sf).ln() + ((trials + 1 - s) as f64).ln() + log_odds(p)
            }
            MuFamily::ZtBinomial { trials, p } => ((trials - s) as f64).ln() + log_odds(p),
            MuFamily::ZtPoisson { lambda } => lambda.ln(),
            MuFamily::ZtNegBinomial { r, p } => (sf + r).ln() + p.ln(),
            MuFamily::Logarithmic { p } => sf.ln() + p.ln(),
            MuFamily::Geometric { p } => (sf + 1.0).ln() + (-p).ln_1p(),
        }
    }

    /// Parses `sbinom:N,p`, `ztbinom:N,p`, `ztpois:λ`, `ztnb:r,p`, `geom:p`, `log:p`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, args) = spec
            .split_once(':')
            .ok_or_else(|| Error::Domain(format!("μ spec '{spec}' needs name:params")))?;
        let nums: Vec<&str> = args.split(',').map(str::trim).collect();
        let real = |i: usize| -> Result<f64> {
            nums.get(i)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| Error::Domain(format!("bad parameter {} in '{spec}'", i + 1)))
        };
        let count = |i: usize| -> Result<usize> {
            nums.get(i)
                .and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| Error::Domain(format!("bad trial count in '{spec}'")))
        };
        let want = |k: usize| -> Result<()> {
            if nums.len() == k {
                Ok(())
            } else {
                domain(format!("'{name}' takes {k} parameter(s), got {}", nums.len()))
            }
        };
        let mu = match name {
            "sbinom" => {
                want(2)?;
                MuFamily::ShiftedBinomial { trials: count(0)?, p: real(1)? }
            }
            "ztbinom" => {
                want(2)?;
                MuFamily::ZtBinomial { trials: count(0)?, p: real(1)? }
            }
            "ztpois" => {
                want(1)?;
                MuFamily::ZtPoisson { lambda: real(0)? }
            }
            "ztnb" => {
                want(2)?;
                MuFamily::ZtNegBinomial { r: real(0)?, p: real(1)? }
            }
            "geom" => {
                want(1)?;
                MuFamily::Geometric { p: real(0)? }
            }
            "log" => {
                want(1)?;
                MuFamily::Logarithmic { p: real(0)? }
            }
            _ => return domain(format!("unknown μ family '{name}'")),
        };
        mu.validate()?;
        Ok(mu)
    }
}

fn log_odds(p: f64) -> f64 {
    p.ln() - (-p).ln_1p()
}

/// A cluster-size pmf given by its first terms, for families without a
/// closed-form normalizer. Only balance classification uses it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawPmf {
    /// `μ_1, μ_2, ..`.
    pub mu: Vec<f64>,
    /// True when `μ_s = 0` past the table, false when the table is a truncation.
    pub finite_support: bool,
}

impl RawPmf {
    pub fn new(mu: Vec<f64>, finite_support: bool) -> Result<Self> {
        if mu.first().is_none_or(|&m| !(m > 0.0)) {
            return domain("μ_1 must be positive");
        }
        if mu.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return domain("pmf entries must be finite and nonnegative");
        }
        Ok(Self { mu, finite_support })
    }

    /// Zero-truncated Conway-Maxwell-Poisson, `μ_s ∝ λ^s / (s!)^ν`, truncated at `s_max`.
    pub fn cmp_plus(lambda: f64, nu: f64, s_max: usize) -> Result<Self> {
        if !(lambda > 0.0) || !(nu >= 0.0) {
            return domain("CMP needs λ > 0 and ν >= 0");
        }
        let logs: Vec<f64> = (1..=s_max)
            .map(|s| s as f64 * lambda.ln() - nu * ln_factorial(s))
            .collect();
        Self::new(normalized(&logs), false)
    }

    /// Zero-truncated hypergeometric: successes among `draws` from a population
    /// of `population` holding `successes` marked items.
    pub fn hypergeometric_plus(population: usize, successes: usize, draws: usize) -> Result<Self> {
        if successes > population || draws > population || successes == 0 || draws == 0 {
            return domain("hypergeometric needs 1 <= K, n <= N");
        }
        let top = successes.min(draws);
        let logs: Vec<f64> = (1..=top)
            .map(|s| {
                if draws - s > population - successes {
                    f64::NEG_INFINITY
                } else {
                    ln_binomial(successes, s) + ln_binomial(population - successes, draws - s)
                }
            })
            .collect();
        Self::new(normalized(&logs), true)
    }

    pub fn log_w_table(&self) -> Vec<f64> {
        let l1 = self.mu[0].ln();
        self.mu
            .iter()
            .enumerate()
            .map(|(i, m)| if i == 0 { 0.0 } else { ln_factorial(i + 1) + m.ln() - l1 })
            .collect()
    }
}

fn normalized(logs: &[f64]) -> Vec<f64> {
    let lse = crate::numeric::log_sum_exp(logs);
    logs.iter().map(|l| (l - lse).exp()).collect()
}
