//! Partition model specifications shared by the analysis commands.

use crate::Failure;
use partition_balance::esc::{EscModel, MuFamily};
use partition_balance::gibbs::{GibbsModel, MixingDistribution, WSequence};
use partition_balance::Eppf;
use serde::{Deserialize, Serialize};

/// Keys a model specification may use.
pub const MODEL_KEYS: &[&str] = &["model", "theta", "sigma", "components", "gamma", "q", "mu"];

/// A `μ` given either as `family:params` text or as a `family` tagged object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSpec {
    Text(String),
    Family(MuFamily),
}

impl MuSpec {
    pub fn resolve(&self) -> Result<MuFamily, Failure> {
        let mu = match self {
            MuSpec::Text(s) => MuFamily::parse(s)?,
            MuSpec::Family(mu) => mu.clone(),
        };
        mu.validate()?;
        Ok(mu)
    }
}

/// A mixing distribution over `K`, as `name:arg` text or a `kind` tagged object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MixingSpec {
    Text(String),
    Dist(MixingDistribution),
}

impl MixingSpec {
    pub fn resolve(&self) -> Result<MixingDistribution, Failure> {
        let q = match self {
            MixingSpec::Text(s) => MixingDistribution::parse(s)?,
            MixingSpec::Dist(q) => q.clone(),
        };
        q.validate()?;
        Ok(q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<MixingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<MuSpec>,
}

pub enum Model {
    Gibbs(GibbsModel),
    Esc(EscModel),
}

impl Model {
    pub fn eppf(&self) -> &dyn Eppf {
        match self {
            Model::Gibbs(g) => g,
            Model::Esc(e) => e,
        }
    }

    pub fn w(&self) -> WSequence {
        match self {
            Model::Gibbs(g) => g.w().clone(),
            Model::Esc(e) => WSequence::Esc(e.mu().clone()),
        }
    }
}

fn need<T: Copy>(v: Option<T>, key: &str, model: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::config(format!("model `{model}` needs key `{key}`")))
}

impl ModelSpec {
    /// Keys each model reads; anything else set is an error.
    fn used_keys(&self) -> Result<&'static [&'static str], Failure> {
        Ok(match self.model.as_str() {
            "crp" => &["theta"],
            "pyp" | "two-parameter" => &["sigma", "theta"],
            "dm" => &["components", "gamma"],
            "coupon" => &["components"],
            "neutral" => &["q"],
            "mfm" => &["q", "gamma"],
            "esc" => &["mu"],
            other => {
                return Err(Failure::config(format!(
                    "key `model`: unknown model '{other}' (crp, pyp, two-parameter, dm, coupon, neutral, mfm, esc)"
                )))
            }
        })
    }

    fn check_unused(&self) -> Result<(), Failure> {
        let used = self.used_keys()?;
        let set = [
            ("theta", self.theta.is_some()),
            ("sigma", self.sigma.is_some()),
            ("components", self.components.is_some()),
            ("gamma", self.gamma.is_some()),
            ("q", self.q.is_some()),
            ("mu", self.mu.is_some()),
        ];
        match set.iter().find(|(k, on)| *on && !used.contains(k)) {
            Some((k, _)) => Err(Failure::config(format!("key `{k}` does not apply to model `{}`", self.model))),
            None => Ok(()),
        }
    }

    /// Builds the model; ESC normalizers are cached up to `n_max`.
    pub fn build(&self, n_max: usize) -> Result<Model, Failure> {
        self.check_unused()?;
        let m = self.model.as_str();
        Ok(match m {
            "crp" => Model::Gibbs(GibbsModel::crp(need(self.theta, "theta", m)?)?),
            "pyp" | "two-parameter" => Model::Gibbs(GibbsModel::two_parameter(
                need(self.sigma, "sigma", m)?,
                need(self.theta, "theta", m)?,
            )?),
            "dm" => Model::Gibbs(GibbsModel::dirichlet_multinomial(
                need(self.components, "components", m)?,
                need(self.gamma, "gamma", m)?,
            )?),
            "coupon" => {
                let k = need(self.components, "components", m)?;
                if k == 0 {
                    return Err(Failure::config("key `components` must be at least 1"));
                }
                Model::Gibbs(GibbsModel::coupon_collector(k))
            }
            "neutral" => Model::Gibbs(GibbsModel::neutral(self.mixing()?)?),
            "mfm" => Model::Gibbs(GibbsModel::mfm(self.mixing()?, need(self.gamma, "gamma", m)?)?),
            "esc" => {
                let mu = self
                    .mu
                    .as_ref()
                    .ok_or_else(|| Failure::config("model `esc` needs key `mu`"))?
                    .resolve()?;
                Model::Esc(EscModel::new(mu, n_max)?)
            }
            _ => unreachable!("checked by used_keys"),
        })
    }

    fn mixing(&self) -> Result<MixingDistribution, Failure> {
        self.q
            .as_ref()
            .ok_or_else(|| Failure::config(format!("model `{}` needs key `q`", self.model)))?
            .resolve()
    }
}

/// A `W` sequence in compact form: `unit`, `pyp:σ` (also `gamma:σ`), or a `μ` spec.
pub fn parse_w(spec: &str) -> Result<WSequence, Failure> {
    if spec == "unit" {
        return Ok(WSequence::Unit);
    }
    if let Some(arg) = spec.strip_prefix("pyp:").or_else(|| spec.strip_prefix("gamma:")) {
        let sigma: f64 = arg
            .trim()
            .parse()
            .map_err(|_| Failure::config(format!("bad σ in W spec '{spec}'")))?;
        if !(sigma < 1.0) || !sigma.is_finite() {
            return Err(Failure::config(format!("W spec '{spec}' needs finite σ < 1")));
        }
        return Ok(WSequence::Gamma { sigma });
    }
    Ok(WSequence::Esc(MuFamily::parse(spec)?))
}
