//! `pb er`: synthetic data, MCMC fits and linkage evaluation.

use crate::config::{Params, Run};
use crate::model::MuSpec;
use crate::Failure;
use clap::Args;
use partition_balance::er::{
    generate_synthetic, run_chains, uniform_theta, ErDataset, ErSummary, McmcConfig, Moments, PartitionPrior, Scenario,
};
use partition_balance::er::fnr_fdr;
use partition_balance::esc::MuFamily;
use partition_balance::gibbs::{GibbsModel, MixingDistribution};
use partition_balance::SetPartition;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::path::{Path, PathBuf};

fn is_false(b: &bool) -> bool {
    !*b
}

fn read_dataset(path: &Path) -> Result<ErDataset, Failure> {
    let file = File::open(path).map_err(|e| Failure::config(format!("key `data`: {}: {e}", path.display())))?;
    Ok(ErDataset::read_csv(file)?)
}

#[derive(Args, Serialize)]
pub struct SimulateArgs {
    /// Preset cluster-size scenario 1, 2 or 3.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    scenario: Option<usize>,
    /// Cluster counts m_1,m_2,.. (m_s clusters of size s).
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<Vec<usize>>,
    /// Cluster-size law; counts are round(scale · μ_s).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    scale: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    fields: Option<usize>,
    /// Categories per field, drawn uniformly.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    categories: Option<usize>,
    /// Distortion probability, one value or one per field.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scenario: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    counts: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<MuSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<f64>,
    #[serde(default = "default_fields")]
    fields: usize,
    #[serde(default = "default_categories")]
    categories: usize,
    #[serde(default = "default_beta")]
    beta: Vec<f64>,
    #[serde(default = "default_seed")]
    seed: u64,
}

fn default_fields() -> usize {
    5
}

fn default_categories() -> usize {
    10
}

fn default_beta() -> Vec<f64> {
    vec![0.01]
}

fn default_seed() -> u64 {
    1
}

impl SimulateParams {
    fn scenario(&self) -> Result<Scenario, Failure> {
        if self.scale.is_some() && self.mu.is_none() {
            return Err(Failure::config("key `scale` needs `mu`"));
        }
        match (self.scenario, &self.counts, &self.mu) {
            (Some(i), None, None) => Ok(Scenario::preset(i)?),
            (None, Some(c), None) => Ok(Scenario::from_counts(c.clone())?),
            (None, None, Some(mu)) => Ok(Scenario::from_mu(&mu.resolve()?, self.scale.unwrap_or(100.0))?),
            (None, None, None) => Err(Failure::config("give one of `scenario`, `counts` or `mu`")),
            _ => Err(Failure::config("keys `scenario`, `counts` and `mu` are exclusive")),
        }
    }

    fn betas(&self) -> Result<Vec<f64>, Failure> {
        match self.beta.len() {
            1 => Ok(vec![self.beta[0]; self.fields]),
            l if l == self.fields => Ok(self.beta.clone()),
            l => Err(Failure::config(format!("key `beta`: {l} values for {} fields", self.fields))),
        }
    }
}

pub fn simulate(config: Option<&Path>, out: &Path, args: &SimulateArgs) -> Result<(), Failure> {
    let mut params = Params::resolve(config, args)?;
    params.apply_seed_env()?;
    let p: SimulateParams = params.parse()?;
    if p.fields == 0 || p.categories == 0 {
        return Err(Failure::config("keys `fields` and `categories` must be positive"));
    }
    let scenario = p.scenario()?;
    let data = generate_synthetic(&scenario, &uniform_theta(p.fields, p.categories), &p.betas()?, p.seed)?;
    let mut csv = Vec::new();
    data.write_csv(&mut csv)?;
    let mut run = Run::new(out, "er simulate")?;
    run.write("dataset.csv", "dataset", &csv)?;
    run.finish(&p)?;
    println!("{} records of {} entities", data.n(), scenario.n_clusters());
    Ok(())
}

#[derive(Args, Serialize)]
pub struct FitArgs {
    /// Dataset CSV; a `truth` column enables FNR/FDR in the summary.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<PathBuf>,
    /// ESC prior as a μ spec (sbinom:N,p ..), or a fixed Gibbs prior:
    /// crp:θ, pyp:σ,θ, neutral:<q>.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    prior: Option<String>,
    /// Keep the ESC μ parameters at their starting values.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    fix_mu: bool,
    /// Independent chains, run in parallel and pooled.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    chains: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    burn_in: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    thin: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Use chaperones moves instead of full Gibbs sweeps over z.
    #[arg(long)]
    #[serde(rename = "use_chaperones", skip_serializing_if = "is_false")]
    chaperones: bool,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    chaperone_moves: Option<usize>,
    /// uniform or agreement.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pair_proposal: Option<String>,
    /// singletons or exact-duplicates.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    init: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum PriorSpec {
    Text(String),
    Mu(MuFamily),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FitParams {
    data: PathBuf,
    prior: PriorSpec,
    #[serde(default)]
    fix_mu: bool,
    #[serde(default = "default_chains")]
    chains: usize,
}

fn default_chains() -> usize {
    1
}

const FIT_KEYS: &[&str] = &["data", "prior", "fix_mu", "chains"];

fn parse_reals(spec: &str, args: &str, k: usize) -> Result<Vec<f64>, Failure> {
    let v: Vec<f64> = args
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::config(format!("key `prior`: bad number in '{spec}'")))?;
    if v.len() != k {
        return Err(Failure::config(format!("key `prior`: '{spec}' needs {k} parameter(s)")));
    }
    Ok(v)
}

fn build_prior(spec: &PriorSpec, fix_mu: bool) -> Result<PartitionPrior, Failure> {
    let gibbs = |g: GibbsModel| {
        if fix_mu {
            Err(Failure::config("key `fix_mu` applies only to ESC priors"))
        } else {
            Ok(PartitionPrior::Gibbs(g))
        }
    };
    let mu = match spec {
        PriorSpec::Mu(mu) => mu.clone(),
        PriorSpec::Text(s) => {
            if let Some(q) = s.strip_prefix("neutral:") {
                return gibbs(GibbsModel::neutral(MixingDistribution::parse(q)?)?);
            }
            if let Some(a) = s.strip_prefix("crp:") {
                return gibbs(GibbsModel::crp(parse_reals(s, a, 1)?[0])?);
            }
            if let Some(a) = s.strip_prefix("pyp:") {
                let v = parse_reals(s, a, 2)?;
                return gibbs(GibbsModel::two_parameter(v[0], v[1])?);
            }
            MuFamily::parse(s)?
        }
    };
    mu.validate()?;
    Ok(PartitionPrior::Esc { mu, fixed: fix_mu })
}

/// Contents of `summary.json`.
#[derive(Serialize, Deserialize)]
struct FitReport {
    records: usize,
    #[serde(flatten)]
    summary: ErSummary,
}

#[derive(Serialize)]
struct ResolvedFit<'a> {
    #[serde(flatten)]
    fit: &'a FitParams,
    #[serde(flatten)]
    mcmc: &'a McmcConfig,
}

pub fn fit(config: Option<&Path>, out: &Path, args: &FitArgs) -> Result<(), Failure> {
    let mut params = Params::resolve(config, args)?;
    params.apply_seed_env()?;
    let fit_params = params.split_off(FIT_KEYS);
    for key in ["data", "prior"] {
        if !fit_params.contains(key) {
            return Err(Failure::config(format!("missing key `{key}`")));
        }
    }
    // remaining keys must be sampler settings; serde names any stray one
    let mcmc: McmcConfig = params.parse()?;
    let p: FitParams = fit_params.parse()?;
    mcmc.validate()?;
    let prior = build_prior(&p.prior, p.fix_mu)?;
    let data = read_dataset(&p.data)?;
    let result = run_chains(&data, &prior, &mcmc, p.chains)?;
    let summary = result.summary(data.truth())?;

    let mut run = Run::new(out, "er fit")?;
    let mut trace = Vec::new();
    result.write_trace_csv(&mut trace).map_err(|e| Failure::other(e.to_string()))?;
    run.write("trace.csv", "trace", &trace)?;
    if let Some(labels) = &summary.point_estimate {
        let mut csv = String::from("record,cluster\n");
        for (i, l) in labels.iter().enumerate() {
            csv += &format!("{},{l}\n", i + 1);
        }
        run.write("point_estimate.csv", "point-estimate", csv.as_bytes())?;
    }
    let report = FitReport {
        records: data.n(),
        summary,
    };
    run.write_json("summary.json", "summary", &report)?;
    run.finish(&ResolvedFit { fit: &p, mcmc: &mcmc })?;

    let k = report.summary.k_plus;
    print!("K+ posterior mean {:.2} (sd {:.2})", k.mean, k.sd);
    if let Some(m) = report.summary.metrics {
        print!(", FNR {:.4}, FDR {:.4}", m.fnr, m.fdr);
    }
    println!();
    Ok(())
}

#[derive(Args, Serialize)]
pub struct EvalArgs {
    /// Dataset CSV with a `truth` column.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<PathBuf>,
    /// Estimate as a `record,cluster` CSV.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    estimate: Option<PathBuf>,
    /// summary.json of a fit; supplies the posterior K+ and, without
    /// `--estimate`, the point estimate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalParams {
    data: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    estimate: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    summary: Option<PathBuf>,
}

#[derive(Serialize)]
struct EvalReport {
    records: usize,
    true_clusters: usize,
    estimated_clusters: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_plus: Option<Moments>,
    correct: u64,
    missed: u64,
    wrong: u64,
    fnr: f64,
    fdr: f64,
}

fn read_estimate(path: &Path, n: usize) -> Result<SetPartition, Failure> {
    let bad = |msg: String| Failure::config(format!("key `estimate`: {}: {msg}", path.display()));
    let file = File::open(path).map_err(|e| bad(e.to_string()))?;
    let mut labels: Vec<Option<usize>> = vec![None; n];
    for rec in csv::Reader::from_reader(file).records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| rec.get(i).and_then(|v| v.trim().parse::<usize>().ok());
        let (Some(r), Some(c)) = (num(0), num(1)) else {
            return Err(bad(format!("bad row {:?}", rec.iter().collect::<Vec<_>>())));
        };
        if r == 0 || r > n {
            return Err(bad(format!("record {r} outside 1..={n}")));
        }
        labels[r - 1] = Some(c);
    }
    let labels: Vec<usize> = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| bad(format!("record {} has no cluster", i + 1))))
        .collect::<Result<_, _>>()?;
    Ok(SetPartition::from_labels(&labels))
}

pub fn eval(config: Option<&Path>, out: &Path, args: &EvalArgs) -> Result<(), Failure> {
    let p: EvalParams = Params::resolve(config, args)?.parse()?;
    let data = read_dataset(&p.data)?;
    let truth = data
        .truth()
        .ok_or_else(|| Failure::config(format!("{} has no `truth` column", p.data.display())))?;
    let fit: Option<FitReport> = match &p.summary {
        Some(path) => {
            let file = File::open(path).map_err(|e| Failure::config(format!("key `summary`: {}: {e}", path.display())))?;
            Some(
                serde_json::from_reader(file)
                    .map_err(|e| Failure::config(format!("key `summary`: {}: {e}", path.display())))?,
            )
        }
        None => None,
    };
    let estimate = match (&p.estimate, &fit) {
        (Some(path), _) => read_estimate(path, data.n())?,
        (None, Some(f)) => match &f.summary.point_estimate {
            Some(labels) if labels.len() == data.n() => SetPartition::from_labels(labels),
            Some(labels) => {
                return Err(Failure::config(format!(
                    "summary estimate has {} records, data {}",
                    labels.len(),
                    data.n()
                )))
            }
            None => return Err(Failure::config("summary has no point estimate")),
        },
        (None, None) => return Err(Failure::config("give `estimate` or `summary`")),
    };
    let m = fnr_fdr(&estimate, truth)?;
    let report = EvalReport {
        records: data.n(),
        true_clusters: truth.n_blocks(),
        estimated_clusters: estimate.n_blocks(),
        k_plus: fit.map(|f| f.summary.k_plus),
        correct: m.correct,
        missed: m.missed,
        wrong: m.wrong,
        fnr: m.fnr,
        fdr: m.fdr,
    };
    let mut run = Run::new(out, "er eval")?;
    run.write_json("report.json", "report", &report)?;
    run.finish(&p)?;
    println!("FNR {:.4}, FDR {:.4}", m.fnr, m.fdr);
    Ok(())
}
