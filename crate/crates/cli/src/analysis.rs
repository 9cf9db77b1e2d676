//! Commands on a single partition model or W sequence.

use crate::config::{Params, Run};
use crate::model::{parse_w, ModelSpec, MODEL_KEYS};
use crate::Failure;
use clap::Args;
use partition_balance::gibbs::{
    b_sequence_up_to, brute_force_balance_check, check_projectivity, classify_balance, eppf_spectrum,
    lc_compare, spectrum_total, write_spectrum_csv, BalanceClass, BRUTE_FORCE_LIMIT, DEFAULT_HORIZON,
};
use partition_balance::numeric::fmt_real;
use partition_balance::OrderResult;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Args, Serialize, Default)]
pub struct ModelArgs {
    /// crp, pyp (two-parameter), dm, coupon, neutral, mfm or esc.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
    /// Number of components K (dm, coupon).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    components: Option<usize>,
    /// Symmetric Dirichlet weight (dm, mfm).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    /// Mixing law of K: point:K or shifted-poisson:λ.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<String>,
    /// Cluster-size law: sbinom:N,p  ztbinom:N,p  ztpois:λ  ztnb:r,p  geom:p  log:p.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<String>,
}

fn load<T: DeserializeOwned>(config: Option<&Path>, flags: &impl Serialize, keys: &[&str]) -> Result<T, Failure> {
    let params = Params::resolve(config, flags)?;
    let allowed: Vec<&str> = MODEL_KEYS.iter().chain(keys).copied().collect();
    params.check_keys(&allowed)?;
    params.parse()
}

#[derive(Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    /// Number of items, at most 13.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumParams {
    #[serde(flatten)]
    model: ModelSpec,
    n: usize,
}

pub fn spectrum(config: Option<&Path>, out: &Path, args: &SpectrumArgs) -> Result<(), Failure> {
    let p: SpectrumParams = load(config, args, &["n"])?;
    let model = p.model.build(p.n.max(1))?;
    let rows = eppf_spectrum(model.eppf(), p.n)?;
    let mut csv = Vec::new();
    write_spectrum_csv(&rows, &mut csv).map_err(|e| Failure::other(e.to_string()))?;
    let mut run = Run::new(out, "spectrum")?;
    run.write("spectrum.csv", "spectrum", &csv)?;
    run.finish(&p)?;
    println!(
        "{} shapes of n = {}, total probability {}",
        rows.len(),
        p.n,
        fmt_real(spectrum_total(&rows))
    );
    Ok(())
}

#[derive(Args, Serialize)]
pub struct BseqArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    /// Last index s of B_s.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    s_max: Option<usize>,
}

fn default_s_max() -> usize {
    30
}

#[derive(Serialize, Deserialize)]
struct BseqParams {
    #[serde(flatten)]
    model: ModelSpec,
    #[serde(default = "default_s_max")]
    s_max: usize,
}

fn describe(c: &BalanceClass) -> String {
    let mut line = format!("balance: {} (checked to s = {})", c.kind, c.horizon);
    if let Some(s) = c.averse_failure {
        line += &format!(", log-convexity fails at s = {s}");
    }
    if let Some(s) = c.seeking_failure {
        line += &format!(", log-concavity fails at s = {s}");
    }
    line
}

pub fn bseq(config: Option<&Path>, out: &Path, args: &BseqArgs) -> Result<(), Failure> {
    let p: BseqParams = load(config, args, &["s_max"])?;
    if p.s_max < 3 {
        return Err(Failure::config("key `s_max` must be at least 3"));
    }
    let w = p.model.build(1)?.w();
    let values = b_sequence_up_to(&w, p.s_max)?;
    let class = classify_balance(&w, p.s_max)?;
    let mut csv = String::from("s,B_s\n");
    for (s, b) in &values {
        csv += &format!("{s},{}\n", fmt_real(*b));
    }
    let mut run = Run::new(out, "bseq")?;
    run.write("bseq.csv", "b-sequence", csv.as_bytes())?;
    run.finish(&p)?;
    println!("{}", describe(&class));
    Ok(())
}

#[derive(Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    /// Number of W terms inspected.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    s_max: Option<usize>,
    /// Also compare every pair of dominance-ordered shapes up to this n.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_force: Option<usize>,
}

fn default_horizon() -> usize {
    DEFAULT_HORIZON
}

#[derive(Serialize, Deserialize)]
struct ClassifyParams {
    #[serde(flatten)]
    model: ModelSpec,
    #[serde(default = "default_horizon")]
    s_max: usize,
    #[serde(default)]
    brute_force: Option<usize>,
}

#[derive(Serialize)]
struct ClassifyReport {
    class: BalanceClass,
    brute_force: Option<BalanceClass>,
}

pub fn classify(config: Option<&Path>, out: &Path, args: &ClassifyArgs) -> Result<(), Failure> {
    let p: ClassifyParams = load(config, args, &["s_max", "brute_force"])?;
    if let Some(n) = p.brute_force {
        if n > BRUTE_FORCE_LIMIT {
            return Err(Failure::config(format!(
                "key `brute_force`: n = {n} exceeds the limit {BRUTE_FORCE_LIMIT}"
            )));
        }
    }
    let model = p.model.build(p.brute_force.unwrap_or(1).max(1))?;
    let class = classify_balance(&model.w(), p.s_max)?;
    let brute = p.brute_force.map(|n| brute_force_balance_check(model.eppf(), n)).transpose()?;
    let mut run = Run::new(out, "classify")?;
    run.write_json("classify.json", "classification", &ClassifyReport { class, brute_force: brute })?;
    run.finish(&p)?;
    println!("{}", describe(&class));
    if let Some(b) = brute {
        println!("pairwise check to n = {}: {}", b.horizon, b.kind);
    }
    Ok(())
}

#[derive(Args, Serialize)]
pub struct CompareArgs {
    /// W spec: unit, pyp:σ, or a μ spec such as ztpois:2.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    right: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    s_max: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompareParams {
    left: String,
    right: String,
    #[serde(default = "default_horizon")]
    s_max: usize,
}

#[derive(Serialize)]
struct CompareReport<'a> {
    left: &'a str,
    right: &'a str,
    s_max: usize,
    result: OrderResult,
}

pub fn compare_lc(config: Option<&Path>, out: &Path, args: &CompareArgs) -> Result<(), Failure> {
    let params = Params::resolve(config, args)?;
    params.check_keys(&["left", "right", "s_max"])?;
    let p: CompareParams = params.parse()?;
    let result = lc_compare(&parse_w(&p.left)?, &parse_w(&p.right)?, p.s_max)?;
    let mut run = Run::new(out, "compare-lc")?;
    run.write_json(
        "compare_lc.json",
        "lc-order",
        &CompareReport {
            left: &p.left,
            right: &p.right,
            s_max: p.s_max,
            result,
        },
    )?;
    run.finish(&p)?;
    let verdict = match result {
        OrderResult::Less => "left <=lc right",
        OrderResult::Greater => "right <=lc left",
        OrderResult::Equal => "equal under <=lc",
        OrderResult::Incomparable => "incomparable",
    };
    println!("{verdict}");
    Ok(())
}

#[derive(Args, Serialize)]
pub struct ProjectivityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n_max: Option<usize>,
    /// Relative tolerance on the addition rule.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
}

fn default_n_max() -> usize {
    8
}

fn default_tol() -> f64 {
    1e-10
}

#[derive(Serialize, Deserialize)]
struct ProjectivityParams {
    #[serde(flatten)]
    model: ModelSpec,
    #[serde(default = "default_n_max")]
    n_max: usize,
    #[serde(default = "default_tol")]
    tol: f64,
}

#[derive(Serialize)]
struct Failing {
    shape: String,
    log_p: f64,
    log_p_extended: f64,
}

pub fn projectivity(config: Option<&Path>, out: &Path, args: &ProjectivityArgs) -> Result<(), Failure> {
    let p: ProjectivityParams = load(config, args, &["n_max", "tol"])?;
    let model = p.model.build(p.n_max + 1)?;
    let report = check_projectivity(model.eppf(), p.n_max, p.tol)?;
    let failing = report.first_failure.as_ref().map(|(shape, lhs, rhs)| Failing {
        shape: shape.label(),
        log_p: *lhs,
        log_p_extended: *rhs,
    });
    let mut run = Run::new(out, "projectivity")?;
    run.write_json(
        "projectivity.json",
        "projectivity",
        &serde_json::json!({ "holds": report.holds, "first_failure": failing }),
    )?;
    run.finish(&p)?;
    match failing {
        None => println!("projective up to n = {}", p.n_max),
        Some(f) => println!("addition rule fails at {}", f.shape),
    }
    Ok(())
}
