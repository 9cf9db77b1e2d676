//! Bayesian entity resolution with a categorical distortion model and ESC or
//! Gibbs partition priors.

mod dataset;
mod point;
mod prior;
mod run;
mod sampler;
mod slice;

pub use dataset::{generate_synthetic, uniform_theta, ErDataset, Scenario};
pub use point::{dahl_point_estimate, fnr_fdr, CoClustering, LinkageErrors};
pub use prior::{
    beta_from_mean_sd, mu_param_names, mu_params, sample_shifted_binomial, update_theta_mu, Hyperpriors,
    PartitionPrior,
};
pub use run::{run_chain, run_chains, run_mcmc, ErResult, ErSummary, McmcConfig, Moments, Sample, SizeQuantiles};
pub use sampler::{
    chaperones_update, gibbs_update_z, log_record_likelihood, update_y_w_beta, Initialization, Kernel, McmcState,
    PairProposal,
};
pub use slice::slice_sample;
