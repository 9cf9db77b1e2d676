//! Gibbs partitions `V_{n,k} Π W_{n_j}`: model families, balancedness and
//! the derived reallocation, projectivity and spectrum tools.

mod balance;
mod mixture;
mod model;
mod neutral;
mod ops;
mod wseq;

use crate::partition::IntegerPartition;

pub use balance::{
    b_sequence, b_sequence_up_to, brute_force_balance_check, classify_balance, lc_compare,
    relative_log_concave, Balance, BalanceClass, BRUTE_FORCE_LIMIT, CLASSIFY_TOL, DEFAULT_HORIZON,
};
pub use mixture::GibbsMixture;
pub use model::{Family, GibbsModel};
pub(crate) use model::dirichlet_multinomial_log_v;
pub use neutral::{mfm_log_v, neutral_log_v, MixingDistribution, SERIES_EPS};
pub use ops::{
    check_projectivity, eppf_spectrum, log_reallocation_weights, reallocation_probabilities,
    shannon_step, slope_ratio, spectrum_total, write_spectrum_csv, ProjectivityReport, SpectrumRow,
    SPECTRUM_HEADER,
};
pub use wseq::WSequence;

/// Anything that assigns a log-probability to each partition shape.
pub trait Eppf {
    /// `log p(n_1, .., n_k)` of one set partition with these block sizes; `-inf` for probability zero.
    fn log_eppf(&self, shape: &IntegerPartition) -> f64;
}
