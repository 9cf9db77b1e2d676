//! Exchangeable-sequences-of-clusters (ESC) partitions built from a cluster-size law `μ`.

mod model;
mod mu;
mod normalizer;
mod stirling;

pub use model::{classify_mu, classify_raw_pmf, EscModel};
pub(crate) use mu::ln_one_minus_pow;
pub use mu::{MuFamily, RawPmf};
pub use normalizer::{log_prob_en, log_prob_en_closed, log_prob_en_dp, log_prob_en_dp_table};
pub use stirling::{
    log_stirling1_abs, log_stirling1_abs_row, log_stirling2, log_stirling2_triangle, EXACT_LIMIT,
};
