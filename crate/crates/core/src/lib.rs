//! Balancedness of exchangeable random partitions.
//!
//! [`gibbs`] holds Gibbs-type EPPFs and their balance diagnostics, [`esc`] the
//! ESC models driven by a cluster-size law, and [`er`] an entity-resolution
//! sampler that uses them as partition priors.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod er;
pub mod error;
pub mod esc;
pub mod gibbs;
pub mod numeric;
pub mod partition;

pub use error::{Error, Result};
pub use gibbs::Eppf;
pub use partition::{IntegerPartition, OrderResult, SetPartition};

/// Version of this library, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
