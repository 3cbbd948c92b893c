//! Brute-force deciders, reduction gadgets and random instance generators
//! used to check the solvers on small inputs.
//!
//! The deciders share only the core predicates (stability, blocking edges,
//! maximality) and the per-agent domination cost with the code they check.

mod bribery;
mod enumerate;
mod extension;
mod gadgets;
pub mod random;
mod sat;

use thiserror::Error;

use crate::bribery::BriberyError;
use crate::error::CoreError;
use crate::extension::ExtensionError;
use crate::partition::PartitionError;

pub use bribery::bribery_bruteforce;
pub use enumerate::{enumerate_stable_q_matchings, find_stable_q_matching, min_removable_bruteforce};
pub use extension::extension_bruteforce;
pub use gadgets::{gen_bribery_from_vertex_cover, gen_red_blue_from_3sat, min_vertex_cover_bruteforce};
pub use sat::{parse_dimacs, sat_bruteforce, CnfFormula};

/// Agents for [`enumerate_stable_q_matchings`].
pub const STABLE_ENUM_CAP: usize = 10;
/// Agents for [`min_removable_bruteforce`].
pub const MIN_REMOVABLE_CAP: usize = 10;
/// Blocking edges for [`bribery_bruteforce`].
pub const BRIBERY_CAP: usize = 12;
/// Free rank positions for [`extension_bruteforce`].
pub const EXTENSION_CAP: usize = 8;
/// Variables for [`sat_bruteforce`].
pub const SAT_CAP: usize = 20;
/// Vertices for [`min_vertex_cover_bruteforce`].
pub const VERTEX_COVER_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Bribery(#[from] BriberyError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error("{what}: {size} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("no assignment of blocking edges to endpoints has finite cost")]
    Infeasible,
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("line {line}: {message}")]
    Dimacs { line: usize, message: String },
}

fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<(), OracleError> {
    if size > cap {
        Err(OracleError::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}
