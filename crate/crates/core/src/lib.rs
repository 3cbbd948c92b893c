//! Repair tools for stable matching instances.
//!
//! * [`partition`]: stable partitions, minimum agent deletion, subset deletion.
//! * [`bribery`]: minimum l1 change of cardinal preferences so that a given
//!   maximal q-matching becomes weakly stable.
//! * [`extension`]: completing partial rank lists so that a q-matching is stable,
//!   plus red-blue edge cover.
//! * [`oracle`]: brute-force deciders and instance generators used to check the solvers.

pub mod bribery;
pub mod error;
pub mod extension;
pub mod instance;
pub mod matching;
pub mod oracle;
pub mod parse;
pub mod partition;

pub mod stability;

pub use error::CoreError;
pub use instance::{
    AgentId, EdgeId, Graph, QMatching, RankBounds, Ranks, StrictOrders, ValueBounds, Values, TAU,
};
pub use parse::{parse_instance, Color, Document, ParseError, ParseErrorKind};
pub use stability::{blocking_edges, is_maximal, is_stable, Preferences, Stability};
