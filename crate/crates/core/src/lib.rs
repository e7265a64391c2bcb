//! Planning of overlapping tracking area lists (TALs) for LTE-like networks.
//!
//! The crate decodes relaxed particle positions into cell-to-list
//! assignments with per-cell usage fractions, scores them on signaling cost
//! (TAU plus paging) and inter-list handover cost, and searches the trade-off
//! with a multi-objective particle swarm. Small instances can be solved
//! exhaustively for reference.

pub mod assignment;
pub mod error;
pub mod experiment;
pub mod mopso;
pub mod network;
pub mod oracle;
mod plan;

pub use assignment::{AssignmentSolution, ObjectivePair};
pub use error::{Error, Result};
pub use network::{MobilityModel, NetworkConfig};
pub use plan::{plan, PlanOutcome, TalProblem};
