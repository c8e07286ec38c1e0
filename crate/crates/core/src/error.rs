//! Crate-wide error type.

use crate::device::{NodeId, Violation};
use crate::units::TimeUnits;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The device violates its structural invariants; all violations listed.
    #[error("device is not well formed: {}", format_violations(.0))]
    InvalidDevice(Vec<Violation>),

    #[error("node {0} is not declared in the device")]
    UnknownNode(NodeId),

    /// The readout window reaches past the simulated horizon, so the
    /// arrival table cannot answer the query soundly.
    #[error("readout window [{lo}, {hi}] lies beyond the simulated horizon {horizon}")]
    WindowBeyondHorizon {
        lo: TimeUnits,
        hi: TimeUnits,
        horizon: TimeUnits,
    },

    #[error("readout window lower bound {lo} exceeds upper bound {hi}")]
    InvalidWindow { lo: TimeUnits, hi: TimeUnits },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A compile-time constant is out of range (for example k = 0).
    #[error("invalid constant: {0}")]
    InvalidConstant(String),

    #[error("enumeration bound exceeded: {0}")]
    EnumerationBound(String),

    #[error("malformed JSON: {0}")]
    MalformedJson(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("front budget must be at least 1")]
    ZeroBudget,

    #[error("cannot classify growth: {0}")]
    GrowthSizes(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
