//! Exact simulation and compilation of delay-signal computing devices.
//!
//! A device is a directed multigraph with a start and a destination node.
//! A unit signal injected at the start is delayed by every arc it traverses
//! and split evenly across the outgoing arcs of every node it passes. The
//! decision encoded by a device is read off the destination: the answer is
//! YES exactly when some signal arrives inside a prescribed time window,
//! and the number of distinct start-to-destination walks hitting the window
//! is the solution multiplicity.
//!
//! The crate provides:
//!
//! - [`device`] — the delay-graph structure ([`Device`], [`Node`], [`Arc`],
//!   [`ReadoutSpec`]) and its well-formedness rules;
//! - [`sim`] — the exact event-driven propagation engine ([`simulate`],
//!   [`ArrivalMap`], [`ArrivalMap::read`]) plus a front-count budget guard;
//! - [`compile`] — translators from six decision problems (subset sum,
//!   unbounded subset sum, linear Diophantine equations, Hamiltonian path,
//!   exact cover, travelling-salesman decision) into collision-free devices;
//! - [`oracle`] — independent brute-force solvers used as ground truth;
//! - [`analysis`] — physical figures: minimum cable length, total cable
//!   length, intensity dynamic range, and delay-growth classification;
//! - [`io`] — canonical JSON documents for devices and instances, CSV export
//!   of arrival tables.
//!
//! All delay and counting arithmetic is arbitrary-precision integer and all
//! intensity arithmetic is exact rational; the engine never rounds.

pub mod analysis;
pub mod compile;
pub mod device;
pub mod error;
pub mod io;
pub mod oracle;
pub mod sim;
pub mod units;

pub use analysis::{
    device_report, dynamic_range_bits, growth_classification,
    growth_classification_with_threshold, growth_instance, min_cable_length, AnalysisReport,
    GrowthReport, GrowthVerdict, PhysicalParams, GROWTH_RATIO_THRESHOLD,
};
pub use compile::{
    compile, compile_with_k, horizon_for, CompilationResult, Diophantine, ExactCover,
    Hamiltonian, ProblemInstance, ProblemKind, SubsetSum, TspDecision, UnboundedSubsetSum,
};
pub use device::{Arc, Device, Node, NodeId, ReadoutSpec, Violation};
pub use error::Error;
pub use io::{
    parse_arrivals_csv, read_device, read_instance, write_arrivals_csv, write_device,
    write_growth_json, write_instance, write_oracle_json, write_report_json,
};
pub use oracle::{oracle_for, OracleBounds, OracleResult, WITNESS_CAP};
pub use sim::{
    simulate, simulate_with_budget, Answer, ArrivalEntry, ArrivalMap, BudgetReport, Decision,
    GuardedRun, SimStats,
};
pub use units::TimeUnits;

// Re-exported so downstream code shares the exact numeric types.
pub use num_bigint::BigUint;
pub use num_rational::BigRational;
