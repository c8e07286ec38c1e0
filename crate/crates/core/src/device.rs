//! Directed delay-graph structure shared by the compilers and the simulator.
//!
//! A [`Device`] is a directed multigraph. Arcs carry strictly positive
//! integer delays; nodes may carry an internal delay that is applied once
//! per pass, after arrival and before the signal splits. Parallel arcs and
//! self-loops are first-class: the subset-sum choice gadget needs two arcs
//! between the same pair of nodes, and the Diophantine loop gadget needs a
//! self-loop on the node the signal is injected into.

use std::fmt;

use crate::error::Error;
use crate::units::TimeUnits;

/// Index of a node within a device. Ids are dense from zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    /// Delay applied once per pass through the node, between arrival and
    /// splitting. Zero for most designs; the Hamiltonian and TSP devices
    /// put their delays here.
    pub internal_delay: TimeUnits,
    /// Diagnostic label, not semantically meaningful.
    pub label: String,
}

impl Node {
    pub fn new(id: usize, internal_delay: TimeUnits, label: impl Into<String>) -> Self {
        Node {
            id: NodeId(id),
            internal_delay,
            label: label.into(),
        }
    }

    /// Node with zero internal delay.
    pub fn plain(id: usize, label: impl Into<String>) -> Self {
        Node::new(id, TimeUnits::zero(), label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arc {
    pub from: NodeId,
    pub to: NodeId,
    /// Arc delay; must be at least one unit (there are no zero-length cables).
    pub delay: TimeUnits,
}

impl Arc {
    pub fn new(from: usize, to: usize, delay: TimeUnits) -> Self {
        Arc {
            from: NodeId(from),
            to: NodeId(to),
            delay,
        }
    }
}

/// A single structural defect found by [`Device::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UndeclaredStart(NodeId),
    UndeclaredDestination(NodeId),
    StartIsDestination(NodeId),
    /// `nodes[position].id` is not `position`.
    NonDenseNodeId { position: usize, id: NodeId },
    DanglingArcEndpoint { arc: usize, endpoint: NodeId },
    ZeroDelayArc { arc: usize },
    /// The start node must not receive signals from other nodes
    /// (a self-loop on the start node is allowed).
    ArcIntoStart { arc: usize, from: NodeId },
    /// The destination only collects; it must have no outgoing arcs.
    ArcOutOfDestination { arc: usize, to: NodeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UndeclaredStart(id) => write!(f, "start node {id} is not declared"),
            Violation::UndeclaredDestination(id) => {
                write!(f, "destination node {id} is not declared")
            }
            Violation::StartIsDestination(id) => {
                write!(f, "start and destination are the same node {id}")
            }
            Violation::NonDenseNodeId { position, id } => {
                write!(f, "node at position {position} has id {id}; ids must be dense from 0")
            }
            Violation::DanglingArcEndpoint { arc, endpoint } => {
                write!(f, "arc {arc} references undeclared node {endpoint}")
            }
            Violation::ZeroDelayArc { arc } => write!(f, "arc {arc} has delay 0"),
            Violation::ArcIntoStart { arc, from } => {
                write!(f, "arc {arc} enters the start node from {from}")
            }
            Violation::ArcOutOfDestination { arc, to } => {
                write!(f, "arc {arc} leaves the destination node towards {to}")
            }
        }
    }
}

/// A directed delay graph with one injection point and one collection point.
///
/// Devices are plain values: once built (and validated) they are never
/// mutated, so they can be shared freely across concurrent simulations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Device {
    nodes: Vec<Node>,
    arcs: Vec<Arc>,
    start: NodeId,
    destination: NodeId,
}

impl Device {
    /// Builds a device. Arcs are stored sorted by `(from, to, delay)` so
    /// equal devices have identical arc order; duplicates are kept and
    /// counted with multiplicity.
    pub fn new(nodes: Vec<Node>, mut arcs: Vec<Arc>, start: NodeId, destination: NodeId) -> Self {
        arcs.sort();
        Device {
            nodes,
            arcs,
            start,
            destination,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn start(&self) -> NodeId {
        self.start
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id.index())
    }

    /// Number of arcs leaving `node`, parallel arcs counted separately.
    pub fn out_degree(&self, node: NodeId) -> Result<usize, Error> {
        if node.index() >= self.nodes.len() {
            return Err(Error::UnknownNode(node));
        }
        Ok(self.arcs.iter().filter(|a| a.from == node).count())
    }

    /// Largest delay anywhere in the device (arc delays and internal delays).
    pub fn max_delay(&self) -> TimeUnits {
        let mut max = TimeUnits::zero();
        for node in &self.nodes {
            if node.internal_delay > max {
                max = node.internal_delay.clone();
            }
        }
        for arc in &self.arcs {
            if arc.delay > max {
                max = arc.delay.clone();
            }
        }
        max
    }

    /// Sum of all arc delays; the total cable length in time units.
    pub fn total_arc_delay(&self) -> TimeUnits {
        self.arcs.iter().map(|a| &a.delay).sum()
    }

    /// Checks every structural invariant and returns all violations found.
    /// An empty list means the device is well formed. Violations are data,
    /// not failures, so broken devices can be reported in full.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let n = self.nodes.len();
        for (position, node) in self.nodes.iter().enumerate() {
            if node.id.index() != position {
                violations.push(Violation::NonDenseNodeId {
                    position,
                    id: node.id,
                });
            }
        }
        let declared = |id: NodeId| id.index() < n;
        if !declared(self.start) {
            violations.push(Violation::UndeclaredStart(self.start));
        }
        if !declared(self.destination) {
            violations.push(Violation::UndeclaredDestination(self.destination));
        }
        if self.start == self.destination && declared(self.start) {
            violations.push(Violation::StartIsDestination(self.start));
        }
        for (i, arc) in self.arcs.iter().enumerate() {
            if !declared(arc.from) {
                violations.push(Violation::DanglingArcEndpoint {
                    arc: i,
                    endpoint: arc.from,
                });
            }
            if !declared(arc.to) {
                violations.push(Violation::DanglingArcEndpoint {
                    arc: i,
                    endpoint: arc.to,
                });
            }
            if arc.delay.is_zero() {
                violations.push(Violation::ZeroDelayArc { arc: i });
            }
            if arc.to == self.start && arc.from != self.start {
                violations.push(Violation::ArcIntoStart {
                    arc: i,
                    from: arc.from,
                });
            }
            if arc.from == self.destination {
                violations.push(Violation::ArcOutOfDestination { arc: i, to: arc.to });
            }
        }
        violations
    }

    /// `Ok(())` when well formed, otherwise all violations as an error.
    pub fn ensure_valid(&self) -> Result<(), Error> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidDevice(violations))
        }
    }
}

/// The moment (or window of moments) at which a solution-encoding signal
/// must reach the destination. A point readout has `lo == hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadoutSpec {
    window_lo: TimeUnits,
    window_hi: TimeUnits,
    description: String,
}

impl ReadoutSpec {
    pub fn point(at: TimeUnits, description: impl Into<String>) -> Self {
        ReadoutSpec {
            window_lo: at.clone(),
            window_hi: at,
            description: description.into(),
        }
    }

    pub fn window(
        lo: TimeUnits,
        hi: TimeUnits,
        description: impl Into<String>,
    ) -> Result<Self, Error> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(ReadoutSpec {
            window_lo: lo,
            window_hi: hi,
            description: description.into(),
        })
    }

    pub fn lo(&self) -> &TimeUnits {
        &self.window_lo
    }

    pub fn hi(&self) -> &TimeUnits {
        &self.window_hi
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn contains(&self, t: &TimeUnits) -> bool {
        *t >= self.window_lo && *t <= self.window_hi
    }
}
