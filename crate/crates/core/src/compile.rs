//! Compilers from combinatorial problem instances to delay devices.
//!
//! Each compiler emits a device plus a readout window with one guarantee:
//! a signal reaches the destination inside the window if and only if the
//! instance has a solution, and the number of walks landing in the window
//! equals the number of solutions. The schemes are collision-free by
//! construction — no non-solution walk can land in the window — so the
//! multiplicity is exact, not a heuristic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::device::{Arc, Device, Node, NodeId, ReadoutSpec};
use crate::error::Error;
use crate::units::TimeUnits;

/// Pick `values` summing exactly to `target`, each value usable once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetSum {
    pub values: Vec<u64>,
    pub target: u64,
}

/// Pick `values` summing exactly to `target`, values reusable; solutions
/// are counted as ordered sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnboundedSubsetSum {
    pub values: Vec<u64>,
    pub target: u64,
}

/// Solve `a_1*x_1 + … + a_m*x_m = c` over nonnegative integers, or over
/// strictly positive integers when `require_positive` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diophantine {
    pub coefficients: Vec<u64>,
    pub constant: u64,
    #[serde(default)]
    pub require_positive: bool,
}

/// Does the digraph on `vertices` vertices contain a directed Hamiltonian
/// path (any endpoints)? Arcs are a set: duplicates collapse, self-loops
/// are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hamiltonian {
    pub vertices: usize,
    pub arcs: Vec<(usize, usize)>,
}

/// Is there a subcollection of `sets` covering `{0, …, universe-1}` with
/// every element in exactly one chosen set? Sets must be nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCover {
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
}

/// Is there a directed Hamiltonian path of total weight at most `bound`?
/// `weights` lists directed arcs as `(from, to, weight)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TspDecision {
    pub vertices: usize,
    pub weights: Vec<(usize, usize, u64)>,
    pub bound: u64,
}

/// Any instance the toolkit can compile, tagged for serialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "snake_case")]
pub enum ProblemInstance {
    SubsetSum(SubsetSum),
    UnboundedSubsetSum(UnboundedSubsetSum),
    Diophantine(Diophantine),
    Hamiltonian(Hamiltonian),
    ExactCover(ExactCover),
    TspDecision(TspDecision),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProblemKind {
    SubsetSum,
    UnboundedSubsetSum,
    Diophantine,
    Hamiltonian,
    ExactCover,
    TspDecision,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::SubsetSum => "subset_sum",
            ProblemKind::UnboundedSubsetSum => "unbounded_subset_sum",
            ProblemKind::Diophantine => "diophantine",
            ProblemKind::Hamiltonian => "hamiltonian",
            ProblemKind::ExactCover => "exact_cover",
            ProblemKind::TspDecision => "tsp_decision",
        })
    }
}

impl ProblemInstance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            ProblemInstance::SubsetSum(_) => ProblemKind::SubsetSum,
            ProblemInstance::UnboundedSubsetSum(_) => ProblemKind::UnboundedSubsetSum,
            ProblemInstance::Diophantine(_) => ProblemKind::Diophantine,
            ProblemInstance::Hamiltonian(_) => ProblemKind::Hamiltonian,
            ProblemInstance::ExactCover(_) => ProblemKind::ExactCover,
            ProblemInstance::TspDecision(_) => ProblemKind::TspDecision,
        }
    }

    /// Checks the instance's own domain constraints (before compilation).
    pub fn validate(&self) -> Result<(), Error> {
        match self {
            ProblemInstance::SubsetSum(i) => validate_subset_sum(i),
            ProblemInstance::UnboundedSubsetSum(i) => validate_unbounded(i),
            ProblemInstance::Diophantine(i) => validate_diophantine(i),
            ProblemInstance::Hamiltonian(i) => validate_hamiltonian(i),
            ProblemInstance::ExactCover(i) => validate_exact_cover(i),
            ProblemInstance::TspDecision(i) => validate_tsp(i),
        }
    }
}

/// A compiled device together with everything needed to interpret it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationResult {
    pub device: Device,
    pub readout: ReadoutSpec,
    /// Scheme parameters by their conventional names (k = padding delay,
    /// b = digit base, A = dominant arc delay, F = loop spread factor,
    /// Q = weight modulus, H = Hamiltonian target), exposed so callers can
    /// audit the arithmetic behind the readout.
    pub constants: BTreeMap<String, TimeUnits>,
    /// What one unit of readout multiplicity counts.
    pub multiplicity_semantics: String,
}

/// The canonical simulation horizon for a compiled device: the readout
/// window's upper end. Arrivals later than this can never affect the
/// answer.
pub fn horizon_for(result: &CompilationResult) -> TimeUnits {
    result.readout.hi().clone()
}

/// Compiles with the default padding delay k = 1 (the smallest legal
/// cable) wherever the construction uses one.
pub fn compile(instance: &ProblemInstance) -> Result<CompilationResult, Error> {
    let k = TimeUnits::one();
    match instance {
        ProblemInstance::SubsetSum(i) => compile_subset_sum(i, &k),
        ProblemInstance::UnboundedSubsetSum(i) => compile_unbounded_subset_sum(i),
        ProblemInstance::Diophantine(i) => compile_diophantine(i, &k),
        ProblemInstance::Hamiltonian(i) => compile_hamiltonian(i),
        ProblemInstance::ExactCover(i) => compile_exact_cover(i, &k),
        ProblemInstance::TspDecision(i) => compile_tsp(i),
    }
}

/// Compiles with an explicit padding delay for the chain constructions.
/// Errors for problems whose construction has no k to override.
pub fn compile_with_k(
    instance: &ProblemInstance,
    k: &TimeUnits,
) -> Result<CompilationResult, Error> {
    match instance {
        ProblemInstance::SubsetSum(i) => compile_subset_sum(i, k),
        ProblemInstance::Diophantine(i) => compile_diophantine(i, k),
        ProblemInstance::ExactCover(i) => compile_exact_cover(i, k),
        other => Err(Error::InvalidConstant(format!(
            "the {} construction has no padding delay k to override",
            other.kind()
        ))),
    }
}

fn require_positive_k(k: &TimeUnits) -> Result<(), Error> {
    if k.is_zero() {
        Err(Error::InvalidConstant(
            "padding delay k must be at least 1 (no zero-length cables)".into(),
        ))
    } else {
        Ok(())
    }
}

pub(crate) fn validate_subset_sum(inst: &SubsetSum) -> Result<(), Error> {
    if inst.values.is_empty() {
        return Err(Error::InvalidInstance(
            "subset_sum needs at least one value".into(),
        ));
    }
    if inst.values.contains(&0) {
        return Err(Error::InvalidInstance(
            "subset_sum values must be strictly positive".into(),
        ));
    }
    Ok(())
}

/// Chain device: one stage per value, with a "skip" arc of delay k and a
/// "take" arc of delay value + k. Every start-to-end walk crosses exactly
/// n stages, so its total delay is (chosen sum) + n*k; the readout at
/// target + n*k is hit exactly by subsets summing to the target.
pub fn compile_subset_sum(inst: &SubsetSum, k: &TimeUnits) -> Result<CompilationResult, Error> {
    validate_subset_sum(inst)?;
    require_positive_k(k)?;
    let n = inst.values.len();

    let mut nodes = vec![Node::plain(0, "start")];
    let mut arcs = Vec::new();
    for (i, &value) in inst.values.iter().enumerate() {
        let label = if i + 1 == n {
            "destination".to_string()
        } else {
            format!("after value {value}")
        };
        nodes.push(Node::plain(i + 1, label));
        arcs.push(Arc::new(i, i + 1, k.clone()));
        arcs.push(Arc::new(i, i + 1, TimeUnits::from(value) + k));
    }
    let device = Device::new(nodes, arcs, NodeId(0), NodeId(n));

    let readout_time = TimeUnits::from(inst.target) + TimeUnits::from(n as u64) * k;
    let readout = ReadoutSpec::point(
        readout_time,
        format!(
            "arrivals here took a subset of the {n} values summing to {}",
            inst.target
        ),
    );
    let mut constants = BTreeMap::new();
    constants.insert("k".to_string(), k.clone());
    Ok(CompilationResult {
        device,
        readout,
        constants,
        multiplicity_semantics: "subsets of the values summing to the target".to_string(),
    })
}

pub(crate) fn validate_unbounded(inst: &UnboundedSubsetSum) -> Result<(), Error> {
    if inst.values.contains(&0) {
        return Err(Error::InvalidInstance(
            "unbounded_subset_sum values must be strictly positive".into(),
        ));
    }
    Ok(())
}

/// Hub device: enter the hub (delay 1), take any number of self-loops —
/// the loop for value a has delay a*F + 1 with F = target + 1 — then exit
/// (delay 1). A walk with loop values summing to T over L passes arrives
/// at 2 + T*F + L. Scaling by F separates different sums so widely that
/// the window [2+target*F+1, 2+target*F+target] is reachable only with
/// T = target (L can be anything from 1 to target). Counted walks are
/// ordered loop sequences.
pub fn compile_unbounded_subset_sum(
    inst: &UnboundedSubsetSum,
) -> Result<CompilationResult, Error> {
    validate_unbounded(inst)?;
    if inst.target == 0 {
        // The loop-free walk arrives at 2 no matter what, so the scheme
        // has no window for a zero target; a zero sum is trivially
        // reachable by picking nothing.
        return Err(Error::InvalidInstance(
            "unbounded_subset_sum target must be at least 1 (sum 0 is trivially reachable)"
                .into(),
        ));
    }
    let spread = TimeUnits::from(inst.target) + TimeUnits::one();

    let nodes = vec![
        Node::plain(0, "start"),
        Node::plain(1, "hub"),
        Node::plain(2, "destination"),
    ];
    let mut arcs = vec![
        Arc::new(0, 1, TimeUnits::one()),
        Arc::new(1, 2, TimeUnits::one()),
    ];
    for &value in &inst.values {
        arcs.push(Arc::new(
            1,
            1,
            TimeUnits::from(value) * &spread + TimeUnits::one(),
        ));
    }
    let device = Device::new(nodes, arcs, NodeId(0), NodeId(2));

    let base = TimeUnits::from(2u64) + TimeUnits::from(inst.target) * &spread;
    let readout = ReadoutSpec::window(
        &base + &TimeUnits::one(),
        base + TimeUnits::from(inst.target),
        format!(
            "arrivals here looped values summing to {} (any loop count)",
            inst.target
        ),
    )?;
    let mut constants = BTreeMap::new();
    constants.insert("F".to_string(), spread);
    Ok(CompilationResult {
        device,
        readout,
        constants,
        multiplicity_semantics:
            "ordered sequences of values, repetition allowed, summing to the target".to_string(),
    })
}

pub(crate) fn validate_diophantine(inst: &Diophantine) -> Result<(), Error> {
    if inst.coefficients.is_empty() {
        return Err(Error::InvalidInstance(
            "diophantine needs at least one unknown".into(),
        ));
    }
    if inst.coefficients.contains(&0) {
        return Err(Error::InvalidInstance(
            "diophantine coefficients must be strictly positive".into(),
        ));
    }
    Ok(())
}

/// One node per unknown, each with a self-loop of delay a_i; consecutive
/// nodes are joined by arcs of delay k, and the signal is injected at the
/// first unknown's node. Looping x_i times at node i and then moving on
/// yields total delay Σ a_i x_i + m*k, so the readout at c + m*k is hit
/// exactly by the nonnegative solutions. The positive-solutions variant
/// substitutes x_i = y_i + 1 and shifts the readout to (c - Σ a_i) + m*k;
/// when Σ a_i exceeds c there are no positive solutions and an always-NO
/// device is emitted instead.
pub fn compile_diophantine(inst: &Diophantine, k: &TimeUnits) -> Result<CompilationResult, Error> {
    validate_diophantine(inst)?;
    require_positive_k(k)?;
    let m = inst.coefficients.len();
    let semantics = if inst.require_positive {
        "strictly positive integer solutions of the equation"
    } else {
        "nonnegative integer solutions of the equation"
    };

    let effective_constant = if inst.require_positive {
        let shift: TimeUnits = inst.coefficients.iter().map(|&a| TimeUnits::from(a)).sum();
        match TimeUnits::from(inst.constant).checked_sub(&shift) {
            Some(rest) => rest,
            None => {
                // Σ a_i > c: even all-ones is too big. Emit a stub device
                // whose only walk arrives after the (empty) readout moment.
                let device = Device::new(
                    vec![Node::plain(0, "start"), Node::plain(1, "destination")],
                    vec![Arc::new(0, 1, TimeUnits::one())],
                    NodeId(0),
                    NodeId(1),
                );
                let readout = ReadoutSpec::point(
                    TimeUnits::zero(),
                    "unsatisfiable: the coefficients sum past the constant",
                );
                return Ok(CompilationResult {
                    device,
                    readout,
                    constants: BTreeMap::new(),
                    multiplicity_semantics: semantics.to_string(),
                });
            }
        }
    } else {
        TimeUnits::from(inst.constant)
    };

    let mut nodes = Vec::with_capacity(m + 1);
    let mut arcs = Vec::new();
    for (i, &coeff) in inst.coefficients.iter().enumerate() {
        nodes.push(Node::plain(i, format!("x{} (coefficient {coeff})", i + 1)));
        arcs.push(Arc::new(i, i, TimeUnits::from(coeff)));
        arcs.push(Arc::new(i, i + 1, k.clone()));
    }
    nodes.push(Node::plain(m, "destination"));
    let device = Device::new(nodes, arcs, NodeId(0), NodeId(m));

    let readout_time = &effective_constant + &(TimeUnits::from(m as u64) * k);
    let readout = ReadoutSpec::point(
        readout_time,
        format!("arrivals here picked loop counts with Σ a_i·x_i = {effective_constant}"),
    );
    let mut constants = BTreeMap::new();
    constants.insert("k".to_string(), k.clone());
    if inst.require_positive {
        constants.insert(
            "shift".to_string(),
            inst.coefficients.iter().map(|&a| TimeUnits::from(a)).sum(),
        );
    }
    Ok(CompilationResult {
        device,
        readout,
        constants,
        multiplicity_semantics: semantics.to_string(),
    })
}

pub(crate) fn validate_hamiltonian(inst: &Hamiltonian) -> Result<(), Error> {
    if inst.vertices == 0 {
        return Err(Error::InvalidInstance(
            "hamiltonian needs at least one vertex".into(),
        ));
    }
    for &(u, v) in &inst.arcs {
        if u >= inst.vertices || v >= inst.vertices {
            return Err(Error::InvalidInstance(format!(
                "arc ({u}, {v}) references a vertex outside 0..{}",
                inst.vertices
            )));
        }
        if u == v {
            return Err(Error::InvalidInstance(format!(
                "self-loop on vertex {u}: the adjacency must be irreflexive"
            )));
        }
    }
    Ok(())
}

/// Digit-encoding device. With base b = n+1, vertex i gets internal delay
/// b^i and every arc (entry, graph and exit alike) gets delay A = b^n. A
/// start-to-destination walk through L graph arcs accumulates
/// (L+2)*A + Σ visits_i * b^i. Visit counts never exceed n < b, so the
/// base-b digits cannot carry, and the target Σ b^i + (n+1)*A is reached
/// exactly by walks visiting every vertex once: the Hamiltonian paths.
pub fn compile_hamiltonian(inst: &Hamiltonian) -> Result<CompilationResult, Error> {
    validate_hamiltonian(inst)?;
    let n = inst.vertices;
    let base = TimeUnits::from(n as u64 + 1);
    let arc_delay = base.pow(n as u32);

    let mut nodes = vec![Node::plain(0, "start")];
    for i in 0..n {
        nodes.push(Node::new(i + 1, base.pow(i as u32), format!("vertex {i}")));
    }
    nodes.push(Node::plain(n + 1, "destination"));

    let mut arcs = Vec::new();
    for i in 0..n {
        arcs.push(Arc::new(0, i + 1, arc_delay.clone()));
        arcs.push(Arc::new(i + 1, n + 1, arc_delay.clone()));
    }
    for &(u, v) in inst.arcs.iter().collect::<BTreeSet<_>>() {
        arcs.push(Arc::new(u + 1, v + 1, arc_delay.clone()));
    }
    let device = Device::new(nodes, arcs, NodeId(0), NodeId(n + 1));

    let digit_sum: TimeUnits = (0..n).map(|i| base.pow(i as u32)).sum();
    let target = digit_sum + TimeUnits::from(n as u64 + 1) * &arc_delay;
    let readout = ReadoutSpec::point(
        target,
        format!("arrivals here visited each of the {n} vertices exactly once"),
    );
    let mut constants = BTreeMap::new();
    constants.insert("b".to_string(), base);
    constants.insert("A".to_string(), arc_delay);
    Ok(CompilationResult {
        device,
        readout,
        constants,
        multiplicity_semantics: "directed Hamiltonian paths in the graph".to_string(),
    })
}

pub(crate) fn validate_exact_cover(inst: &ExactCover) -> Result<(), Error> {
    if inst.sets.is_empty() {
        return Err(Error::InvalidInstance(
            "exact_cover needs at least one set".into(),
        ));
    }
    for (i, set) in inst.sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::InvalidInstance(format!("set {i} is empty")));
        }
        let mut seen = BTreeSet::new();
        for &element in set {
            if element >= inst.universe {
                return Err(Error::InvalidInstance(format!(
                    "set {i} contains {element}, outside the universe 0..{}",
                    inst.universe
                )));
            }
            if !seen.insert(element) {
                return Err(Error::InvalidInstance(format!(
                    "set {i} lists element {element} twice"
                )));
            }
        }
    }
    Ok(())
}

/// Subset-sum chain over digit weights. With base b = m+1 (m sets),
/// element j weighs b^j and set C weighs Σ_{j∈C} b^j. Choosing sets is a
/// take/skip chain exactly like subset-sum; since at most m < b chosen
/// sets contain any element, digit sums cannot carry, and total weight
/// Σ_j b^j means every element is covered exactly once.
pub fn compile_exact_cover(inst: &ExactCover, k: &TimeUnits) -> Result<CompilationResult, Error> {
    validate_exact_cover(inst)?;
    require_positive_k(k)?;
    let m = inst.sets.len();
    let base = TimeUnits::from(m as u64 + 1);

    let mut nodes = vec![Node::plain(0, "start")];
    let mut arcs = Vec::new();
    for (i, set) in inst.sets.iter().enumerate() {
        let label = if i + 1 == m {
            "destination".to_string()
        } else {
            format!("after set {i}")
        };
        nodes.push(Node::plain(i + 1, label));
        let weight: TimeUnits = set.iter().map(|&j| base.pow(j as u32)).sum();
        arcs.push(Arc::new(i, i + 1, k.clone()));
        arcs.push(Arc::new(i, i + 1, weight + k));
    }
    let device = Device::new(nodes, arcs, NodeId(0), NodeId(m));

    let full_cover: TimeUnits = (0..inst.universe).map(|j| base.pow(j as u32)).sum();
    let target = full_cover + TimeUnits::from(m as u64) * k;
    let readout = ReadoutSpec::point(
        target,
        format!(
            "arrivals here chose sets covering each of the {} elements exactly once",
            inst.universe
        ),
    );
    let mut constants = BTreeMap::new();
    constants.insert("b".to_string(), base);
    constants.insert("k".to_string(), k.clone());
    Ok(CompilationResult {
        device,
        readout,
        constants,
        multiplicity_semantics: "subcollections covering every element exactly once".to_string(),
    })
}

pub(crate) fn validate_tsp(inst: &TspDecision) -> Result<(), Error> {
    if inst.vertices < 2 {
        return Err(Error::InvalidInstance(
            "tsp_decision needs at least two vertices".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    for &(u, v, _) in &inst.weights {
        if u >= inst.vertices || v >= inst.vertices {
            return Err(Error::InvalidInstance(format!(
                "arc ({u}, {v}) references a vertex outside 0..{}",
                inst.vertices
            )));
        }
        if u == v {
            return Err(Error::InvalidInstance(format!(
                "self-loop on vertex {u}: the adjacency must be irreflexive"
            )));
        }
        if !seen.insert((u, v)) {
            return Err(Error::InvalidInstance(format!(
                "arc ({u}, {v}) is listed twice"
            )));
        }
    }
    Ok(())
}

/// The Hamiltonian digit device, scaled up by Q = (Σ all weights) + 1,
/// with each graph arc's weight added on top of its scaled delay. A walk's
/// total is Q * (digit part) + (weight part); in-window walks must have
/// digit part exactly the Hamiltonian target H (weights of at most n-1
/// arcs cannot bridge a gap of Q or more), so the window [H*Q, H*Q+bound]
/// collects precisely the Hamiltonian paths of weight at most the bound.
pub fn compile_tsp(inst: &TspDecision) -> Result<CompilationResult, Error> {
    validate_tsp(inst)?;
    let n = inst.vertices;
    let base = TimeUnits::from(n as u64 + 1);
    let arc_units = base.pow(n as u32);
    let total_weight: TimeUnits = inst
        .weights
        .iter()
        .map(|&(_, _, w)| TimeUnits::from(w))
        .sum();
    let modulus = &total_weight + &TimeUnits::one();
    let arc_delay = &arc_units * &modulus;

    let mut nodes = vec![Node::plain(0, "start")];
    for i in 0..n {
        nodes.push(Node::new(
            i + 1,
            &base.pow(i as u32) * &modulus,
            format!("vertex {i}"),
        ));
    }
    nodes.push(Node::plain(n + 1, "destination"));

    let mut arcs = Vec::new();
    for i in 0..n {
        arcs.push(Arc::new(0, i + 1, arc_delay.clone()));
        arcs.push(Arc::new(i + 1, n + 1, arc_delay.clone()));
    }
    for &(u, v, w) in &inst.weights {
        arcs.push(Arc::new(u + 1, v + 1, &arc_delay + &TimeUnits::from(w)));
    }
    let device = Device::new(nodes, arcs, NodeId(0), NodeId(n + 1));

    let digit_sum: TimeUnits = (0..n).map(|i| base.pow(i as u32)).sum();
    let hamiltonian_target = digit_sum + TimeUnits::from(n as u64 + 1) * &arc_units;
    let window_lo = &hamiltonian_target * &modulus;
    // Any Hamiltonian path weighs at most the sum of all weights, so a
    // larger bound asks for nothing extra; clamping keeps the window
    // inside one Q-block, which the soundness argument needs.
    let effective_bound = TimeUnits::from(inst.bound).min(total_weight);
    let window_hi = &window_lo + &effective_bound;
    let readout = ReadoutSpec::window(
        window_lo,
        window_hi,
        format!(
            "arrivals here are Hamiltonian paths of weight at most {}",
            inst.bound
        ),
    )?;
    let mut constants = BTreeMap::new();
    constants.insert("b".to_string(), base);
    constants.insert("A".to_string(), arc_units);
    constants.insert("Q".to_string(), modulus);
    constants.insert("H".to_string(), hamiltonian_target);
    constants.insert("effective_bound".to_string(), effective_bound);
    Ok(CompilationResult {
        device,
        readout,
        constants,
        multiplicity_semantics:
            "directed Hamiltonian paths of total weight at most the bound".to_string(),
    })
}
