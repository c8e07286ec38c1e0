//! Brute-force reference solvers.
//!
//! These answer the same questions as the compiled devices but by direct
//! enumeration, sharing no code with the compilers or the simulator. They
//! exist to cross-check device answers, so they favor obviousness over
//! speed and refuse instances whose search space exceeds explicit bounds
//! rather than silently grinding forever.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;

use crate::compile::{
    validate_diophantine, validate_exact_cover, validate_hamiltonian, validate_subset_sum,
    validate_tsp, validate_unbounded, Diophantine, ExactCover, Hamiltonian, ProblemInstance,
    SubsetSum, TspDecision, UnboundedSubsetSum,
};
use crate::error::Error;
use crate::sim::Decision;

/// At most this many example solutions are collected per run.
pub const WITNESS_CAP: usize = 10;

/// Hard ceilings on enumeration size. Exceeding one is an error, never a
/// silent truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleBounds {
    /// Subset-sum values (2^n masks are enumerated).
    pub max_subset_values: usize,
    /// Unbounded subset-sum target (the DP table has target+1 rows).
    pub max_dp_target: u64,
    /// Product of per-unknown ranges in the Diophantine search.
    pub max_dioph_space: u64,
    /// Vertices for permutation-based searches (n! orders).
    pub max_vertices: usize,
    /// Sets for exact cover (2^m subcollections).
    pub max_sets: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds {
            max_subset_values: 24,
            max_dp_target: 1_000_000,
            max_dioph_space: 10_000_000,
            max_vertices: 9,
            max_sets: 20,
        }
    }
}

/// What an oracle found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub decision: Decision,
    /// Exact number of solutions.
    pub count: BigUint,
    /// Up to [`WITNESS_CAP`] example solutions. Encoding is per problem:
    /// chosen indices (subset-sum, exact cover), value sequences
    /// (unbounded), unknown assignments (Diophantine), or vertex orders
    /// (Hamiltonian, TSP).
    pub witnesses: Vec<Vec<u64>>,
    /// Minimum Hamiltonian path weight over *all* paths — TSP only, and
    /// independent of the bound being asked about.
    pub min_weight: Option<u64>,
}

fn result_from_count(count: u64, witnesses: Vec<Vec<u64>>) -> OracleResult {
    OracleResult {
        decision: if count == 0 { Decision::No } else { Decision::Yes },
        count: BigUint::from(count),
        witnesses,
        min_weight: None,
    }
}

pub fn oracle_for(
    instance: &ProblemInstance,
    bounds: &OracleBounds,
) -> Result<OracleResult, Error> {
    match instance {
        ProblemInstance::SubsetSum(i) => oracle_subset_sum(i, bounds),
        ProblemInstance::UnboundedSubsetSum(i) => oracle_unbounded_subset_sum(i, bounds),
        ProblemInstance::Diophantine(i) => oracle_diophantine(i, bounds),
        ProblemInstance::Hamiltonian(i) => oracle_hamiltonian(i, bounds),
        ProblemInstance::ExactCover(i) => oracle_exact_cover(i, bounds),
        ProblemInstance::TspDecision(i) => oracle_tsp(i, bounds),
    }
}

pub fn oracle_subset_sum(
    inst: &SubsetSum,
    bounds: &OracleBounds,
) -> Result<OracleResult, Error> {
    validate_subset_sum(inst)?;
    let n = inst.values.len();
    if n > bounds.max_subset_values {
        return Err(Error::EnumerationBound(format!(
            "{n} values exceed the subset enumeration bound of {}",
            bounds.max_subset_values
        )));
    }
    let target = inst.target as u128;
    let mut count = 0u64;
    let mut witnesses = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let sum: u128 = inst
            .values
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v as u128)
            .sum();
        if sum == target {
            count += 1;
            if witnesses.len() < WITNESS_CAP {
                witnesses.push((0..n as u64).filter(|&i| mask >> i & 1 == 1).collect());
            }
        }
    }
    Ok(result_from_count(count, witnesses))
}

pub fn oracle_unbounded_subset_sum(
    inst: &UnboundedSubsetSum,
    bounds: &OracleBounds,
) -> Result<OracleResult, Error> {
    validate_unbounded(inst)?;
    if inst.target > bounds.max_dp_target {
        return Err(Error::EnumerationBound(format!(
            "target {} exceeds the composition DP bound of {}",
            inst.target, bounds.max_dp_target
        )));
    }
    // ways[t] = number of ordered sequences of values summing to t.
    let target = inst.target as usize;
    let mut ways = vec![BigUint::zero(); target + 1];
    ways[0] = BigUint::from(1u8);
    for t in 1..=target {
        let mut total = BigUint::zero();
        for &v in &inst.values {
            let v = v as usize;
            if v <= t {
                total += &ways[t - v];
            }
        }
        ways[t] = total;
    }
    let count = ways[target].clone();
    let witnesses = composition_witnesses(&inst.values, inst.target, WITNESS_CAP);
    Ok(OracleResult {
        decision: if count.is_zero() {
            Decision::No
        } else {
            Decision::Yes
        },
        count,
        witnesses,
        min_weight: None,
    })
}

/// Lexicographic depth-first enumeration of compositions, stopping at
/// `cap`. Iterative so deep compositions cannot overflow the stack.
fn composition_witnesses(values: &[u64], target: u64, cap: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut prefix: Vec<u64> = Vec::new();
    // (prefix length on entry, remaining target, next value index to try)
    let mut stack = vec![(0usize, target, 0usize)];
    while let Some((depth, remaining, choice)) = stack.pop() {
        prefix.truncate(depth);
        if remaining == 0 {
            out.push(prefix.clone());
            if out.len() >= cap {
                break;
            }
            continue;
        }
        if choice >= values.len() {
            continue;
        }
        stack.push((depth, remaining, choice + 1));
        let v = values[choice];
        if v <= remaining {
            prefix.push(v);
            stack.push((depth + 1, remaining - v, 0));
        }
    }
    out
}

pub fn oracle_diophantine(
    inst: &Diophantine,
    bounds: &OracleBounds,
) -> Result<OracleResult, Error> {
    validate_diophantine(inst)?;
    let mut space = 1u128;
    for &a in &inst.coefficients {
        space = space.saturating_mul(inst.constant as u128 / a as u128 + 1);
    }
    if space > bounds.max_dioph_space as u128 {
        return Err(Error::EnumerationBound(format!(
            "search space of {space} assignments exceeds the bound of {}",
            bounds.max_dioph_space
        )));
    }
    let min_x = if inst.require_positive { 1 } else { 0 };
    let mut count = 0u64;
    let mut witnesses = Vec::new();
    let mut assignment = vec![0u64; inst.coefficients.len()];
    search_dioph(
        &inst.coefficients,
        inst.constant,
        min_x,
        0,
        &mut assignment,
        &mut count,
        &mut witnesses,
    );
    Ok(result_from_count(count, witnesses))
}

fn search_dioph(
    coeffs: &[u64],
    remaining: u64,
    min_x: u64,
    depth: usize,
    assignment: &mut Vec<u64>,
    count: &mut u64,
    witnesses: &mut Vec<Vec<u64>>,
) {
    if depth == coeffs.len() {
        if remaining == 0 {
            *count += 1;
            if witnesses.len() < WITNESS_CAP {
                witnesses.push(assignment.clone());
            }
        }
        return;
    }
    let a = coeffs[depth];
    let mut x = min_x;
    while x.checked_mul(a).is_some_and(|used| used <= remaining) {
        assignment[depth] = x;
        search_dioph(
            coeffs,
            remaining - x * a,
            min_x,
            depth + 1,
            assignment,
            count,
            witnesses,
        );
        x += 1;
    }
}

pub fn oracle_hamiltonian(
    inst: &Hamiltonian,
    bounds: &OracleBounds,
) -> Result<OracleResult, Error> {
    validate_hamiltonian(inst)?;
    if inst.vertices > bounds.max_vertices {
        return Err(Error::EnumerationBound(format!(
            "{} vertices exceed the permutation bound of {}",
            inst.vertices, bounds.max_vertices
        )));
    }
    let adjacency: BTreeSet<(usize, usize)> = inst.arcs.iter().copied().collect();
    let mut count = 0u64;
    let mut witnesses = Vec::new();
    for order in (0..inst.vertices).permutations(inst.vertices) {
        if order.windows(2).all(|w| adjacency.contains(&(w[0], w[1]))) {
            count += 1;
            if witnesses.len() < WITNESS_CAP {
                witnesses.push(order.iter().map(|&v| v as u64).collect());
            }
        }
    }
    Ok(result_from_count(count, witnesses))
}

pub fn oracle_exact_cover(
    inst: &ExactCover,
    bounds: &OracleBounds,
) -> Result<OracleResult, Error> {
    validate_exact_cover(inst)?;
    let m = inst.sets.len();
    if m > bounds.max_sets {
        return Err(Error::EnumerationBound(format!(
            "{m} sets exceed the subcollection bound of {}",
            bounds.max_sets
        )));
    }
    if inst.universe > 63 {
        return Err(Error::EnumerationBound(format!(
            "universe of {} elements does not fit the bitmask oracle (max 63)",
            inst.universe
        )));
    }
    let full: u64 = if inst.universe == 0 {
        0
    } else {
        (1u64 << inst.universe) - 1
    };
    let set_masks: Vec<u64> = inst
        .sets
        .iter()
        .map(|set| set.iter().fold(0u64, |acc, &e| acc | 1 << e))
        .collect();
    let mut count = 0u64;
    let mut witnesses = Vec::new();
    'outer: for pick in 0u64..(1u64 << m) {
        let mut union = 0u64;
        for (i, &sm) in set_masks.iter().enumerate() {
            if pick >> i & 1 == 1 {
                if union & sm != 0 {
                    continue 'outer; // an element covered twice
                }
                union |= sm;
            }
        }
        if union == full {
            count += 1;
            if witnesses.len() < WITNESS_CAP {
                witnesses.push((0..m as u64).filter(|&i| pick >> i & 1 == 1).collect());
            }
        }
    }
    Ok(result_from_count(count, witnesses))
}

pub fn oracle_tsp(inst: &TspDecision, bounds: &OracleBounds) -> Result<OracleResult, Error> {
    validate_tsp(inst)?;
    if inst.vertices > bounds.max_vertices {
        return Err(Error::EnumerationBound(format!(
            "{} vertices exceed the permutation bound of {}",
            inst.vertices, bounds.max_vertices
        )));
    }
    let weight: BTreeMap<(usize, usize), u64> = inst
        .weights
        .iter()
        .map(|&(u, v, w)| ((u, v), w))
        .collect();
    let bound = inst.bound as u128;
    let mut count = 0u64;
    let mut witnesses = Vec::new();
    let mut min_weight: Option<u128> = None;
    for order in (0..inst.vertices).permutations(inst.vertices) {
        let mut total = 0u128;
        let mut connected = true;
        for w in order.windows(2) {
            match weight.get(&(w[0], w[1])) {
                Some(&wt) => total += wt as u128,
                None => {
                    connected = false;
                    break;
                }
            }
        }
        if !connected {
            continue;
        }
        min_weight = Some(min_weight.map_or(total, |m| m.min(total)));
        if total <= bound {
            count += 1;
            if witnesses.len() < WITNESS_CAP {
                witnesses.push(order.iter().map(|&v| v as u64).collect());
            }
        }
    }
    let min_weight = match min_weight {
        Some(m) => Some(u64::try_from(m).map_err(|_| {
            Error::EnumerationBound("minimum path weight overflows u64".to_string())
        })?),
        None => None,
    };
    Ok(OracleResult {
        decision: if count == 0 { Decision::No } else { Decision::Yes },
        count: BigUint::from(count),
        witnesses,
        min_weight,
    })
}
