//! Event-driven simulation of signal propagation through a device.
//!
//! A signal of intensity 1 is injected into the start node at time 0. On
//! arrival at a node the node's internal delay is applied; the settled
//! signal then splits evenly across the outgoing arcs, each copy reaching
//! the arc's head after the arc delay. The simulator tracks *fronts*: all
//! signal copies sitting at the same node at the same moment, aggregated
//! into one count and one exact intensity.
//!
//! Correctness of the merge rests on the pop order. Fronts are keyed by
//! `(time, node)` in a `BTreeMap`, so they are processed in nondecreasing
//! time with ties broken by node index. Every arc delay is at least one
//! unit, so a child front is strictly later than its parent; by the time a
//! front is popped, every walk that could reach that `(node, time)` pair
//! has already been folded in, and each pair is processed exactly once.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::device::{Device, NodeId, ReadoutSpec};
use crate::error::Error;
use crate::units::TimeUnits;

/// All walks from the start that reach the destination at one moment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalEntry {
    /// Number of distinct start-to-destination walks with this total delay
    /// (arc delays plus internal delays of every node passed, the
    /// destination included).
    pub count: BigUint,
    /// Exact fraction of the injected signal arriving at this moment.
    pub intensity: BigRational,
}

/// Bookkeeping accumulated over a completed run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimStats {
    /// Fronts popped from the queue (merged, so ≤ number of walks).
    pub fronts_processed: u64,
    /// Largest number of fronts simultaneously queued.
    pub peak_live_fronts: usize,
    /// Walks cut off because their settled time passed the horizon.
    pub pruned_count: BigUint,
    pub pruned_intensity: BigRational,
    /// Walks that died in a node with no outgoing arcs other than the
    /// destination.
    pub lost_count: BigUint,
    pub lost_intensity: BigRational,
}

/// Complete record of every destination arrival up to a horizon.
///
/// The intensities in `entries`, `pruned_intensity` and `lost_intensity`
/// always sum to exactly 1: the split rule conserves signal and every walk
/// ends in exactly one of the three buckets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalMap {
    entries: BTreeMap<TimeUnits, ArrivalEntry>,
    horizon: TimeUnits,
    stats: SimStats,
}

impl ArrivalMap {
    /// Arrivals keyed by moment, in increasing time order.
    pub fn entries(&self) -> &BTreeMap<TimeUnits, ArrivalEntry> {
        &self.entries
    }

    /// The run covered all arrivals at times `<= horizon`.
    pub fn horizon(&self) -> &TimeUnits {
        &self.horizon
    }

    pub fn stats(&self) -> &SimStats {
        &self.stats
    }

    /// Total number of recorded walks across all moments.
    pub fn total_count(&self) -> BigUint {
        self.entries.values().map(|e| &e.count).sum()
    }

    /// Total recorded intensity across all moments.
    pub fn total_intensity(&self) -> BigRational {
        self.entries.values().map(|e| &e.intensity).sum()
    }

    /// Answers "did anything arrive in the window, and how much".
    ///
    /// Fails if the window extends past the simulated horizon, because
    /// arrivals beyond the horizon were never computed and a `No` there
    /// would be unsound.
    pub fn read(&self, readout: &ReadoutSpec) -> Result<Answer, Error> {
        if readout.hi() > &self.horizon {
            return Err(Error::WindowBeyondHorizon {
                lo: readout.lo().clone(),
                hi: readout.hi().clone(),
                horizon: self.horizon.clone(),
            });
        }
        let mut multiplicity = BigUint::zero();
        let mut intensity = BigRational::zero();
        let mut hit_times = Vec::new();
        for (time, entry) in self.entries.range(readout.lo().clone()..=readout.hi().clone()) {
            multiplicity += &entry.count;
            intensity += &entry.intensity;
            hit_times.push(time.clone());
        }
        let decision = if multiplicity.is_zero() {
            Decision::No
        } else {
            Decision::Yes
        };
        Ok(Answer {
            decision,
            multiplicity,
            intensity,
            hit_times,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
}

impl Decision {
    pub fn is_yes(self) -> bool {
        matches!(self, Decision::Yes)
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Yes => "YES",
            Decision::No => "NO",
        })
    }
}

/// Result of reading a window out of an [`ArrivalMap`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    pub decision: Decision,
    /// Number of walks landing inside the window; for compiled devices this
    /// equals the number of solutions the window encodes.
    pub multiplicity: BigUint,
    /// Total intensity landing inside the window.
    pub intensity: BigRational,
    /// Every in-window moment with at least one arrival, ascending.
    pub hit_times: Vec<TimeUnits>,
}

/// Outcome of a budgeted run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuardedRun {
    Completed(ArrivalMap),
    BudgetExceeded(BudgetReport),
}

/// What the run looked like when its live-front count passed the budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetReport {
    pub max_fronts: u64,
    /// Fronts queued at the moment the run stopped.
    pub live_fronts: usize,
    pub fronts_processed: u64,
    /// Time of the last front actually processed.
    pub max_time_reached: Option<TimeUnits>,
}

struct Front {
    count: BigUint,
    intensity: BigRational,
}

/// Runs the device to completion, recording every arrival at or before
/// `horizon`.
///
/// Panics if the device is structurally invalid; use
/// [`Device::ensure_valid`] or [`simulate_with_budget`] when the device
/// comes from untrusted input.
pub fn simulate(device: &Device, horizon: &TimeUnits) -> ArrivalMap {
    match run(device, horizon, None) {
        Ok(GuardedRun::Completed(map)) => map,
        Ok(GuardedRun::BudgetExceeded(_)) => unreachable!("unbudgeted run cannot stop early"),
        Err(e) => panic!("simulate requires a well-formed device: {e}"),
    }
}

/// Like [`simulate`], but validates the device and aborts cleanly as soon
/// as more than `max_fronts` merged fronts are live at once. A run whose
/// peak equals `max_fronts` exactly still completes.
pub fn simulate_with_budget(
    device: &Device,
    horizon: &TimeUnits,
    max_fronts: u64,
) -> Result<GuardedRun, Error> {
    if max_fronts == 0 {
        return Err(Error::ZeroBudget);
    }
    run(device, horizon, Some(max_fronts))
}

fn run(device: &Device, horizon: &TimeUnits, budget: Option<u64>) -> Result<GuardedRun, Error> {
    device.ensure_valid()?;

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); device.nodes().len()];
    for (i, arc) in device.arcs().iter().enumerate() {
        adjacency[arc.from.index()].push(i);
    }

    let mut queue: BTreeMap<(TimeUnits, NodeId), Front> = BTreeMap::new();
    queue.insert(
        (TimeUnits::zero(), device.start()),
        Front {
            count: BigUint::one(),
            intensity: BigRational::one(),
        },
    );

    let mut entries: BTreeMap<TimeUnits, ArrivalEntry> = BTreeMap::new();
    let mut stats = SimStats {
        fronts_processed: 0,
        peak_live_fronts: 1,
        pruned_count: BigUint::zero(),
        pruned_intensity: BigRational::zero(),
        lost_count: BigUint::zero(),
        lost_intensity: BigRational::zero(),
    };
    while let Some(((time, node), front)) = queue.pop_first() {
        stats.fronts_processed += 1;

        // The node's internal delay applies on every pass, before any
        // split — and before the horizon check, since the signal is not
        // "here" until it has settled.
        let settled = &time + &device.nodes()[node.index()].internal_delay;
        if &settled > horizon {
            stats.pruned_count += &front.count;
            stats.pruned_intensity += &front.intensity;
            continue;
        }

        if node == device.destination() {
            match entries.entry(settled) {
                Entry::Occupied(mut e) => {
                    let entry = e.get_mut();
                    entry.count += &front.count;
                    entry.intensity += &front.intensity;
                }
                Entry::Vacant(v) => {
                    v.insert(ArrivalEntry {
                        count: front.count,
                        intensity: front.intensity,
                    });
                }
            }
            continue;
        }

        let out = &adjacency[node.index()];
        if out.is_empty() {
            stats.lost_count += &front.count;
            stats.lost_intensity += &front.intensity;
            continue;
        }

        let share = &front.intensity / BigRational::from_integer(BigInt::from(out.len()));
        for &arc_index in out {
            let arc = &device.arcs()[arc_index];
            let child_time = &settled + &arc.delay;
            if &child_time > horizon {
                // The child could only be pruned when popped; tally it now
                // and keep it out of the queue. Internal delays are
                // nonnegative, so this cannot resurrect a walk.
                stats.pruned_count += &front.count;
                stats.pruned_intensity += &share;
                continue;
            }
            match queue.entry((child_time, arc.to)) {
                Entry::Occupied(mut e) => {
                    let f = e.get_mut();
                    f.count += &front.count;
                    f.intensity += &share;
                }
                Entry::Vacant(v) => {
                    v.insert(Front {
                        count: front.count.clone(),
                        intensity: share.clone(),
                    });
                }
            }
        }
        stats.peak_live_fronts = stats.peak_live_fronts.max(queue.len());
        if let Some(max) = budget {
            if queue.len() as u64 > max {
                return Ok(GuardedRun::BudgetExceeded(BudgetReport {
                    max_fronts: max,
                    live_fronts: queue.len(),
                    fronts_processed: stats.fronts_processed,
                    max_time_reached: Some(time),
                }));
            }
        }
    }

    Ok(GuardedRun::Completed(ArrivalMap {
        entries,
        horizon: horizon.clone(),
        stats,
    }))
}
