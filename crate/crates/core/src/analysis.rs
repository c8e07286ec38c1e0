//! Physical figures for devices: cable lengths, intensity dynamic range,
//! and how the largest delay grows with instance size.
//!
//! Everything here stays exact until a quantity is inherently physical
//! (meters); those are the only `f64`s in the crate.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::compile::{
    compile, Diophantine, ExactCover, Hamiltonian, ProblemInstance, ProblemKind, SubsetSum,
    TspDecision, UnboundedSubsetSum,
};
use crate::device::Device;
use crate::error::Error;
use crate::sim::ArrivalMap;
use crate::units::TimeUnits;

/// Signal speed and timing precision of a hypothetical realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    signal_speed: f64,
    precision: f64,
}

impl PhysicalParams {
    /// `signal_speed` in meters per second, `precision` in seconds; both
    /// must be finite and strictly positive.
    pub fn new(signal_speed: f64, precision: f64) -> Result<Self, Error> {
        if !signal_speed.is_finite() || signal_speed <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "signal speed must be a positive finite number, got {signal_speed}"
            )));
        }
        if !precision.is_finite() || precision <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "precision must be a positive finite number, got {precision}"
            )));
        }
        Ok(PhysicalParams {
            signal_speed,
            precision,
        })
    }

    pub fn signal_speed(&self) -> f64 {
        self.signal_speed
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }
}

/// The shortest physically distinguishable cable: distance covered in one
/// timing-precision tick. This is also the length of one delay unit.
pub fn min_cable_length(params: &PhysicalParams) -> f64 {
    params.signal_speed * params.precision
}

/// Bits needed to register the faintest arrival against the injected unit
/// signal: ⌈log₂(1/intensity)⌉, computed exactly by shifting. Intensities
/// of 1 or more need 0 bits.
pub fn dynamic_range_bits(intensity: &BigRational) -> u64 {
    let numer = intensity.numer().magnitude();
    let denom = intensity.denom().magnitude();
    if numer.is_zero() || numer >= denom {
        return 0;
    }
    // ⌈log₂(d/n)⌉ is the bit-length gap, plus one when the shifted
    // numerator still falls short.
    let mut bits = denom.bits() - numer.bits();
    if (numer << bits) < *denom {
        bits += 1;
    }
    bits
}

/// Physical summary of one device and one simulation of it.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    /// Meters per delay unit (= shortest legal cable).
    pub unit_length: f64,
    /// Σ arc delays, in meters.
    pub total_cable_length: f64,
    /// Largest single delay anywhere in the device (arc or node).
    pub max_delay: TimeUnits,
    pub num_arcs: usize,
    pub num_nodes: usize,
    /// Faintest recorded arrival; `None` when nothing arrived.
    pub min_arrival_intensity: Option<BigRational>,
    /// Detector bits for the faintest arrival; `None` when nothing arrived.
    pub dynamic_range_bits: Option<u64>,
    pub arrival_count_total: BigUint,
}

/// Summarizes `device` and the `arrivals` recorded from simulating it,
/// under the physical parameters `params`.
pub fn device_report(
    device: &Device,
    arrivals: &ArrivalMap,
    params: &PhysicalParams,
) -> AnalysisReport {
    let unit_length = min_cable_length(params);
    let cable_units = device.total_arc_delay();
    let total_cable_length =
        cable_units.magnitude().to_f64().unwrap_or(f64::INFINITY) * unit_length;
    let min_arrival_intensity = arrivals
        .entries()
        .values()
        .map(|entry| entry.intensity.clone())
        .min();
    let dynamic_range_bits = min_arrival_intensity.as_ref().map(dynamic_range_bits);
    AnalysisReport {
        unit_length,
        total_cable_length,
        max_delay: device.max_delay(),
        num_arcs: device.arcs().len(),
        num_nodes: device.nodes().len(),
        min_arrival_intensity,
        dynamic_range_bits,
        arrival_count_total: arrivals.total_count(),
    }
}

/// How the largest delay in a compiled device scales with instance size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthVerdict {
    Polynomial,
    Exponential,
}

impl fmt::Display for GrowthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthVerdict::Polynomial => "polynomial",
            GrowthVerdict::Exponential => "exponential",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthReport {
    pub kind: ProblemKind,
    pub sizes: Vec<usize>,
    /// Largest delay of the compiled device at each size.
    pub max_delays: Vec<TimeUnits>,
    pub verdict: GrowthVerdict,
}

/// A delay ratio must beat this factor per size step (see
/// [`growth_classification`]) before growth is called exponential.
pub const GROWTH_RATIO_THRESHOLD: u64 = 2;

/// The deterministic instance family used for growth measurements: values
/// and coefficients are 1..=size, graphs are complete, weights are 1.
pub fn growth_instance(kind: ProblemKind, size: usize) -> ProblemInstance {
    let ladder: Vec<u64> = (1..=size as u64).collect();
    match kind {
        ProblemKind::SubsetSum => {
            let half: u64 = ladder.iter().sum::<u64>() / 2;
            ProblemInstance::SubsetSum(SubsetSum {
                values: ladder,
                target: half,
            })
        }
        ProblemKind::UnboundedSubsetSum => {
            ProblemInstance::UnboundedSubsetSum(UnboundedSubsetSum {
                values: ladder,
                target: size as u64,
            })
        }
        ProblemKind::Diophantine => ProblemInstance::Diophantine(Diophantine {
            coefficients: ladder,
            constant: size as u64,
            require_positive: false,
        }),
        ProblemKind::Hamiltonian => ProblemInstance::Hamiltonian(Hamiltonian {
            vertices: size,
            arcs: complete_arcs(size),
        }),
        ProblemKind::ExactCover => ProblemInstance::ExactCover(ExactCover {
            universe: size,
            sets: (0..size).map(|j| vec![j]).collect(),
        }),
        ProblemKind::TspDecision => ProblemInstance::TspDecision(TspDecision {
            vertices: size,
            weights: complete_arcs(size)
                .into_iter()
                .map(|(u, v)| (u, v, 1))
                .collect(),
            bound: size as u64,
        }),
    }
}

fn complete_arcs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect()
}

/// Compiles the generator family at each size and classifies how the
/// largest delay grows. The verdict is a ratio heuristic, not an
/// asymptotic proof: growth counts as exponential exactly when the last
/// three size-to-size delay ratios are nondecreasing and each exceeds
/// [`GROWTH_RATIO_THRESHOLD`]. Needs at least 4 strictly ascending sizes.
pub fn growth_classification(kind: ProblemKind, sizes: &[usize]) -> Result<GrowthReport, Error> {
    growth_classification_with_threshold(kind, sizes, GROWTH_RATIO_THRESHOLD)
}

pub fn growth_classification_with_threshold(
    kind: ProblemKind,
    sizes: &[usize],
    threshold: u64,
) -> Result<GrowthReport, Error> {
    if sizes.len() < 4 {
        return Err(Error::GrowthSizes(format!(
            "classification needs at least 4 sizes, got {}",
            sizes.len()
        )));
    }
    if !sizes.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::GrowthSizes(
            "sizes must be strictly ascending".into(),
        ));
    }
    let max_delays = sizes
        .iter()
        .map(|&s| Ok(compile(&growth_instance(kind, s))?.device.max_delay()))
        .collect::<Result<Vec<_>, Error>>()?;
    let verdict = classify(&max_delays, threshold);
    Ok(GrowthReport {
        kind,
        sizes: sizes.to_vec(),
        max_delays,
        verdict,
    })
}

/// Exact rational comparisons on the last three ratios d[i+1]/d[i]:
/// each must exceed `threshold`, and together they must be nondecreasing
/// (d[i+1]² ≤ d[i]·d[i+2] by cross-multiplication).
fn classify(delays: &[TimeUnits], threshold: u64) -> GrowthVerdict {
    let n = delays.len();
    let factor = TimeUnits::from(threshold);
    let all_exceed = (n - 4..n - 1).all(|i| delays[i + 1] > &factor * &delays[i]);
    let nondecreasing = (n - 4..n - 2)
        .all(|i| &delays[i + 1] * &delays[i + 1] <= &delays[i] * &delays[i + 2]);
    if all_exceed && nondecreasing {
        GrowthVerdict::Exponential
    } else {
        GrowthVerdict::Polynomial
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::{compile_subset_sum, horizon_for};
    use crate::device::{Arc, Node, NodeId};
    use crate::sim::simulate;
    use num_bigint::BigInt;

    fn tu(v: u64) -> TimeUnits {
        TimeUnits::from(v)
    }

    fn ratio(numer: u64, denom: u64) -> BigRational {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    #[test]
    fn params_must_be_positive_and_finite() {
        assert!(PhysicalParams::new(3.0e8, 1.0e-12).is_ok());
        for (v, p) in [
            (0.0, 1.0),
            (-1.0, 1.0),
            (1.0, 0.0),
            (1.0, -2.0),
            (f64::NAN, 1.0),
            (1.0, f64::INFINITY),
        ] {
            assert!(
                matches!(PhysicalParams::new(v, p), Err(Error::InvalidParams(_))),
                "({v}, {p}) should be rejected"
            );
        }
    }

    #[test]
    fn unit_length_is_speed_times_precision() {
        let light_picosecond = PhysicalParams::new(3.0e8, 1.0e-12).unwrap();
        let length = min_cable_length(&light_picosecond);
        assert!(((length - 3.0e-4) / 3.0e-4).abs() < 1.0e-15);

        let slow = PhysicalParams::new(3.0e1, 1.0e-12).unwrap();
        assert!(((min_cable_length(&slow) - 3.0e-11) / 3.0e-11).abs() < 1.0e-15);

        let unit = PhysicalParams::new(1.0, 1.0).unwrap();
        assert_eq!(min_cable_length(&unit), 1.0);
    }

    #[test]
    fn dynamic_range_is_a_ceiling_log() {
        let cases = [
            (1u64, 1u64, 0u64),
            (1, 2, 1),
            (1, 3, 2),
            (3, 4, 1),
            (5, 8, 1),
            (1, 8, 3),
            (1, 1024, 10),
            (3, 1, 0),
        ];
        for (n, d, expected) in cases {
            assert_eq!(dynamic_range_bits(&ratio(n, d)), expected, "{n}/{d}");
        }
    }

    #[test]
    fn report_on_a_three_value_chain() {
        let result = compile_subset_sum(
            &SubsetSum {
                values: vec![2, 3, 5],
                target: 10,
            },
            &TimeUnits::one(),
        )
        .unwrap();
        let arrivals = simulate(&result.device, &horizon_for(&result));
        let params = PhysicalParams::new(1.0, 1.0).unwrap();
        let report = device_report(&result.device, &arrivals, &params);
        assert_eq!(report.unit_length, 1.0);
        // Arc delays: skips 1+1+1, takes 3+4+6.
        assert_eq!(report.total_cable_length, 16.0);
        assert_eq!(report.max_delay, tu(6));
        assert_eq!(report.num_arcs, 6);
        assert_eq!(report.num_nodes, 4);
        assert_eq!(report.min_arrival_intensity, Some(ratio(1, 8)));
        assert_eq!(report.dynamic_range_bits, Some(3));
        assert_eq!(report.arrival_count_total, BigUint::from(8u8));
    }

    #[test]
    fn single_arc_device_needs_zero_bits() {
        let device = Device::new(
            vec![Node::plain(0, "in"), Node::plain(1, "out")],
            vec![Arc::new(0, 1, tu(1))],
            NodeId(0),
            NodeId(1),
        );
        let params = PhysicalParams::new(1.0, 1.0).unwrap();
        let arrivals = simulate(&device, &tu(1));
        let report = device_report(&device, &arrivals, &params);
        assert_eq!(report.min_arrival_intensity, Some(ratio(1, 1)));
        assert_eq!(report.dynamic_range_bits, Some(0));
        assert_eq!(report.arrival_count_total, BigUint::from(1u8));

        // With horizon 0 nothing arrives and the intensity fields vanish.
        let nothing = simulate(&device, &tu(0));
        let empty = device_report(&device, &nothing, &params);
        assert_eq!(empty.min_arrival_intensity, None);
        assert_eq!(empty.dynamic_range_bits, None);
        assert!(empty.arrival_count_total.is_zero());
    }

    #[test]
    fn ten_splits_need_ten_bits() {
        let result = compile(&growth_instance(ProblemKind::SubsetSum, 10)).unwrap();
        let arrivals = simulate(&result.device, &horizon_for(&result));
        let params = PhysicalParams::new(1.0, 1.0).unwrap();
        let report = device_report(&result.device, &arrivals, &params);
        assert_eq!(report.dynamic_range_bits, Some(10));
    }

    #[test]
    fn growth_generators_compile_at_small_sizes() {
        for kind in [
            ProblemKind::SubsetSum,
            ProblemKind::UnboundedSubsetSum,
            ProblemKind::Diophantine,
            ProblemKind::Hamiltonian,
            ProblemKind::ExactCover,
            ProblemKind::TspDecision,
        ] {
            let result = compile(&growth_instance(kind, 4)).unwrap();
            assert!(
                result.device.validate().is_empty(),
                "{kind} generator at size 4"
            );
        }
    }

    #[test]
    fn chain_families_grow_polynomially() {
        let sizes: Vec<usize> = (4..=10).collect();

        let subset = growth_classification(ProblemKind::SubsetSum, &sizes).unwrap();
        assert_eq!(subset.verdict, GrowthVerdict::Polynomial);
        let expected: Vec<TimeUnits> = (4..=10u64).map(|s| tu(s + 1)).collect();
        assert_eq!(subset.max_delays, expected);

        let unbounded = growth_classification(ProblemKind::UnboundedSubsetSum, &sizes).unwrap();
        assert_eq!(unbounded.verdict, GrowthVerdict::Polynomial);
        let expected: Vec<TimeUnits> = (4..=10u64).map(|s| tu(s * (s + 1) + 1)).collect();
        assert_eq!(unbounded.max_delays, expected);

        let dioph = growth_classification(ProblemKind::Diophantine, &sizes).unwrap();
        assert_eq!(dioph.verdict, GrowthVerdict::Polynomial);
        let expected: Vec<TimeUnits> = (4..=10u64).map(tu).collect();
        assert_eq!(dioph.max_delays, expected);
    }

    #[test]
    fn digit_families_grow_exponentially() {
        let sizes: Vec<usize> = (3..=6).collect();

        let ham = growth_classification(ProblemKind::Hamiltonian, &sizes).unwrap();
        assert_eq!(ham.verdict, GrowthVerdict::Exponential);
        assert_eq!(
            ham.max_delays,
            vec![tu(64), tu(625), tu(7776), tu(117_649)]
        );

        let cover = growth_classification(ProblemKind::ExactCover, &sizes).unwrap();
        assert_eq!(cover.verdict, GrowthVerdict::Exponential);
        assert_eq!(
            cover.max_delays,
            vec![tu(17), tu(126), tu(1_297), tu(16_808)]
        );

        let tsp = growth_classification(ProblemKind::TspDecision, &sizes).unwrap();
        assert_eq!(tsp.verdict, GrowthVerdict::Exponential);
        // (s+1)^s · (s(s-1)+1) + 1 at s = 3.
        assert_eq!(tsp.max_delays[0], tu(449));
    }

    #[test]
    fn size_lists_are_checked() {
        for bad in [vec![4, 5, 6], vec![4, 5, 6, 6], vec![4, 6, 5, 7]] {
            assert!(
                matches!(
                    growth_classification(ProblemKind::SubsetSum, &bad),
                    Err(Error::GrowthSizes(_))
                ),
                "{bad:?} should be rejected"
            );
        }
    }

    #[test]
    fn verdict_needs_both_large_and_nondecreasing_ratios() {
        let doubling: Vec<TimeUnits> = (0..5).map(|i| tu(1 << i)).collect();
        // Ratios equal the threshold but never exceed it.
        assert_eq!(classify(&doubling, 2), GrowthVerdict::Polynomial);
        assert_eq!(classify(&doubling, 1), GrowthVerdict::Exponential);

        let tripling: Vec<TimeUnits> = (0..5).map(|i| tu(3u64.pow(i))).collect();
        assert_eq!(classify(&tripling, 2), GrowthVerdict::Exponential);

        // Big but slackening ratios: 4, 3, then 2.5.
        let slackening = vec![tu(2), tu(8), tu(24), tu(60)];
        assert_eq!(classify(&slackening, 2), GrowthVerdict::Polynomial);
    }
}
