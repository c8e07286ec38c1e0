//! Canonical text formats: JSON documents for devices, instances, oracle
//! results and reports, CSV for arrival tables.
//!
//! Every delay, count and rational component is serialized as a decimal
//! string, never a JSON number, so arbitrary-precision values survive a
//! round-trip bit-exactly. Physical lengths (the only non-exact values)
//! are rendered in scientific notation with six significant digits.
//! Output is canonically ordered and LF-terminated, so equal inputs
//! always produce byte-identical documents.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::AnalysisReport;
use crate::analysis::GrowthReport;
use crate::compile::ProblemInstance;
use crate::device::{Arc, Device, Node, NodeId, ReadoutSpec};
use crate::error::Error;
use crate::oracle::OracleResult;
use crate::sim::ArrivalMap;
use crate::units::TimeUnits;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    internal_delay: String,
    label: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcDoc {
    from: usize,
    to: usize,
    delay: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReadoutDoc {
    lo: String,
    hi: String,
    description: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceDoc {
    nodes: Vec<NodeDoc>,
    arcs: Vec<ArcDoc>,
    start: usize,
    destination: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    readout: Option<ReadoutDoc>,
}

fn json_error(err: serde_json::Error) -> Error {
    match err.classify() {
        serde_json::error::Category::Data => Error::Schema(err.to_string()),
        _ => Error::MalformedJson(err.to_string()),
    }
}

fn parse_delay(field: &str, text: &str) -> Result<TimeUnits, Error> {
    TimeUnits::from_decimal(text)
        .map_err(|e| Error::Schema(format!("{field} \"{text}\" is not a decimal string: {e}")))
}

/// Renders a device (and its readout, if any) as a canonical JSON
/// document: nodes sorted by id, arcs by (from, to, delay), delays as
/// decimal strings.
pub fn write_device(device: &Device, readout: Option<&ReadoutSpec>) -> String {
    let doc = DeviceDoc {
        nodes: device
            .nodes()
            .iter()
            .map(|n| NodeDoc {
                id: n.id.index(),
                internal_delay: n.internal_delay.to_string(),
                label: n.label.clone(),
            })
            .collect(),
        arcs: device
            .arcs()
            .iter()
            .map(|a| ArcDoc {
                from: a.from.index(),
                to: a.to.index(),
                delay: a.delay.to_string(),
            })
            .collect(),
        start: device.start().index(),
        destination: device.destination().index(),
        readout: readout.map(|r| ReadoutDoc {
            lo: r.lo().to_string(),
            hi: r.hi().to_string(),
            description: r.description().to_string(),
        }),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("device documents always serialize");
    text.push('\n');
    text
}

/// Parses a device document and validates the device. Malformed JSON,
/// schema mismatches and device-invariant violations are reported as
/// distinct errors.
pub fn read_device(text: &str) -> Result<(Device, Option<ReadoutSpec>), Error> {
    let doc: DeviceDoc = serde_json::from_str(text).map_err(json_error)?;
    let mut node_docs = doc.nodes;
    node_docs.sort_by_key(|n| n.id);
    let nodes = node_docs
        .into_iter()
        .map(|n| {
            Ok(Node::new(
                n.id,
                parse_delay("internal_delay", &n.internal_delay)?,
                n.label,
            ))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let arcs = doc
        .arcs
        .into_iter()
        .map(|a| Ok(Arc::new(a.from, a.to, parse_delay("delay", &a.delay)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let device = Device::new(nodes, arcs, NodeId(doc.start), NodeId(doc.destination));
    device.ensure_valid()?;
    let readout = match doc.readout {
        Some(r) => Some(ReadoutSpec::window(
            parse_delay("lo", &r.lo)?,
            parse_delay("hi", &r.hi)?,
            r.description,
        )?),
        None => None,
    };
    Ok((device, readout))
}

/// Renders a problem instance as a JSON document tagged by its `problem`
/// name.
pub fn write_instance(instance: &ProblemInstance) -> String {
    let mut text =
        serde_json::to_string_pretty(instance).expect("instance documents always serialize");
    text.push('\n');
    text
}

/// Parses an instance document and checks the instance's own domain
/// constraints.
pub fn read_instance(text: &str) -> Result<ProblemInstance, Error> {
    let instance: ProblemInstance = serde_json::from_str(text).map_err(json_error)?;
    instance.validate()?;
    Ok(instance)
}

/// Renders an arrival table as CSV, one row per arrival time in ascending
/// order, with the intensity as an exact reduced fraction.
pub fn write_arrivals_csv(arrivals: &ArrivalMap) -> String {
    let mut out = String::from("time,count,intensity_num,intensity_den\n");
    for (time, entry) in arrivals.entries() {
        out.push_str(&format!(
            "{time},{},{},{}\n",
            entry.count,
            entry.intensity.numer(),
            entry.intensity.denom()
        ));
    }
    out
}

/// Inverse of [`write_arrivals_csv`]: recovers the (time, count,
/// intensity) rows.
pub fn parse_arrivals_csv(text: &str) -> Result<Vec<(TimeUnits, BigUint, BigRational)>, Error> {
    let mut lines = text.lines();
    match lines.next() {
        Some("time,count,intensity_num,intensity_den") => {}
        other => {
            return Err(Error::Schema(format!(
                "expected the arrivals CSV header, got {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (index, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [time, count, numer, denom] = fields[..] else {
            return Err(Error::Schema(format!(
                "row {}: expected 4 comma-separated fields, got {}",
                index + 1,
                fields.len()
            )));
        };
        let bad = |what: &str, text: &str| {
            Error::Schema(format!("row {}: {what} \"{text}\" is not a decimal", index + 1))
        };
        let time = TimeUnits::from_decimal(time).map_err(|_| bad("time", time))?;
        let count: BigUint = count.parse().map_err(|_| bad("count", count))?;
        let numer: BigUint = numer.parse().map_err(|_| bad("intensity_num", numer))?;
        let denom: BigUint = denom.parse().map_err(|_| bad("intensity_den", denom))?;
        if denom == BigUint::from(0u8) {
            return Err(Error::Schema(format!(
                "row {}: intensity denominator is zero",
                index + 1
            )));
        }
        rows.push((
            time,
            count,
            BigRational::new(BigInt::from(numer), BigInt::from(denom)),
        ));
    }
    Ok(rows)
}

/// Scientific notation with six significant digits — the fixed rendering
/// for physical (non-exact) quantities.
fn sci6(x: f64) -> String {
    format!("{x:.5e}")
}

fn rational_value(r: &BigRational) -> serde_json::Value {
    json!({
        "numerator": r.numer().to_string(),
        "denominator": r.denom().to_string(),
    })
}

/// Renders an analysis report as JSON. Exact quantities stay decimal
/// strings; meters are scientific-notation strings.
pub fn write_report_json(report: &AnalysisReport) -> String {
    let value = json!({
        "unit_length": sci6(report.unit_length),
        "total_cable_length": sci6(report.total_cable_length),
        "max_delay": report.max_delay.to_string(),
        "num_arcs": report.num_arcs,
        "num_nodes": report.num_nodes,
        "min_arrival_intensity": report.min_arrival_intensity.as_ref().map(rational_value),
        "dynamic_range_bits": report.dynamic_range_bits,
        "arrival_count_total": report.arrival_count_total.to_string(),
    });
    let mut text =
        serde_json::to_string_pretty(&value).expect("report documents always serialize");
    text.push('\n');
    text
}

pub fn write_oracle_json(result: &OracleResult) -> String {
    let value = json!({
        "decision": result.decision.to_string(),
        "count": result.count.to_string(),
        "witnesses": result.witnesses,
        "min_weight": result.min_weight,
    });
    let mut text =
        serde_json::to_string_pretty(&value).expect("oracle documents always serialize");
    text.push('\n');
    text
}

pub fn write_growth_json(report: &GrowthReport) -> String {
    let value = json!({
        "problem": report.kind.to_string(),
        "sizes": report.sizes,
        "max_delays": report.max_delays.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "verdict": report.verdict.to_string(),
    });
    let mut text =
        serde_json::to_string_pretty(&value).expect("growth documents always serialize");
    text.push('\n');
    text
}
