//! JSON documents and CSV rows.
//!
//! Every machine-read number is an integer or a `"p/q"` string. Documents
//! carry a `schema` tag and are rejected when it does not match.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::agent::AgentTrace;
use crate::analysis::BoundReport;
use crate::problem::{Closure, Instance, ProblemKind};
use crate::taskgraph::WeightedDag;
use crate::{Error, Result};

pub const INSTANCE_SCHEMA: &str = "biaslab/instance/v1";
pub const DAG_SCHEMA: &str = "biaslab/dag/v1";
pub const TRACE_SCHEMA: &str = "biaslab/trace/v1";
pub const REPORT_SCHEMA: &str = "biaslab/report/v1";

pub const CSV_HEADER: [&str; 12] = [
    "trace_id", "beta", "alpha", "objective", "steps", "cost", "opt", "ratio", "bound", "lhs",
    "rhs", "holds",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct InstanceDoc {
    schema: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    universe: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sets: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    loads: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    capacity: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    closure: Option<Closure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    committed: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

fn check_schema(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::Parse(format!(
            "expected schema {expected:?}, found {found:?}"
        )));
    }
    Ok(())
}

fn missing(kind: &str, field: &str) -> Error {
    Error::Parse(format!("{kind} instance is missing {field:?}"))
}

impl InstanceDoc {
    fn from_instance(inst: &Instance) -> Self {
        let mut doc = InstanceDoc {
            schema: INSTANCE_SCHEMA.into(),
            kind: inst.kind().name().into(),
            universe: None,
            sets: None,
            edges: None,
            values: None,
            loads: None,
            capacity: None,
            family: None,
            closure: None,
            weights: Some(inst.weights().to_vec()),
            labels: inst.labels().map(|l| l.to_vec()),
            committed: inst.committed().to_vec(),
            notes: inst.notes().to_vec(),
        };
        match inst.kind() {
            ProblemKind::SetCover { universe, sets } => {
                doc.universe = Some(*universe);
                doc.sets = Some(sets.iter().map(|s| s.to_vec()).collect());
            }
            ProblemKind::HittingSet { sets } => {
                doc.universe = Some(inst.ground_size());
                doc.sets = Some(sets.iter().map(|s| s.to_vec()).collect());
            }
            ProblemKind::IndependentSet { edges, .. } => doc.edges = Some(edges.clone()),
            ProblemKind::Knapsack { loads, capacity } => {
                doc.values = doc.weights.take();
                doc.loads = Some(loads.clone());
                doc.capacity = Some(*capacity);
            }
            ProblemKind::Explicit { family, closure } => {
                doc.family = Some(family.iter().map(|s| s.to_vec()).collect());
                doc.closure = Some(*closure);
            }
        }
        doc
    }

    fn into_instance(self) -> Result<Instance> {
        check_schema(&self.schema, INSTANCE_SCHEMA)?;
        let kind = self.kind.as_str();
        let weights = || self.weights.clone().ok_or_else(|| missing(kind, "weights"));
        let inst = match kind {
            "set_cover" => Instance::set_cover(
                self.universe.ok_or_else(|| missing(kind, "universe"))?,
                self.sets.clone().ok_or_else(|| missing(kind, "sets"))?,
                weights()?,
            )?,
            "hitting_set" => {
                let w = weights()?;
                if let Some(u) = self.universe {
                    if u != w.len() {
                        return Err(Error::Parse(format!(
                            "hitting_set universe {u} disagrees with {} weights",
                            w.len()
                        )));
                    }
                }
                Instance::hitting_set(self.sets.clone().ok_or_else(|| missing(kind, "sets"))?, w)?
            }
            "independent_set" => Instance::independent_set(
                self.edges.clone().ok_or_else(|| missing(kind, "edges"))?,
                weights()?,
            )?,
            "knapsack" => Instance::knapsack(
                self.values.clone().ok_or_else(|| missing(kind, "values"))?,
                self.loads.clone().ok_or_else(|| missing(kind, "loads"))?,
                self.capacity.ok_or_else(|| missing(kind, "capacity"))?,
            )?,
            "explicit" => Instance::explicit(
                self.family.clone().ok_or_else(|| missing(kind, "family"))?,
                weights()?,
                self.closure.unwrap_or(Closure::Up),
            )?,
            other => return Err(Error::Parse(format!("unknown instance kind {other:?}"))),
        };
        let inst = match self.labels {
            Some(labels) => inst.with_labels(labels)?,
            None => inst,
        };
        let inst = self.notes.into_iter().fold(inst, |i, n| i.with_note(n));
        inst.with_committed(&self.committed)
    }
}

pub fn instance_to_json(inst: &Instance) -> Result<String> {
    Ok(serde_json::to_string_pretty(&InstanceDoc::from_instance(inst))?)
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    serde_json::from_str::<InstanceDoc>(text)?.into_instance()
}

/// SHA-256 of the compact canonical JSON form, in lowercase hex.
pub fn instance_digest(inst: &Instance) -> String {
    let canonical = serde_json::to_string(&InstanceDoc::from_instance(inst))
        .expect("instance documents always serialize");
    format!("{:x}", Sha256::digest(canonical.as_bytes()))
}

#[derive(Serialize, Deserialize)]
struct DagDoc {
    schema: String,
    n: usize,
    arcs: Vec<(usize, usize, u64)>,
    s: usize,
    t: usize,
}

pub fn dag_to_json(dag: &WeightedDag) -> Result<String> {
    Ok(serde_json::to_string_pretty(&DagDoc {
        schema: DAG_SCHEMA.into(),
        n: dag.n(),
        arcs: dag.arcs().to_vec(),
        s: dag.source(),
        t: dag.sink(),
    })?)
}

pub fn dag_from_json(text: &str) -> Result<WeightedDag> {
    let doc: DagDoc = serde_json::from_str(text)?;
    check_schema(&doc.schema, DAG_SCHEMA)?;
    WeightedDag::new(doc.n, doc.arcs, doc.s, doc.t)
}

#[derive(Serialize, Deserialize)]
struct Tagged<T> {
    schema: String,
    #[serde(flatten)]
    body: T,
}

pub fn trace_to_json(trace: &AgentTrace) -> Result<String> {
    Ok(serde_json::to_string_pretty(&Tagged {
        schema: TRACE_SCHEMA.into(),
        body: trace,
    })?)
}

pub fn trace_from_json(text: &str) -> Result<AgentTrace> {
    let doc: Tagged<AgentTrace> = serde_json::from_str(text)?;
    check_schema(&doc.schema, TRACE_SCHEMA)?;
    Ok(doc.body)
}

/// First 16 hex digits of the SHA-256 of the trace's compact JSON.
pub fn trace_id(trace: &AgentTrace) -> String {
    let compact = serde_json::to_string(trace).expect("traces always serialize");
    format!("{:x}", Sha256::digest(compact.as_bytes()))[..16].to_string()
}

pub fn report_to_json(report: &BoundReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(&Tagged {
        schema: REPORT_SCHEMA.into(),
        body: report,
    })?)
}

pub fn report_from_json(text: &str) -> Result<BoundReport> {
    let doc: Tagged<BoundReport> = serde_json::from_str(text)?;
    check_schema(&doc.schema, REPORT_SCHEMA)?;
    Ok(doc.body)
}

/// One bound of one trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub trace_id: String,
    pub beta: String,
    pub alpha: String,
    pub objective: String,
    pub steps: usize,
    pub cost: u64,
    pub opt: u64,
    pub ratio: String,
    pub bound: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// Rows for every applicable bound of `report`; a trace with none yields a
/// single row with empty bound columns.
pub fn csv_rows(trace: &AgentTrace, report: &BoundReport) -> Vec<CsvRow> {
    let id = trace_id(trace);
    let base = CsvRow {
        trace_id: id,
        beta: trace.config.bias.beta().to_string(),
        alpha: trace.config.bias.alpha().to_string(),
        objective: trace.objective().to_string(),
        steps: trace.steps.len(),
        cost: trace.final_cost,
        opt: trace.opt,
        ratio: trace.ratio.to_string(),
        bound: String::new(),
        lhs: String::new(),
        rhs: String::new(),
        holds: true,
    };
    let rows: Vec<CsvRow> = report
        .entries
        .iter()
        .filter(|e| e.applicable)
        .map(|e| CsvRow {
            bound: e.name.to_string(),
            lhs: e.lhs.as_ref().map(|v| v.to_string()).unwrap_or_default(),
            rhs: e.rhs.as_ref().map(|v| v.to_string()).unwrap_or_default(),
            holds: e.holds,
            ..base.clone()
        })
        .collect();
    if rows.is_empty() {
        vec![base]
    } else {
        rows
    }
}

/// Writes the header and then `rows`; an empty slice gives a header-only file.
pub fn write_csv<W: Write>(out: W, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io_err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(io_err)?;
    for row in rows {
        w.serialize(row).map_err(io_err)?;
    }
    w.flush()
        .map_err(|e| Error::Parse(format!("csv: {e}")))?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r
        .headers()
        .map_err(|e| Error::Parse(format!("csv: {e}")))?
        .clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse(format!("unexpected csv header {header:?}")));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(format!("csv: {e}"))))
        .collect()
}
