use std::collections::BTreeMap;

use serde::Serialize;

use super::config::SearchConfig;

/// Where an analyzed polytope came from.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Provenance {
    /// A file path, `search`, or `fixture:<name>`.
    pub source: String,
    pub seed: Option<u64>,
    pub iteration: Option<u64>,
    /// Index of the support polytope within its fan.
    pub candidate: Option<usize>,
    pub pipeline: Vec<String>,
    /// Number of chisel cuts applied before analysis.
    pub chisel_steps: usize,
    /// The source fan in its text format.
    pub fan: Option<String>,
    pub config: Option<SearchConfig>,
}

/// Verdicts of one analysis; `None` where a predicate does not apply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub smooth: bool,
    pub very_ample: bool,
    pub normal: bool,
    pub scheme_degree2: bool,
    pub abundant: bool,
    pub superconnected: Option<bool>,
    pub strongly_connected: Option<bool>,
    pub ehrhart_positive: bool,
    pub robust: Option<bool>,
    pub needs_degree3: Option<bool>,
}

/// Evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub verdict: &'static str,
    pub detail: String,
    pub points: Vec<String>,
}

impl WitnessRecord {
    pub fn new(verdict: &'static str, detail: impl Into<String>, points: Vec<String>) -> Self {
        WitnessRecord {
            verdict,
            detail: detail.into(),
            points,
        }
    }
}

/// Outcomes that would answer one of the open questions, or a known instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscoveryClass {
    /// A smooth polytope that is not normal.
    NonNormalSmooth,
    /// A smooth normal polytope whose toric ideal needs cubic generators.
    SmoothNormalNeedsDegree3,
    /// A smooth polytope failing the scheme-theoretic degree-2 conditions.
    SmoothNotSchemeDegree2,
    /// A very ample polytope that is not normal.
    VeryAmpleNonNormal,
    /// A shrinking run produced a non-normal very ample simple polytope.
    ShrinkNonNormalSimple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscoveryRecord {
    pub class: DiscoveryClass,
    /// Name of the whitelisted fixture this polytope coincides with.
    pub known_fixture: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Ok,
    /// Only whitelisted discoveries.
    Known,
    Discovery,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degree3Method {
    /// Truncated h-vector of the quadrics against the Ehrhart h*-vector.
    HVector,
    /// Random squarefree divisor complexes; only a positive answer is conclusive.
    RandomProbe,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EhrhartRecord {
    pub hstar: Vec<String>,
    /// Ehrhart polynomial coefficients, constant term first.
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub kind: &'static str,
    pub status: Status,
    /// The sorted vertex list.
    pub identity: Vec<String>,
    pub provenance: Provenance,
    pub dim: usize,
    pub num_vertices: usize,
    pub num_lattice_points: usize,
    pub verdicts: Verdicts,
    pub degree3_method: Degree3Method,
    pub ehrhart: EhrhartRecord,
    pub witnesses: Vec<WitnessRecord>,
    pub discoveries: Vec<DiscoveryRecord>,
    /// The polytope in its text format.
    pub polytope: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<&'static str, f64>>,
}

impl AnalysisReport {
    pub fn witnesses_for<'a>(&'a self, verdict: &'a str) -> impl Iterator<Item = &'a WitnessRecord> + 'a {
        self.witnesses.iter().filter(move |w| w.verdict == verdict)
    }

    pub fn is_discovery(&self) -> bool {
        self.status == Status::Discovery
    }
}

/// A fan or polytope that was dropped, with the reason.
#[derive(Clone, Debug, Serialize)]
pub struct SkipRecord {
    pub kind: &'static str,
    pub seed: u64,
    pub iteration: u64,
    pub stage: &'static str,
    pub reason: String,
}

/// A non-normal polytope met while shrinking.
#[derive(Clone, Debug, Serialize)]
pub struct ShrinkRecord {
    pub kind: &'static str,
    pub status: Status,
    pub seed: u64,
    pub iteration: u64,
    pub step: usize,
    pub removed: Option<String>,
    pub simple: bool,
    pub smooth: bool,
    pub discoveries: Vec<DiscoveryRecord>,
    pub polytope: String,
}

/// Seed and iteration from which an interrupted run continues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResumeToken {
    pub seed: u64,
    pub iteration: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    Caps,
    Discovery,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchSummary {
    pub kind: &'static str,
    pub seed: u64,
    pub iterations_run: u64,
    pub analyzed: usize,
    pub skipped: usize,
    pub discoveries: usize,
    pub stopped: StopReason,
    pub resume: Option<ResumeToken>,
}

/// One line of the search report stream.
#[derive(Clone, Debug)]
pub enum SearchEvent {
    Analysis(Box<AnalysisReport>),
    Skip(SkipRecord),
    Shrink(Box<ShrinkRecord>),
    Summary(SearchSummary),
}

impl SearchEvent {
    pub fn is_discovery(&self) -> bool {
        match self {
            SearchEvent::Analysis(r) => r.status == Status::Discovery,
            SearchEvent::Shrink(r) => r.status == Status::Discovery,
            _ => false,
        }
    }

    /// Compact JSON without a trailing newline.
    pub fn to_json(&self) -> String {
        let v = match self {
            SearchEvent::Analysis(r) => serde_json::to_string(r),
            SearchEvent::Skip(r) => serde_json::to_string(r),
            SearchEvent::Shrink(r) => serde_json::to_string(r),
            SearchEvent::Summary(r) => serde_json::to_string(r),
        };
        v.expect("report types serialize")
    }
}
