//! Randomized search for smooth polytopes that answer one of the open
//! questions: random fan, desingularization, support polytopes, chisel
//! reduction and analysis, reported as one JSON object per line.

mod config;
mod pipeline;
mod report;

pub use config::{stream_seed, ModeSetting, SearchConfig, SearchLimits, Stage, AUTO_PICARD_LIMIT};
pub use pipeline::{analyze, classify, known_fixture, run_search, AnalyzeOptions, RunOptions, KNOWN_FIXTURES};
pub use report::{
    AnalysisReport, Degree3Method, DiscoveryClass, DiscoveryRecord, EhrhartRecord, Provenance, ResumeToken,
    SearchEvent, SearchSummary, ShrinkRecord, SkipRecord, Status, StopReason, Verdicts, WitnessRecord,
};
