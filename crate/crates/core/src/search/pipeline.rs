use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;

use super::config::{stream_seed, SearchConfig, Stage};
use super::report::*;
use crate::criteria;
use crate::error::{Error, Result};
use crate::fan::{desingularize, format_fan, random_complete_fan, support_polytopes, Projectivity, RandomFanConfig};
use crate::fixtures;
use crate::polytope::{format_polytope, Polytope};
use crate::scalar::{int, Int};
use crate::toric;
use crate::transforms;

/// Fixtures whose discoveries are already known and only reported as such.
pub const KNOWN_FIXTURES: [&str; 1] = ["eight-point"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Exact degree-3 test up to this many lattice points, random probes above.
    pub limit_points: usize,
    pub probe_trials: usize,
    pub probe_seed: u64,
    /// Mark polytopes equal to a [`KNOWN_FIXTURES`] entry as known instead of
    /// raising a discovery.
    pub whitelist: bool,
    pub timings: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            limit_points: 120,
            probe_trials: 200,
            probe_seed: 0,
            whitelist: true,
            timings: false,
        }
    }
}

fn strings<'a, Z: Int>(pts: impl IntoIterator<Item = &'a crate::lattice::Vector<Z>>) -> Vec<String> {
    pts.into_iter().map(ToString::to_string).collect()
}

fn identity<Z: Int>(p: &Polytope<Z>) -> Vec<String> {
    strings(p.vertices())
}

struct Clock {
    on: bool,
    map: BTreeMap<&'static str, f64>,
}

impl Clock {
    fn time<T>(&mut self, name: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.on {
            self.map.insert(name, start.elapsed().as_secs_f64());
        }
        out
    }
}

/// Runs every predicate on `p` and classifies the outcome.
///
/// Every false verdict carries at least one witness. Connectivity and
/// robustness are only defined for smooth polytopes and are `None` otherwise.
pub fn analyze<Z: Int>(p: &Polytope<Z>, opts: &AnalyzeOptions, provenance: Provenance) -> Result<AnalysisReport> {
    let mut clock = Clock {
        on: opts.timings,
        map: BTreeMap::new(),
    };
    let mut witnesses = Vec::new();

    let smooth = clock.time("smooth", || p.non_smooth_vertex().cloned());
    if let Some(v) = &smooth {
        witnesses.push(WitnessRecord::new(
            "smooth",
            "vertex whose corner cone is not unimodular",
            strings([v]),
        ));
    }
    let smooth = smooth.is_none();

    let very_ample = clock.time("very_ample", || p.very_ampleness_witness());
    if let Some((v, h)) = &very_ample {
        witnesses.push(WitnessRecord::new(
            "very_ample",
            "vertex and Hilbert basis element of its corner cone not of the form x - v",
            strings([v, h]),
        ));
    }
    let very_ample = very_ample.is_none();

    let normal = clock.time("normal", || p.normality_witness());
    if let Some(h) = &normal {
        witnesses.push(WitnessRecord::new(
            "normal",
            "Hilbert basis element of the cone over P at height above one",
            strings([h]),
        ));
    }
    let normal = normal.is_none();

    let scheme = clock.time("scheme_degree2", || criteria::scheme_degree2(p));
    if let Some(w) = scheme.violations().next() {
        let detail = match w.condition {
            criteria::Condition::TwoA => "vertex v and non-neighbor x with no other y, z in P with x + v = y + z",
            _ => "non-vertex lattice point that is no midpoint of two other lattice points",
        };
        witnesses.push(WitnessRecord::new("scheme_degree2", detail, strings(&w.points)));
    }
    if let Some(c) = scheme.caveat {
        witnesses.push(WitnessRecord::new("scheme_degree2", c, Vec::new()));
    }

    let abundant = clock.time("abundant", || criteria::abundant_degree2(p));
    if let Some(w) = abundant.violations().next() {
        witnesses.push(WitnessRecord::new(
            "abundant",
            "pair of lattice points whose sum has no other representation",
            strings(&w.points),
        ));
    }

    let (superconnected, strongly_connected) = if smooth {
        let c = clock.time("connectivity", || criteria::connectivity(p))?;
        for (v, x) in &c.unreachable {
            witnesses.push(WitnessRecord::new(
                "superconnected",
                "lattice point not reachable from the vertex",
                strings([v, x]),
            ));
        }
        if !c.isolated.is_empty() {
            witnesses.push(WitnessRecord::new(
                "strongly_connected",
                "lattice points reachable from no vertex",
                strings(&c.isolated),
            ));
        }
        (Some(c.superconnected), Some(c.strongly_connected))
    } else {
        (None, None)
    };

    let ehr = clock.time("ehrhart", || p.ehrhart());
    let ehrhart_positive = ehr.is_positive();
    let coefficients = ehr.coefficient_strings();
    if !ehrhart_positive {
        witnesses.push(WitnessRecord::new(
            "ehrhart_positive",
            format!("coefficients {}", coefficients.join(", ")),
            Vec::new(),
        ));
    }

    let robust = if smooth {
        let r = clock.time("robust", || transforms::is_robust(p))?;
        if let Some(f) = &r.witness {
            witnesses.push(WitnessRecord::new(
                "robust",
                format!("chiselable face of dimension {}", f.dim),
                strings(&f.vertices),
            ));
        }
        Some(r.robust)
    } else {
        None
    };

    let n = p.lattice_points().len();
    let exact = normal && p.spans_lattice() && n <= opts.limit_points;
    let (degree3_method, needs_degree3) = if exact {
        let check = clock.time("degree3", || toric::degree3_check_unchecked(p))?;
        let detail = format!(
            "ideal h-vector prefix [{}] against h*-vector prefix [{}]",
            join(&check.ideal_numerator),
            join(&check.ehrhart_numerator)
        );
        let points = check.offending.iter().map(ToString::to_string).collect();
        witnesses.push(WitnessRecord::new("needs_degree3", detail, points));
        (Degree3Method::HVector, Some(check.needs_generators()))
    } else {
        let found = clock.time("degree3", || {
            toric::random_degree3_probe(p, opts.probe_seed, opts.probe_trials)
        });
        match found.first() {
            Some(c) => {
                witnesses.push(WitnessRecord::new(
                    "needs_degree3",
                    "height-3 multidegree with a disconnected squarefree divisor complex",
                    strings([c]),
                ));
                (Degree3Method::RandomProbe, Some(true))
            }
            None => {
                witnesses.push(WitnessRecord::new(
                    "needs_degree3",
                    format!(
                        "inconclusive: {} random probes found no disconnected complex",
                        opts.probe_trials
                    ),
                    Vec::new(),
                ));
                (Degree3Method::RandomProbe, None)
            }
        }
    };

    let verdicts = Verdicts {
        smooth,
        very_ample,
        normal,
        scheme_degree2: scheme.verdict,
        abundant: abundant.verdict,
        superconnected,
        strongly_connected,
        ehrhart_positive,
        robust,
        needs_degree3,
    };
    let ident = identity(p);
    let known = if opts.whitelist { known_fixture(p) } else { None };
    let discoveries: Vec<DiscoveryRecord> = classify(&verdicts)
        .into_iter()
        .map(|class| DiscoveryRecord {
            class,
            known_fixture: known.clone(),
        })
        .collect();

    Ok(AnalysisReport {
        kind: "analysis",
        status: status_of(&discoveries),
        identity: ident,
        provenance,
        dim: p.dim(),
        num_vertices: p.vertices().len(),
        num_lattice_points: n,
        verdicts,
        degree3_method,
        ehrhart: EhrhartRecord {
            hstar: ehr.hstar.iter().map(ToString::to_string).collect(),
            coefficients,
        },
        witnesses,
        discoveries,
        polytope: format_polytope(p),
        timings: opts.timings.then_some(clock.map),
    })
}

fn join<Z: Int>(v: &[Z]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// The discovery classes a set of verdicts falls into.
pub fn classify(v: &Verdicts) -> Vec<DiscoveryClass> {
    let mut out = Vec::new();
    if v.smooth && !v.normal {
        out.push(DiscoveryClass::NonNormalSmooth);
    }
    if v.smooth && v.normal && v.needs_degree3 == Some(true) {
        out.push(DiscoveryClass::SmoothNormalNeedsDegree3);
    }
    if v.smooth && !v.scheme_degree2 {
        out.push(DiscoveryClass::SmoothNotSchemeDegree2);
    }
    if v.very_ample && !v.normal {
        out.push(DiscoveryClass::VeryAmpleNonNormal);
    }
    out
}

fn status_of(d: &[DiscoveryRecord]) -> Status {
    if d.is_empty() {
        Status::Ok
    } else if d.iter().all(|r| r.known_fixture.is_some()) {
        Status::Known
    } else {
        Status::Discovery
    }
}

/// The whitelisted fixture equal to `p`, compared by vertex set.
pub fn known_fixture<Z: Int>(p: &Polytope<Z>) -> Option<String> {
    KNOWN_FIXTURES
        .iter()
        .find(|name| fixtures::by_name::<Z>(name).is_some_and(|f| f.vertices() == p.vertices()))
        .map(|s| s.to_string())
}

struct Outcome {
    events: Vec<SearchEvent>,
}

fn skip(cfg: &SearchConfig, iteration: u64, stage: Stage, reason: String) -> SearchEvent {
    SearchEvent::Skip(SkipRecord {
        kind: "skip",
        seed: cfg.seed,
        iteration,
        stage: stage.name(),
        reason,
    })
}

fn analyze_options(cfg: &SearchConfig, iteration: u64, candidate: usize, timings: bool) -> AnalyzeOptions {
    AnalyzeOptions {
        limit_points: cfg.limits.limit_points,
        probe_trials: cfg.limits.probe_trials,
        probe_seed: stream_seed(cfg.seed, "probe", iteration << 16 | candidate as u64),
        whitelist: false,
        timings,
    }
}

fn run_iteration<Z: Int>(cfg: &SearchConfig, i: u64, timings: bool) -> Outcome {
    let mut events = Vec::new();
    let fail = |events: &mut Vec<SearchEvent>, stage: Stage, e: Error| {
        events.push(skip(cfg, i, stage, e.to_string()));
    };
    let fan_cfg = RandomFanConfig::new(cfg.dim, cfg.num_points, cfg.coord_bound);
    let fan = match random_complete_fan::<Z>(stream_seed(cfg.seed, "points", i), &fan_cfg)
        .and_then(|f| desingularize(&f, &cfg.fan_limits(), stream_seed(cfg.seed, "desingularize", i)))
    {
        Ok(f) => f,
        Err(e) => {
            fail(&mut events, Stage::GenFan, e);
            return Outcome { events };
        }
    };
    let picard = fan.rays().len() - cfg.dim;
    let mode = cfg.mode.resolve(picard);
    let support = match support_polytopes(&fan, mode, &int(cfg.limits.max_candidates as i64)) {
        Ok(s) => s,
        Err(e) => {
            fail(&mut events, Stage::Support, e);
            return Outcome { events };
        }
    };
    if support.verdict != Projectivity::Projective {
        let reason = match support.verdict {
            Projectivity::NonProjective => "fan is not projective".to_string(),
            _ => format!("no support polytope in mode {mode:?}"),
        };
        events.push(skip(cfg, i, Stage::Support, reason));
        return Outcome { events };
    }
    let fan_text = format_fan(&fan);
    let mut seen = BTreeSet::new();
    for (k, sp) in support.polytopes.iter().enumerate() {
        let mut p = sp.polytope.clone();
        let mut chisel_steps = 0;
        if cfg.has_stage(Stage::ChiselReduce) {
            match transforms::chisel_reduce(&p, stream_seed(cfg.seed, "chisel", i << 16 | k as u64)) {
                Ok((q, steps)) => {
                    p = q;
                    chisel_steps = steps.len();
                }
                Err(e) => {
                    fail(&mut events, Stage::ChiselReduce, e);
                    continue;
                }
            }
        }
        if !seen.insert(identity(&p)) {
            continue;
        }
        if p.lattice_point_count_capped(cfg.limits.max_lattice_points).is_none() {
            let reason = format!(
                "candidate {k} has more than {} lattice points",
                cfg.limits.max_lattice_points
            );
            events.push(skip(cfg, i, Stage::Analyze, reason));
            continue;
        }
        let provenance = Provenance {
            source: "search".into(),
            seed: Some(cfg.seed),
            iteration: Some(i),
            candidate: Some(k),
            pipeline: cfg.pipeline.iter().map(|s| s.name().to_string()).collect(),
            chisel_steps,
            fan: Some(fan_text.clone()),
            config: Some(cfg.clone()),
        };
        let report = match analyze(&p, &analyze_options(cfg, i, k, timings), provenance) {
            Ok(r) => r,
            Err(e) => {
                fail(&mut events, Stage::Analyze, e);
                continue;
            }
        };
        let normal = report.verdicts.normal;
        let found = report.is_discovery();
        events.push(SearchEvent::Analysis(Box::new(report)));
        if found {
            return Outcome { events };
        }
        if cfg.has_stage(Stage::Shrink) && normal && shrink_events(cfg, i, k, &p, &mut events) {
            return Outcome { events };
        }
    }
    Outcome { events }
}

/// Appends a record for every non-normal polytope met while shrinking `p`.
/// Returns whether one of them is a discovery.
fn shrink_events<Z: Int>(cfg: &SearchConfig, i: u64, k: usize, p: &Polytope<Z>, events: &mut Vec<SearchEvent>) -> bool {
    let steps = match transforms::shrink(p, stream_seed(cfg.seed, "shrink", i << 16 | k as u64)) {
        Ok(s) => s,
        Err(e) => {
            events.push(skip(cfg, i, Stage::Shrink, e.to_string()));
            return false;
        }
    };
    for (n, step) in steps.iter().enumerate().filter(|(_, s)| s.is_non_normal_find()) {
        let discovery = step.is_discovery();
        let record = ShrinkRecord {
            kind: "shrink",
            status: if discovery { Status::Discovery } else { Status::Ok },
            seed: cfg.seed,
            iteration: i,
            step: n,
            removed: step.removed.as_ref().map(ToString::to_string),
            simple: step.simple,
            smooth: step.smooth,
            discoveries: discovery
                .then_some(DiscoveryRecord {
                    class: DiscoveryClass::ShrinkNonNormalSimple,
                    known_fixture: None,
                })
                .into_iter()
                .collect(),
            polytope: format_polytope(&step.polytope),
        };
        events.push(SearchEvent::Shrink(Box::new(record)));
        if discovery {
            return true;
        }
    }
    false
}

/// Options of a search run that do not change its results.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub timings: bool,
    /// Iterations evaluated concurrently; 0 means the rayon pool size.
    pub batch: usize,
}

/// Runs the search described by `cfg`, passing every event to `sink` in
/// iteration order. The output depends only on `cfg`: iterations draw from
/// their own named random streams, so the thread count does not matter.
///
/// Stops at the first discovery, after the configured number of
/// iterations, or once the wall-time budget is spent; the summary then
/// carries a resume token.
pub fn run_search<Z: Int, E>(
    cfg: &SearchConfig,
    run: RunOptions,
    mut sink: impl FnMut(&SearchEvent) -> std::result::Result<(), E>,
) -> std::result::Result<SearchSummary, E>
where
    E: From<Error>,
{
    cfg.validate()?;
    let start = Instant::now();
    let mut summary = SearchSummary {
        kind: "summary",
        seed: cfg.seed,
        iterations_run: 0,
        analyzed: 0,
        skipped: 0,
        discoveries: 0,
        stopped: StopReason::Completed,
        resume: None,
    };
    let tally = |e: &SearchEvent, summary: &mut SearchSummary| match e {
        SearchEvent::Analysis(_) => summary.analyzed += 1,
        SearchEvent::Skip(_) => summary.skipped += 1,
        _ => {}
    };

    for name in &cfg.inject {
        let p = fixtures::by_name::<Z>(name).ok_or_else(|| Error::Invalid(format!("unknown fixture `{name}`")))?;
        let provenance = Provenance {
            source: format!("fixture:{name}"),
            seed: Some(cfg.seed),
            pipeline: vec![Stage::Analyze.name().to_string()],
            config: Some(cfg.clone()),
            ..Provenance::default()
        };
        let mut opts = analyze_options(cfg, 0, 0, run.timings);
        opts.whitelist = false;
        let event = SearchEvent::Analysis(Box::new(analyze(&p, &opts, provenance)?));
        tally(&event, &mut summary);
        sink(&event)?;
        if event.is_discovery() {
            summary.discoveries += 1;
            summary.stopped = StopReason::Discovery;
            summary.resume = Some(ResumeToken {
                seed: cfg.seed,
                iteration: cfg.limits.start_iteration,
            });
            sink(&SearchEvent::Summary(summary.clone()))?;
            return Ok(summary);
        }
    }

    let batch = if run.batch == 0 {
        rayon::current_num_threads().max(1)
    } else {
        run.batch
    } as u64;
    let end = cfg.limits.start_iteration.saturating_add(cfg.limits.iterations);
    let mut next = cfg.limits.start_iteration;
    while next < end {
        if cfg.limits.max_seconds.is_some_and(|s| start.elapsed().as_secs() >= s) {
            summary.stopped = StopReason::Caps;
            summary.resume = Some(ResumeToken {
                seed: cfg.seed,
                iteration: next,
            });
            break;
        }
        let hi = (next + batch).min(end);
        let outcomes: Vec<Outcome> = (next..hi)
            .into_par_iter()
            .map(|i| run_iteration::<Z>(cfg, i, run.timings))
            .collect();
        for (i, outcome) in (next..hi).zip(outcomes) {
            summary.iterations_run += 1;
            for event in &outcome.events {
                tally(event, &mut summary);
                sink(event)?;
                if event.is_discovery() {
                    summary.discoveries += 1;
                    summary.stopped = StopReason::Discovery;
                    summary.resume = Some(ResumeToken {
                        seed: cfg.seed,
                        iteration: i + 1,
                    });
                    sink(&SearchEvent::Summary(summary.clone()))?;
                    return Ok(summary);
                }
            }
        }
        next = hi;
    }
    sink(&SearchEvent::Summary(summary.clone()))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn report(p: &Polytope<BigInt>) -> AnalysisReport {
        analyze(p, &AnalyzeOptions::default(), Provenance::default()).unwrap()
    }

    #[test]
    fn eight_point_is_known() {
        let p = fixtures::eight_point::<BigInt>();
        let r = report(&p);
        assert!(r.verdicts.very_ample && !r.verdicts.normal);
        assert_eq!(r.status, Status::Known);
        let opts = AnalyzeOptions {
            whitelist: false,
            ..AnalyzeOptions::default()
        };
        let r = analyze(&p, &opts, Provenance::default()).unwrap();
        assert_eq!(r.status, Status::Discovery);
        assert!(r
            .discoveries
            .iter()
            .any(|d| d.class == DiscoveryClass::VeryAmpleNonNormal));
    }

    #[test]
    fn false_verdicts_carry_witnesses() {
        for p in [
            fixtures::hexagon::<BigInt>(),
            fixtures::reeve(3),
            fixtures::join_of_segments(),
            fixtures::five_point(),
        ] {
            let r = report(&p);
            let v = &r.verdicts;
            let checks = [
                ("smooth", v.smooth),
                ("very_ample", v.very_ample),
                ("normal", v.normal),
                ("scheme_degree2", v.scheme_degree2),
                ("abundant", v.abundant),
                ("superconnected", v.superconnected.unwrap_or(true)),
                ("strongly_connected", v.strongly_connected.unwrap_or(true)),
                ("ehrhart_positive", v.ehrhart_positive),
                ("robust", v.robust.unwrap_or(true)),
            ];
            for (name, ok) in checks {
                assert!(ok || r.witnesses_for(name).next().is_some(), "{name} lacks a witness");
            }
        }
    }

    #[test]
    fn hexagon_report() {
        let r = report(&fixtures::hexagon::<BigInt>());
        assert_eq!(r.verdicts.superconnected, Some(false));
        assert_eq!(r.verdicts.strongly_connected, Some(true));
        assert!(r
            .witnesses_for("superconnected")
            .any(|w| w.points == vec!["(3,3)".to_string(), "(0,0)".to_string()]));
        assert_eq!(r.status, Status::Ok);
        assert!(r.timings.is_none());
    }

    #[test]
    fn five_point_needs_a_cubic() {
        let r = report(&fixtures::five_point::<BigInt>());
        assert_eq!(r.degree3_method, Degree3Method::HVector);
        assert_eq!(r.verdicts.needs_degree3, Some(true));
        assert!(!r.verdicts.smooth);
        assert_eq!(r.status, Status::Ok);
    }

    #[test]
    fn injected_fixture_halts_search() {
        let mut cfg = SearchConfig::new(5, 3);
        cfg.inject = vec!["eight-point".into()];
        let mut lines = Vec::new();
        let s = run_search::<BigInt, Error>(&cfg, RunOptions::default(), |e| {
            lines.push(e.to_json());
            Ok(())
        })
        .unwrap();
        assert_eq!(s.stopped, StopReason::Discovery);
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains("\"DISCOVERY\""));
    }
}
