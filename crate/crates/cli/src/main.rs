use std::fs::{self, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use toriscope::fan::{
    desingularize, format_fan, parse_fan, random_complete_fan, support_polytopes, Projectivity, RandomFanConfig,
    SupportMode,
};
use toriscope::lattice::Vector;
use toriscope::polytope::{format_polytope, parse_polytope};
use toriscope::search::{
    analyze, run_search, AnalyzeOptions, ModeSetting, Provenance, RunOptions, SearchConfig, SearchEvent, Stage, Status,
    StopReason,
};
use toriscope::transforms::{chisel, chisel_reduce, face_spanned_by, shrink};
use toriscope::{BigInt, Error, LatticePolytope};

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_CAPS: u8 = 3;
const EXIT_DISCOVERY: u8 = 10;

#[derive(Parser)]
#[command(
    name = "toriscope",
    version,
    about = "Exact search for smooth lattice polytopes with special toric ideals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random complete fan and desingularize it.
    GenFan(GenFanArgs),
    /// Inclusion-minimal support polytopes of a smooth complete fan.
    Support(SupportArgs),
    /// Run every predicate on a polytope and print a JSON report.
    Analyze(AnalyzeArgs),
    /// Chisel a face, or reduce to a robust polytope when no face is given.
    Chisel(ChiselArgs),
    /// Shrink a normal polytope vertex by vertex, reporting non-normal finds.
    Shrink(ShrinkArgs),
    /// Randomized search loop; one JSON report per line.
    Search(SearchArgs),
}

#[derive(Args)]
struct FanArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Random points per fan (default: dim + 3).
    #[arg(long)]
    num_points: Option<usize>,
    #[arg(long, default_value_t = 1)]
    coord_bound: i64,
    #[arg(long, default_value_t = 20)]
    max_extra_rays: usize,
    #[arg(long, default_value_t = 150)]
    max_cones: usize,
}

#[derive(Args)]
struct GenFanArgs {
    #[command(flatten)]
    fan: FanArgs,
    /// A point always included, as comma-separated coordinates. Repeatable.
    #[arg(long = "force", value_name = "COORDS")]
    forced: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SupportArgs {
    /// Fan file, or `-` for standard input.
    fan: PathBuf,
    /// `hilbert_basis` or `extreme_rays`.
    #[arg(long, default_value = "hilbert_basis")]
    mode: String,
    #[arg(long, default_value_t = 20_000)]
    max_candidates: u64,
    /// Directory receiving one polytope file per support polytope.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Polytope file, or `-` for standard input.
    polytope: PathBuf,
    #[arg(long, default_value_t = 120)]
    limit_points: usize,
    #[arg(long, default_value_t = 200)]
    probe_trials: usize,
    /// Seed of the random degree-3 probes.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report known fixtures as discoveries too.
    #[arg(long)]
    no_whitelist: bool,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChiselArgs {
    polytope: PathBuf,
    /// Face spanned by these points, e.g. `0,2;1,2`.
    #[arg(long)]
    face: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ShrinkArgs {
    polytope: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    fan: FanArgs,
    /// `auto`, `hilbert_basis` or `extreme_rays`.
    #[arg(long, default_value = "auto")]
    mode: String,
    #[arg(long, default_value_t = 8)]
    iterations: u64,
    /// First iteration, for resuming an interrupted run.
    #[arg(long, default_value_t = 0)]
    start_iteration: u64,
    #[arg(long)]
    max_seconds: Option<u64>,
    #[arg(long, default_value_t = 20_000)]
    max_candidates: u64,
    #[arg(long, default_value_t = 120)]
    limit_points: usize,
    #[arg(long, default_value_t = 200)]
    probe_trials: usize,
    /// Skip polytopes with more lattice points than this.
    #[arg(long, default_value_t = 400)]
    max_lattice_points: usize,
    /// Comma-separated stages.
    #[arg(long, default_value = "gen_fan,support,chisel_reduce,analyze")]
    pipeline: String,
    /// Analyze a named fixture before the first iteration. Repeatable.
    #[arg(long)]
    inject: Vec<String>,
    /// Directory receiving the append-only discovery log.
    #[arg(long, default_value = "discoveries")]
    discovery_dir: PathBuf,
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(io::Error),
    Discovery,
    Caps,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    if let Some(n) = std::env::var("TORISCOPE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        // ignore failure: the pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenFan(a) => gen_fan(a),
        Command::Support(a) => support(a),
        Command::Analyze(a) => analyze_cmd(a),
        Command::Chisel(a) => chisel_cmd(a),
        Command::Shrink(a) => shrink_cmd(a),
        Command::Search(a) => search(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Discovery) => ExitCode::from(EXIT_DISCOVERY),
        Err(Failure::Caps) => ExitCode::from(EXIT_CAPS),
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_OTHER)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } => EXIT_PARSE,
                Error::LimitsExceeded(_) => EXIT_CAPS,
                _ => EXIT_OTHER,
            })
        }
    }
}

fn read_input(path: &Path) -> io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn write_output(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn read_polytope(path: &Path) -> Result<LatticePolytope, Failure> {
    Ok(parse_polytope(&read_input(path)?)?)
}

fn parse_coords(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|c| {
            c.trim().parse::<i64>().map_err(|_| {
                Failure::Core(Error::Parse {
                    line: 1,
                    message: format!("bad coordinate `{c}` in `{s}`"),
                })
            })
        })
        .collect()
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn gen_fan(a: GenFanArgs) -> CmdResult {
    let f = &a.fan;
    let mut cfg = RandomFanConfig::new(f.dim, f.num_points.unwrap_or(f.dim + 3), f.coord_bound);
    cfg.forced = a.forced.iter().map(|s| parse_coords(s)).collect::<Result<_, _>>()?;
    let limits = toriscope::fan::FanLimits {
        max_extra_rays: f.max_extra_rays,
        max_cones: f.max_cones,
    };
    let raw = random_complete_fan::<BigInt>(f.seed, &cfg)?;
    let fan = match desingularize(&raw, &limits, f.seed) {
        Ok(fan) => fan,
        Err(Error::LimitsExceeded(reason)) => {
            let log = json!({
                "kind": "error",
                "stage": "desingularize",
                "seed": f.seed,
                "initial_rays": raw.rays().len(),
                "initial_cones": raw.cones().len(),
                "reason": reason,
            });
            eprintln!("{log}");
            return Err(Failure::Caps);
        }
        Err(e) => return Err(e.into()),
    };
    if !fan.is_unimodular() || !fan.is_complete() {
        return Err(Error::Invariant("desingularized fan is not smooth and complete".into()).into());
    }
    write_output(a.out.as_deref(), &format_fan(&fan))?;
    Ok(())
}

fn support(a: SupportArgs) -> CmdResult {
    let fan = parse_fan::<BigInt>(&read_input(&a.fan)?)?;
    let mode: SupportMode = a.mode.parse()?;
    let res = support_polytopes(&fan, mode, &BigInt::from(a.max_candidates))?;
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
    }
    let mut polys = Vec::new();
    for (k, sp) in res.polytopes.iter().enumerate() {
        let text = format_polytope(&sp.polytope);
        let file = match &a.out {
            Some(dir) => {
                let path = dir.join(format!("polytope-{k}.txt"));
                fs::write(&path, &text)?;
                Some(path.display().to_string())
            }
            None => None,
        };
        polys.push(json!({
            "b": sp.b.to_string(),
            "file": file,
            "polytope": text,
        }));
    }
    let minimality = match mode {
        SupportMode::HilbertBasis => "inclusion-minimal",
        SupportMode::ExtremeRays => "no minimality guarantee",
    };
    if res.verdict == Projectivity::NonProjective {
        eprintln!("fan is non-projective: no support polytope exists");
    }
    let summary = json!({
        "kind": "support",
        "mode": res.mode,
        "verdict": res.verdict,
        "minimality": minimality,
        "candidates": res.candidates,
        "rejected": res.rejected,
        "polytopes": polys,
    });
    print!("{}", pretty(&summary));
    Ok(())
}

fn analyze_cmd(a: AnalyzeArgs) -> CmdResult {
    let p = read_polytope(&a.polytope)?;
    let opts = AnalyzeOptions {
        limit_points: a.limit_points,
        probe_trials: a.probe_trials,
        probe_seed: a.seed,
        whitelist: !a.no_whitelist,
        timings: a.timings,
    };
    let provenance = Provenance {
        source: a.polytope.display().to_string(),
        seed: Some(a.seed),
        pipeline: vec![Stage::Analyze.name().to_string()],
        ..Provenance::default()
    };
    let report = analyze(&p, &opts, provenance)?;
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    write_output(a.out.as_deref(), &text)?;
    if report.status == Status::Discovery {
        return Err(Failure::Discovery);
    }
    Ok(())
}

fn parse_face_points(s: &str) -> Result<Vec<Vector<BigInt>>, Failure> {
    s.split(';')
        .map(|pt| parse_coords(pt).map(|c| Vector::from_i64s(&c)))
        .collect()
}

fn chisel_cmd(a: ChiselArgs) -> CmdResult {
    let p = read_polytope(&a.polytope)?;
    let v = match &a.face {
        Some(spec) => {
            let face = face_spanned_by(&p, &parse_face_points(spec)?)?;
            let r = chisel(&p, &face)?;
            let cut = r.cut();
            json!({
                "kind": "chisel",
                "face": face.vertices.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "sigma": r.sigma.to_string(),
                "b": r.b.to_string(),
                "c": r.c.to_string(),
                "splits": r.pieces.is_some(),
                "cut": {"normal": cut.normal.to_string(), "offset": cut.offset.to_string()},
                "pieces": r.pieces.as_ref().map(|(p1, p2)| vec![format_polytope(p1), format_polytope(p2)]),
            })
        }
        None => {
            let (q, steps) = chisel_reduce(&p, a.seed)?;
            json!({
                "kind": "chisel_reduce",
                "seed": a.seed,
                "steps": steps.iter().map(|s| json!({
                    "face": s.face.vertices.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "sigma": s.sigma.to_string(),
                    "b": s.b.to_string(),
                    "c": s.c.to_string(),
                    "discarded": format_polytope(&s.discarded),
                })).collect::<Vec<_>>(),
                "result": format_polytope(&q),
            })
        }
    };
    write_output(a.out.as_deref(), &pretty(&v))?;
    Ok(())
}

fn shrink_cmd(a: ShrinkArgs) -> CmdResult {
    let p = read_polytope(&a.polytope)?;
    let steps = shrink(&p, a.seed)?;
    let mut out = String::new();
    for (n, s) in steps.iter().enumerate() {
        let line = json!({
            "kind": "shrink",
            "step": n,
            "removed": s.removed.as_ref().map(ToString::to_string),
            "normal": s.normal,
            "simple": s.simple,
            "smooth": s.smooth,
            "status": if s.is_discovery() { "DISCOVERY" } else { "OK" },
            "polytope": format_polytope(&s.polytope),
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    write_output(a.out.as_deref(), &out)?;
    if steps.iter().any(|s| s.is_discovery()) {
        return Err(Failure::Discovery);
    }
    Ok(())
}

fn search(a: SearchArgs) -> CmdResult {
    let f = &a.fan;
    let mut cfg = SearchConfig::new(f.seed, f.dim);
    cfg.num_points = f.num_points.unwrap_or(f.dim + 3);
    cfg.coord_bound = f.coord_bound;
    cfg.max_extra_rays = f.max_extra_rays;
    cfg.max_cones = f.max_cones;
    cfg.mode = a.mode.parse::<ModeSetting>()?;
    cfg.pipeline = a
        .pipeline
        .split(',')
        .map(|s| s.trim().parse::<Stage>())
        .collect::<Result<_, _>>()?;
    cfg.limits.iterations = a.iterations;
    cfg.limits.start_iteration = a.start_iteration;
    cfg.limits.max_seconds = a.max_seconds;
    cfg.limits.max_candidates = a.max_candidates;
    cfg.limits.limit_points = a.limit_points;
    cfg.limits.probe_trials = a.probe_trials;
    cfg.limits.max_lattice_points = a.max_lattice_points;
    cfg.inject = a.inject.clone();

    let mut out: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    let run = RunOptions {
        timings: a.timings,
        batch: 0,
    };
    let summary = run_search::<BigInt, Failure>(&cfg, run, |event| {
        let line = event.to_json();
        if event.is_discovery() {
            persist_discovery(&a.discovery_dir, &line)?;
        }
        writeln!(out, "{line}")?;
        if matches!(event, SearchEvent::Summary(_)) {
            out.flush()?;
        }
        Ok(())
    })?;
    match summary.stopped {
        StopReason::Completed => Ok(()),
        StopReason::Caps => Err(Failure::Caps),
        StopReason::Discovery => Err(Failure::Discovery),
    }
}

/// Appends the full report to the discovery log and syncs it before the
/// search halts.
fn persist_discovery(dir: &Path, line: &str) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(dir.join("discoveries.jsonl"))?;
    writeln!(f, "{line}")?;
    f.sync_all()
}
