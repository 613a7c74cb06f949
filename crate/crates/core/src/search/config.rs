use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{FanLimits, SupportMode};

/// One stage of the search pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    GenFan,
    Support,
    ChiselReduce,
    Analyze,
    Shrink,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::GenFan => "gen_fan",
            Stage::Support => "support",
            Stage::ChiselReduce => "chisel_reduce",
            Stage::Analyze => "analyze",
            Stage::Shrink => "shrink",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Stage::GenFan,
            Stage::Support,
            Stage::ChiselReduce,
            Stage::Analyze,
            Stage::Shrink,
        ]
        .into_iter()
        .find(|st| st.name() == s || st.name().replace('_', "-") == s)
        .ok_or_else(|| Error::Invalid(format!("unknown pipeline stage `{s}`")))
    }
}

/// Support polytope mode; `Auto` switches to extreme rays when the Picard
/// rank exceeds [`AUTO_PICARD_LIMIT`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSetting {
    Auto,
    HilbertBasis,
    ExtremeRays,
}

pub const AUTO_PICARD_LIMIT: usize = 10;

impl ModeSetting {
    pub fn resolve(self, picard_rank: usize) -> SupportMode {
        match self {
            ModeSetting::HilbertBasis => SupportMode::HilbertBasis,
            ModeSetting::ExtremeRays => SupportMode::ExtremeRays,
            ModeSetting::Auto if picard_rank > AUTO_PICARD_LIMIT => SupportMode::ExtremeRays,
            ModeSetting::Auto => SupportMode::HilbertBasis,
        }
    }
}

impl FromStr for ModeSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(ModeSetting::Auto);
        }
        Ok(match s.parse::<SupportMode>()? {
            SupportMode::HilbertBasis => ModeSetting::HilbertBasis,
            SupportMode::ExtremeRays => ModeSetting::ExtremeRays,
        })
    }
}

/// Caps on a search run and on the analysis of each polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    pub iterations: u64,
    pub start_iteration: u64,
    /// Wall-time budget; the run stops gracefully once it is spent.
    pub max_seconds: Option<u64>,
    /// Cap on parallelepiped points in the support Hilbert basis.
    pub max_candidates: u64,
    /// Above this many lattice points the exact degree-3 test is replaced
    /// by random divisor-complex probes.
    pub limit_points: usize,
    pub probe_trials: usize,
    /// Polytopes with more lattice points are skipped rather than analyzed.
    pub max_lattice_points: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            iterations: 8,
            start_iteration: 0,
            max_seconds: None,
            max_candidates: 20_000,
            limit_points: 120,
            probe_trials: 200,
            max_lattice_points: 400,
        }
    }
}

/// Everything that determines a search run. Echoed into every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub dim: usize,
    /// Random points drawn for each fan, uniformly in `[-coord_bound, coord_bound]^dim`.
    pub num_points: usize,
    pub coord_bound: i64,
    pub max_extra_rays: usize,
    pub max_cones: usize,
    pub mode: ModeSetting,
    pub pipeline: Vec<Stage>,
    pub limits: SearchLimits,
    /// Named fixtures analyzed before the first iteration (harness self-test).
    pub inject: Vec<String>,
}

impl SearchConfig {
    pub fn new(seed: u64, dim: usize) -> Self {
        let fan = FanLimits::default();
        SearchConfig {
            seed,
            dim,
            num_points: dim + 3,
            coord_bound: 1,
            max_extra_rays: fan.max_extra_rays,
            max_cones: fan.max_cones,
            mode: ModeSetting::Auto,
            pipeline: vec![Stage::GenFan, Stage::Support, Stage::ChiselReduce, Stage::Analyze],
            limits: SearchLimits::default(),
            inject: Vec::new(),
        }
    }

    pub fn fan_limits(&self) -> FanLimits {
        FanLimits {
            max_extra_rays: self.max_extra_rays,
            max_cones: self.max_cones,
        }
    }

    pub fn has_stage(&self, s: Stage) -> bool {
        self.pipeline.contains(&s)
    }

    /// The pipeline must generate a fan, compute support polytopes and
    /// analyze them; chisel reduction and shrinking are optional.
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Invalid("search dimension must be at least 2".into()));
        }
        for required in [Stage::GenFan, Stage::Support, Stage::Analyze] {
            if !self.has_stage(required) {
                return Err(Error::Invalid(format!("pipeline lacks the `{required}` stage")));
            }
        }
        let order: Vec<Stage> = [
            Stage::GenFan,
            Stage::Support,
            Stage::ChiselReduce,
            Stage::Analyze,
            Stage::Shrink,
        ]
        .into_iter()
        .filter(|s| self.has_stage(*s))
        .collect();
        if order != self.pipeline {
            return Err(Error::Invalid(
                "pipeline stages must appear once each, in the order gen_fan, support, chisel_reduce, analyze, shrink"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Seed of the random stream `name` at position `index` of a run seeded by
/// `seed`. Streams with different names or indices are independent.
pub fn stream_seed(seed: u64, name: &str, index: u64) -> u64 {
    // FNV-1a of the stream name selects the ChaCha stream
    let stream = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(index as u128 * 2);
    rng.next_u64()
}
