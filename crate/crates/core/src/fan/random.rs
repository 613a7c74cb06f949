use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Fan;
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::scalar::{int, Int};

const POINT_ATTEMPTS: usize = 64;
const LIFT_ATTEMPTS: usize = 16;
const HEIGHT_RANGE: i64 = 1000;

/// Parameters of the random point configuration behind a fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RandomFanConfig {
    pub dim: usize,
    /// Number of random points drawn in addition to `forced`.
    pub num_points: usize,
    /// Coordinates are drawn uniformly from `[-coord_bound, coord_bound]`.
    pub coord_bound: i64,
    /// Points always included.
    pub forced: Vec<Vec<i64>>,
}

impl RandomFanConfig {
    pub fn new(dim: usize, num_points: usize, coord_bound: i64) -> Self {
        RandomFanConfig {
            dim,
            num_points,
            coord_bound,
            forced: Vec::new(),
        }
    }
}

/// A complete simplicial fan: the face fan of a regular boundary
/// triangulation of the hull of random lattice points with the origin in its
/// interior.
///
/// The triangulation comes from pushing every boundary point `p` out to
/// `(M + h) p` with a large `M` and a seeded height `h`, which lifts a generic
/// regular subdivision onto each facet.
pub fn random_complete_fan<Z: Int>(seed: u64, cfg: &RandomFanConfig) -> Result<Fan<Z>> {
    let d = cfg.dim;
    if d < 2 {
        return Err(Error::Invalid("random fans need dimension at least 2".into()));
    }
    if cfg.coord_bound < 1 {
        return Err(Error::Invalid("coordinate bound must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..POINT_ATTEMPTS {
        let points = draw_points::<Z>(&mut rng, cfg)?;
        let Some(boundary) = boundary_if_interior(d, &points) else {
            continue;
        };
        let big = lift_scale::<Z>(cfg);
        for _ in 0..LIFT_ATTEMPTS {
            if let Some(fan) = lifted_face_fan(d, &boundary, &big, &mut rng) {
                return Ok(fan);
            }
        }
    }
    Err(Error::LimitsExceeded(format!(
        "no point configuration with the origin in its interior and a simplicial lift after {POINT_ATTEMPTS} attempts"
    )))
}

fn draw_points<Z: Int>(rng: &mut ChaCha8Rng, cfg: &RandomFanConfig) -> Result<Vec<Vector<Z>>> {
    let d = cfg.dim;
    let mut points: Vec<Vector<Z>> = Vec::new();
    for f in &cfg.forced {
        if f.len() != d {
            return Err(Error::Invalid(format!(
                "forced point of dimension {} in dimension {d}",
                f.len()
            )));
        }
        let v = Vector::from_i64s(f);
        if v.is_zero() {
            return Err(Error::Invalid("forced point is the origin".into()));
        }
        if !points.contains(&v) {
            points.push(v);
        }
    }
    let target = points.len() + cfg.num_points;
    let box_size = (2 * cfg.coord_bound + 1).checked_pow(d as u32).unwrap_or(i64::MAX) - 1;
    let target = target.min(usize::try_from(box_size).unwrap_or(usize::MAX));
    while points.len() < target {
        let c: Vec<i64> = (0..d)
            .map(|_| rng.gen_range(-cfg.coord_bound..=cfg.coord_bound))
            .collect();
        let v = Vector::from_i64s(&c);
        if !v.is_zero() && !points.contains(&v) {
            points.push(v);
        }
    }
    Ok(points)
}

/// The points on the boundary of `conv(points)`, if the origin is interior.
fn boundary_if_interior<Z: Int>(d: usize, points: &[Vector<Z>]) -> Option<Vec<Vector<Z>>> {
    let lifted: Vec<Vector<Z>> = points.iter().map(|p| p.extended(Z::one())).collect();
    let hull = Cone::from_generators_in(d + 1, lifted).ok()?;
    if !hull.is_full_dimensional() {
        return None;
    }
    // Facet (ρ, b) reads ρ·x + b >= 0; the origin is interior iff every b > 0.
    if hull.support_hyperplanes().iter().any(|h| !h.last().is_positive()) {
        return None;
    }
    let boundary = points
        .iter()
        .filter(|p| {
            hull.support_hyperplanes()
                .iter()
                .any(|h| (h.truncated().dot(p) + h.last().clone()).is_zero())
        })
        .cloned()
        .collect();
    Some(boundary)
}

fn lift_scale<Z: Int>(cfg: &RandomFanConfig) -> Z {
    // Large enough that the push-out never moves a point across a facet
    // hyperplane of the original hull.
    let side = int::<Z>(2 * cfg.coord_bound + 1);
    let mut m = int::<Z>(HEIGHT_RANGE * 1000);
    for _ in 0..cfg.dim {
        m = m * side.clone();
    }
    m
}

fn lifted_face_fan<Z: Int>(d: usize, boundary: &[Vector<Z>], big: &Z, rng: &mut ChaCha8Rng) -> Option<Fan<Z>> {
    let pushed: Vec<Vector<Z>> = boundary
        .iter()
        .map(|p| {
            let h = int::<Z>(rng.gen_range(0..HEIGHT_RANGE));
            p.scale(&(big.clone() + h)).extended(Z::one())
        })
        .collect();
    let hull = Cone::from_generators_in(d + 1, pushed.clone()).ok()?;
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for h in hull.support_hyperplanes() {
        let on: Vec<usize> = (0..pushed.len()).filter(|&i| h.dot(&pushed[i]).is_zero()).collect();
        if on.len() != d {
            return None;
        }
        cones.push(on);
    }
    // Keep only the points that became vertices, in input order.
    let mut used: Vec<usize> = cones.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let rays: Vec<Vector<Z>> = used
        .iter()
        .map(|&i| boundary[i].primitive().expect("nonzero point"))
        .collect();
    let cones: Vec<Vec<usize>> = cones
        .into_iter()
        .map(|c| c.iter().map(|i| used.binary_search(i).expect("used")).collect())
        .collect();
    let mut fan = Fan::new(d, rays, cones);
    fan.cones.sort();
    Some(fan)
}
