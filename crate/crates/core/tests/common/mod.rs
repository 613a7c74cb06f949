#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toriscope::cone::Cone;
use toriscope::fan::{
    desingularize, random_complete_fan, support_polytopes, Fan, FanLimits, RandomFanConfig, SupportMode,
};
use toriscope::lattice::Vector;
use toriscope::polytope::Polytope;
use toriscope::BigInt;

pub type V = Vector<BigInt>;
pub type P = Polytope<BigInt>;

pub fn v(c: &[i64]) -> V {
    Vector::from_i64s(c)
}

pub fn big(k: i64) -> BigInt {
    BigInt::from(k)
}

/// Hull of up to `max_vertices` random points in `[lo, lo + width]^d`, if full-dimensional.
pub fn random_polytope(seed: u64, d: usize, max_vertices: usize, lo: i64, width: i64) -> Option<P> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(d + 1..=max_vertices);
    let pts: Vec<V> = (0..n)
        .map(|_| v(&(0..d).map(|_| lo + rng.gen_range(0..=width)).collect::<Vec<_>>()))
        .collect();
    P::from_points(d, &pts)
        .ok()
        .filter(|p| p.vertices().len() <= max_vertices)
}

pub fn unimodular_fan(d: usize, seed: u64) -> Option<Fan<BigInt>> {
    let fan = random_complete_fan::<BigInt>(seed, &RandomFanConfig::new(d, d + 3, 1)).ok()?;
    desingularize(&fan, &FanLimits::default(), seed).ok()
}

/// A smooth polytope whose normal fan is a seeded random unimodular fan of
/// Picard rank at most 8.
pub fn smooth_polytope(d: usize, seed: u64) -> Option<P> {
    let fan = unimodular_fan(d, seed).filter(|f| f.rays().len() <= d + 8)?;
    let r = support_polytopes(&fan, SupportMode::HilbertBasis, &big(20_000)).ok()?;
    r.polytopes.into_iter().next().map(|sp| sp.polytope)
}

/// A pointed full-dimensional cone on random generators, if the draw gives one.
pub fn random_cone(seed: u64, d: usize, max_mult: i64) -> Option<Cone<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(d..=d + 2);
    let gens: Vec<V> = (0..n)
        .map(|_| v(&(0..d).map(|_| rng.gen_range(-5..=5)).collect::<Vec<_>>()))
        .filter(|g| !g.is_zero())
        .collect();
    let c = Cone::from_generators(gens).ok()?;
    (c.is_full_dimensional() && c.is_pointed() && c.normalized_volume() <= big(max_mult)).then_some(c)
}

/// Lattice points of a polytope by scanning its bounding box.
pub fn box_points(p: &P) -> Vec<V> {
    let d = p.dim();
    let coords: Vec<Vec<i64>> = p.vertices().iter().map(|w| w.to_i64s().unwrap()).collect();
    let lo: Vec<i64> = (0..d).map(|k| coords.iter().map(|c| c[k]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..d).map(|k| coords.iter().map(|c| c[k]).max().unwrap()).collect();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        let pt = v(&x);
        if p.facets().iter().all(|f| f.slack(&pt) >= big(0)) {
            out.push(pt);
        }
        let mut k = 0;
        loop {
            if k == d {
                out.sort();
                return out;
            }
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Inward facet normals of a 2- or 3-dimensional cone from all
/// (d-1)-subsets of its generators.
pub fn brute_facets(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = gens[0].len();
    let mut out = BTreeSet::new();
    let mut consider = |n: Vec<i64>| {
        let g = n.iter().fold(0i64, |a, &b| gcd(a, b));
        if g == 0 {
            return;
        }
        let n: Vec<i64> = n.iter().map(|c| c / g).collect();
        let vals: Vec<i64> = gens.iter().map(|x| dot(&n, x)).collect();
        if vals.iter().all(|&s| s >= 0) {
            out.insert(n);
        } else if vals.iter().all(|&s| s <= 0) {
            out.insert(n.iter().map(|c| -c).collect());
        }
    };
    for (i, a) in gens.iter().enumerate() {
        if d == 2 {
            consider(vec![-a[1], a[0]]);
            continue;
        }
        for b in &gens[i + 1..] {
            consider(vec![
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]);
        }
    }
    out.into_iter().collect()
}

/// Hilbert basis of a pointed 2- or 3-cone: every cone point of degree at
/// most the sum of generator degrees, minus the sums of two nonzero ones.
pub fn brute_hilbert_basis(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = gens[0].len();
    let facets = brute_facets(gens);
    let omega: Vec<i64> = (0..d).map(|k| facets.iter().map(|f| f[k]).sum()).collect();
    let max_deg: i64 = gens.iter().map(|g| dot(&omega, g)).sum();
    let bound: Vec<i64> = (0..d).map(|k| gens.iter().map(|g| g[k].abs()).sum()).collect();
    let mut pts: Vec<Vec<i64>> = Vec::new();
    let mut x: Vec<i64> = bound.iter().map(|b| -b).collect();
    'scan: loop {
        let deg = dot(&omega, &x);
        if deg > 0 && deg <= max_deg && facets.iter().all(|f| dot(f, &x) >= 0) {
            pts.push(x.clone());
        }
        for k in 0..d {
            if x[k] < bound[k] {
                x[k] += 1;
                continue 'scan;
            }
            x[k] = -bound[k];
        }
        break;
    }
    pts.sort_by_key(|p| dot(&omega, p));
    let set: HashSet<Vec<i64>> = pts.iter().cloned().collect();
    let mut basis: Vec<Vec<i64>> = pts
        .iter()
        .filter(|p| {
            let dp = dot(&omega, p);
            !pts.iter().take_while(|q| 2 * dot(&omega, q) <= dp).any(|q| {
                let r: Vec<i64> = p.iter().zip(q.iter()).map(|(a, b)| a - b).collect();
                set.contains(&r)
            })
        })
        .cloned()
        .collect();
    basis.sort();
    basis
}

pub fn smooth_fixtures() -> Vec<P> {
    use toriscope::fixtures;
    vec![
        fixtures::hexagon(),
        fixtures::unit_cube(3),
        fixtures::unit_simplex(2),
        fixtures::unit_simplex(3),
        fixtures::box_polytope(&[4, 2]),
        fixtures::box_polytope(&[2, 1, 3]),
    ]
}

/// Proptest settings with a fixed seed, so every run explores the same cases
/// and the suite's runtime is reproducible.
pub fn fixed_config(cases: u32) -> proptest::test_runner::Config {
    use proptest::test_runner::{Config, RngSeed};
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x746f_7269),
        failure_persistence: None,
        ..Config::default()
    }
}
