//! Named example polytopes used throughout the tests and by the CLI.

use crate::lattice::Vector;
use crate::polytope::Polytope;
use crate::scalar::Int;

fn build<Z: Int>(dim: usize, pts: &[&[i64]]) -> Polytope<Z> {
    let pts: Vec<Vector<Z>> = pts.iter().map(|p| Vector::from_i64s(p)).collect();
    Polytope::from_points(dim, &pts).expect("fixture is full-dimensional")
}

/// The smooth hexagon that is strongly connected but not superconnected.
pub fn hexagon<Z: Int>() -> Polytope<Z> {
    build(2, &[&[0, 0], &[4, 0], &[4, 1], &[3, 3], &[2, 4], &[0, 4]])
}

/// Points of the five-point chiseling counterexample, in the order
/// `x, y, z, v, w`.
pub const FIVE_POINT_LABELS: [(&str, [i64; 3]); 5] = [
    ("x", [0, 0, 0]),
    ("y", [1, 0, 0]),
    ("z", [0, 1, 0]),
    ("v", [1, 1, 2]),
    ("w", [0, 0, -1]),
];

/// A normal 3-polytope with five lattice points whose toric ideal is
/// generated by a single cubic.
pub fn five_point<Z: Int>() -> Polytope<Z> {
    let pts: Vec<&[i64]> = FIVE_POINT_LABELS.iter().map(|(_, p)| p.as_slice()).collect();
    build(3, &pts)
}

/// The very ample, non-normal 3-polytope with eight vertices
/// `({(0,0)} × {0,1}) ∪ ({(0,1)} × {2,3}) ∪ ({(1,1)} × {1,2}) ∪ ({(1,0)} × {3,4})`.
pub fn eight_point<Z: Int>() -> Polytope<Z> {
    build(
        3,
        &[
            &[0, 0, 0],
            &[0, 0, 1],
            &[0, 1, 2],
            &[0, 1, 3],
            &[1, 1, 1],
            &[1, 1, 2],
            &[1, 0, 3],
            &[1, 0, 4],
        ],
    )
}

/// Points of the join of two segments with midpoints, in the order
/// `x, y, z, u, v, w`.
pub const JOIN_LABELS: [(&str, [i64; 3]); 6] = [
    ("x", [0, 0, 0]),
    ("y", [1, 0, 0]),
    ("z", [2, 0, 0]),
    ("u", [0, 0, 1]),
    ("v", [0, 1, 1]),
    ("w", [0, 2, 1]),
];

/// Join of the segments `[x, z]` and `[u, w]` with their midpoints `y`, `v`.
pub fn join_of_segments<Z: Int>() -> Polytope<Z> {
    let pts: Vec<&[i64]> = JOIN_LABELS.iter().map(|(_, p)| p.as_slice()).collect();
    build(3, &pts)
}

pub fn unit_simplex<Z: Int>(d: usize) -> Polytope<Z> {
    let mut pts = vec![Vector::zero(d)];
    pts.extend((0..d).map(|i| Vector::unit(d, i)));
    Polytope::from_points(d, &pts).expect("simplex")
}

pub fn unit_cube<Z: Int>(d: usize) -> Polytope<Z> {
    box_polytope(&vec![1; d])
}

/// `[0, a_1] × … × [0, a_d]`.
pub fn box_polytope<Z: Int>(sides: &[i64]) -> Polytope<Z> {
    let d = sides.len();
    let pts: Vec<Vector<Z>> = (0..1usize << d)
        .map(|mask| {
            let c: Vec<i64> = (0..d).map(|i| if mask >> i & 1 == 1 { sides[i] } else { 0 }).collect();
            Vector::from_i64s(&c)
        })
        .collect();
    Polytope::from_points(d, &pts).expect("box")
}

/// The Reeve-type simplex `conv{0, e1, e2, (1,1,k)}`.
pub fn reeve<Z: Int>(k: i64) -> Polytope<Z> {
    build(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, k]])
}

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 6] = ["hexagon", "five-point", "eight-point", "join", "unit-cube", "reeve-2"];

/// Looks up a fixture by its name in [`NAMES`].
pub fn by_name<Z: Int>(name: &str) -> Option<Polytope<Z>> {
    Some(match name {
        "hexagon" => hexagon(),
        "five-point" => five_point(),
        "eight-point" => eight_point(),
        "join" => join_of_segments(),
        "unit-cube" => unit_cube(3),
        "reeve-2" => reeve(2),
        _ => return None,
    })
}
