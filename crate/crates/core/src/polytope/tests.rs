use num_bigint::BigInt;
use num_rational::Ratio;

use super::*;
use crate::fixtures;

type V = Vector<BigInt>;
type P = Polytope<BigInt>;

fn v(c: &[i64]) -> V {
    V::from_i64s(c)
}

fn poly(dim: usize, pts: &[&[i64]]) -> P {
    let pts: Vec<V> = pts.iter().map(|p| v(p)).collect();
    Polytope::from_points(dim, &pts).unwrap()
}

fn z(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Pick's theorem for a lattice polygon given by its vertices in cyclic order.
fn pick_count(cyclic: &[(i64, i64)]) -> i64 {
    let n = cyclic.len();
    let mut twice_area = 0;
    let mut boundary = 0;
    for i in 0..n {
        let (x0, y0) = cyclic[i];
        let (x1, y1) = cyclic[(i + 1) % n];
        twice_area += x0 * y1 - x1 * y0;
        boundary += num_integer::gcd(x1 - x0, y1 - y0).abs();
    }
    let twice_area = twice_area.abs();
    // 2A = 2I + B - 2
    let interior = (twice_area - boundary + 2) / 2;
    interior + boundary
}

#[test]
fn unit_square_data() {
    let sq = fixtures::unit_cube::<BigInt>(2);
    assert_eq!(sq.lattice_points().len(), 4);
    assert_eq!(sq.facets().len(), 4);
    assert_eq!(sq.edges().len(), 4);
    assert!(sq.spans_lattice());
    assert!(sq.is_smooth());
}

#[test]
fn hexagon_lattice_points_match_pick() {
    let hex = fixtures::hexagon::<BigInt>();
    let expected = pick_count(&[(0, 0), (4, 0), (4, 1), (3, 3), (2, 4), (0, 4)]);
    assert_eq!(expected, 21);
    assert_eq!(hex.lattice_points().len(), 21);
    let mut sorted = hex.lattice_points().to_vec();
    sorted.sort();
    assert_eq!(sorted, hex.lattice_points());
}

#[test]
fn five_point_polytope_has_only_its_vertices() {
    let p = fixtures::five_point::<BigInt>();
    assert_eq!(p.vertices().len(), 5);
    assert_eq!(p.lattice_points(), p.vertices());
}

#[test]
fn degenerate_input_is_rejected() {
    let err = Polytope::<BigInt>::from_points(2, &[v(&[0, 0]), v(&[1, 1]), v(&[2, 2])]).unwrap_err();
    assert_eq!(err, Error::Degenerate { dim: 1, ambient: 2 });
}

#[test]
fn corner_cones() {
    let sq = fixtures::unit_cube::<BigInt>(2);
    let c = sq.corner_cone(&v(&[0, 0])).unwrap();
    let mut rays = c.extreme_rays().to_vec();
    rays.sort();
    assert_eq!(rays, vec![v(&[0, 1]), v(&[1, 0])]);

    let hex = fixtures::hexagon::<BigInt>();
    let c = hex.corner_cone(&v(&[3, 3])).unwrap();
    let mut rays = c.extreme_rays().to_vec();
    rays.sort();
    assert_eq!(rays, vec![v(&[-1, 1]), v(&[1, -2])]);

    let five = fixtures::five_point::<BigInt>();
    let c = five.corner_cone(&v(&[0, 0, -1])).unwrap();
    let mut gens = c.generators().to_vec();
    gens.sort();
    assert_eq!(gens, vec![v(&[0, 0, 1]), v(&[0, 1, 1]), v(&[1, 0, 1]), v(&[1, 1, 3])]);

    assert!(matches!(sq.corner_cone(&v(&[1, 2])), Err(Error::NotAVertex(_))));
}

#[test]
fn smoothness() {
    assert!(fixtures::hexagon::<BigInt>().is_smooth());
    assert!(fixtures::unit_cube::<BigInt>(3).is_smooth());
    let t = poly(2, &[&[0, 0], &[2, 1], &[1, 2]]);
    assert!(!t.is_smooth());
    // det of (2,1),(1,2) is 3
    assert_eq!(Matrix::<BigInt>::from_i64_rows(&[&[2, 1], &[1, 2]]).determinant(), z(3));
}

#[test]
fn very_ampleness() {
    assert!(fixtures::eight_point::<BigInt>().is_very_ample());
    assert!(fixtures::hexagon::<BigInt>().is_very_ample());
    let p = poly(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 3]]);
    let (vertex, h) = p.very_ampleness_witness().unwrap();
    assert!(!p.contains(&(&vertex + &h)));
}

/// Normality oracle independent of Hilbert bases: every lattice point of
/// `kP` is a sum of lattice points of `P` and `(k-1)P` for `k < d`.
fn normal_by_decomposition(p: &P) -> bool {
    let d = p.dim();
    let pts = p.lattice_points();
    let mut prev: Vec<V> = pts.to_vec();
    for k in 2..d.max(2) {
        let kp = p.dilate(&z(k as i64));
        for x in kp.lattice_points() {
            if !pts.iter().any(|q| prev.binary_search(&(x - q)).is_ok()) {
                return false;
            }
        }
        prev = kp.lattice_points().to_vec();
    }
    true
}

#[test]
fn normality() {
    let eight = fixtures::eight_point::<BigInt>();
    let w = eight.normality_witness().unwrap();
    assert!(w.last() >= &z(2));
    assert!(!normal_by_decomposition(&eight));
    assert!(fixtures::unit_simplex::<BigInt>(3).is_normal());
    let five = fixtures::five_point::<BigInt>();
    assert!(normal_by_decomposition(&five));
    assert!(five.is_normal());
}

#[test]
fn hc_condition_examples() {
    assert!(fixtures::unit_cube::<BigInt>(3).hc_condition().unwrap());
    assert!(matches!(
        fixtures::eight_point::<BigInt>().hc_condition(),
        Err(Error::NotSimple(_))
    ));
    assert!(poly(2, &[&[0, 0], &[4, 0], &[0, 4]]).hc_condition().unwrap());
}

#[test]
fn monoid_hilbert_basis_of_a_non_smooth_corner() {
    // corner (0,0) of conv{(0,0),(2,1),(1,2)} holds (1,1) as a lattice point
    let t = poly(2, &[&[0, 0], &[2, 1], &[1, 2]]);
    let hb = t.monoid_hilbert_basis(&v(&[0, 0])).unwrap();
    assert_eq!(hb, vec![v(&[1, 1]), v(&[1, 2]), v(&[2, 1])]);
}

#[test]
fn normal_fans() {
    let s = fixtures::unit_simplex::<BigInt>(3);
    let f = s.normal_fan();
    let mut rays = f.rays().to_vec();
    rays.sort();
    assert_eq!(
        rays,
        vec![v(&[-1, -1, -1]), v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]
    );
    assert!(f.is_complete() && f.is_unimodular());

    let hex = fixtures::hexagon::<BigInt>().normal_fan();
    assert_eq!(hex.rays().len(), 6);
    assert!(hex.is_complete() && hex.is_unimodular());
}

#[test]
fn dilation() {
    let s = fixtures::unit_simplex::<BigInt>(2);
    assert_eq!(s.dilate(&z(1)), s);
    assert_eq!(s.dilate(&z(2)).lattice_points().len(), 6);
    let five2 = fixtures::five_point::<BigInt>().dilate(&z(2));
    assert!(five2.is_normal());
    assert!(normal_by_decomposition(&five2));
}

#[test]
fn ehrhart_examples() {
    let sq = fixtures::unit_cube::<BigInt>(2).ehrhart();
    assert_eq!(sq.hstar, vec![z(1), z(1)]);
    assert_eq!(
        sq.poly_coeffs,
        vec![Ratio::from(z(1)), Ratio::from(z(2)), Ratio::from(z(1))]
    );

    let cube = fixtures::unit_cube::<BigInt>(3).ehrhart();
    assert_eq!(cube.hstar, vec![z(1), z(4), z(1)]);
    assert_eq!(
        cube.poly_coeffs,
        vec![z(1), z(3), z(3), z(1)]
            .into_iter()
            .map(Ratio::from)
            .collect::<Vec<_>>()
    );

    let hex = fixtures::hexagon::<BigInt>().ehrhart();
    assert_eq!(
        hex.poly_coeffs,
        vec![Ratio::from(z(1)), Ratio::new(z(13), z(2)), Ratio::new(z(27), z(2))]
    );
    assert!(hex.is_positive());
    // Pick at k = 2: area 4·27/2, boundary 26
    assert_eq!(hex.counts[2], z(54 + 13 + 1));
}

#[test]
fn reeve_simplex_has_a_negative_linear_coefficient() {
    let e = fixtures::reeve::<BigInt>(13).ehrhart();
    assert_eq!(e.poly_coeffs[1], Ratio::new(z(-1), z(6)));
    assert!(!e.is_positive());
}

#[test]
fn from_inequalities_round_trip() {
    let hex = fixtures::hexagon::<BigInt>();
    let again = Polytope::from_inequalities(2, hex.facets()).unwrap();
    assert_eq!(again, hex);
    let half = vec![
        Facet {
            normal: v(&[2, 0]),
            offset: z(0),
        },
        Facet {
            normal: v(&[-2, 0]),
            offset: z(1),
        },
        Facet {
            normal: v(&[0, 1]),
            offset: z(0),
        },
        Facet {
            normal: v(&[0, -1]),
            offset: z(1),
        },
    ];
    assert!(matches!(
        Polytope::from_inequalities(2, &half),
        Err(Error::NonIntegralVertex(_))
    ));
}

#[test]
fn text_format_round_trip() {
    let eight = fixtures::eight_point::<BigInt>();
    let text = format_polytope(&eight);
    assert!(text.starts_with("polytope 3 8\n0 0 0\n"));
    let back: P = parse_polytope(&format!("# comment\n{text}# trailing\n")).unwrap();
    assert_eq!(back, eight);
    let err = parse_polytope::<BigInt>("polytope 2 3\n0 0\n1 x\n0 1\n").unwrap_err();
    assert_eq!(
        err,
        Error::Parse {
            line: 3,
            message: "bad integer `x`".into()
        }
    );
}
