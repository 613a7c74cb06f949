mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toriscope::cone::Cone;
use toriscope::fan::{
    fan_equals, format_fan, parse_fan, random_complete_fan, support_polytopes, Fan, Projectivity, RandomFanConfig,
    SupportMode,
};
use toriscope::polytope::Facet;
use toriscope::BigInt;

fn support_cap() -> BigInt {
    big(20_000)
}

/// `{x : rho_i . x + b_i >= 0}`.
fn polytope_of(fan: &Fan<BigInt>, b: &V) -> P {
    let facets: Vec<Facet<BigInt>> = fan
        .rays()
        .iter()
        .zip(b.coords())
        .map(|(r, bi)| Facet {
            normal: r.clone(),
            offset: bi.clone(),
        })
        .collect();
    P::from_inequalities(fan.dim(), &facets).unwrap()
}

#[test]
fn fan_text_round_trips() {
    for seed in 0..10 {
        let Some(fan) = unimodular_fan(3, seed) else { continue };
        let back = parse_fan::<BigInt>(&format_fan(&fan)).unwrap();
        assert!(fan_equals(&fan, &back));
    }
}

#[test]
fn extreme_ray_mode_returns_fan_preserving_polytopes() {
    for seed in 1..8 {
        let Some(fan) = unimodular_fan(3, seed) else { continue };
        let Ok(r) = support_polytopes(&fan, SupportMode::ExtremeRays, &support_cap()) else {
            continue;
        };
        for sp in &r.polytopes {
            assert!(fan_equals(&sp.polytope.normal_fan(), &fan));
        }
    }
}

proptest! {
    #![proptest_config(fixed_config(24))]

    #[test]
    fn desingularization_is_unimodular_and_refines(seed in any::<u64>(), d in 2usize..=3) {
        let Ok(raw) = random_complete_fan::<BigInt>(seed, &RandomFanConfig::new(d, d + 3, 1)) else { return Ok(()) };
        let Some(fan) = unimodular_fan(d, seed) else { return Ok(()) };
        prop_assert!(fan.is_unimodular());
        let coarse: Vec<Cone<BigInt>> = (0..raw.cones().len())
            .map(|c| Cone::from_generators(raw.cone_rays(c)).unwrap())
            .collect();
        for c in 0..fan.cones().len() {
            prop_assert_eq!(fan.multiplicity(c), big(1));
            let rays = fan.cone_rays(c);
            prop_assert!(coarse.iter().any(|k| rays.iter().all(|r| k.contains(r))), "cone {} refines nothing", c);
        }
    }

    #[test]
    fn random_dual_vectors_are_covered(seed in any::<u64>(), d in 2usize..=3) {
        let Some(fan) = unimodular_fan(d, seed) else { return Ok(()) };
        let cones: Vec<Cone<BigInt>> = (0..fan.cones().len())
            .map(|c| Cone::from_generators(fan.cone_rays(c)).unwrap())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..1000 {
            let u = v(&(0..d).map(|_| rng.gen_range(-20..=20)).collect::<Vec<_>>());
            let hits: Vec<usize> = (0..cones.len()).filter(|&c| cones[c].contains(&u)).collect();
            prop_assert!(!hits.is_empty(), "{} uncovered", u);
            // a vector in two cones lies on their common face
            for w in hits.windows(2) {
                let shared: Vec<V> = fan.cone_rays(w[0]).into_iter().filter(|r| fan.cone_rays(w[1]).contains(r)).collect();
                let on_face = !shared.is_empty() && Cone::from_generators(shared).unwrap().contains(&u);
                prop_assert!(u.is_zero() || on_face, "{} in cones {:?} off their common face", u, w);
            }
        }
    }

    #[test]
    fn support_polytopes_round_trip_and_are_minimal(seed in any::<u64>(), d in 2usize..=3) {
        let Some(fan) = unimodular_fan(d, seed) else { return Ok(()) };
        // keep the Picard rank small enough for exhaustive Hilbert-basis mode
        prop_assume!(fan.rays().len() <= d + 8);
        let Ok(r) = support_polytopes(&fan, SupportMode::HilbertBasis, &support_cap()) else { return Ok(()) };
        if d == 2 {
            prop_assert_eq!(r.verdict, Projectivity::Projective);
        }
        for sp in &r.polytopes {
            prop_assert!(fan_equals(&sp.polytope.normal_fan(), &fan));
            prop_assert_eq!(&polytope_of(&fan, &sp.b), &sp.polytope);
            // condition (LP) at every maximal cone, and the pinned base vertex
            for c in 0..fan.cones().len() {
                let vert = sp.vertex_of(&fan, c).unwrap();
                for &i in &fan.cones()[c] {
                    prop_assert_eq!(fan.rays()[i].dot(&vert), -sp.b.coords()[i].clone());
                }
            }
            prop_assert!(sp.vertex_of(&fan, 0).unwrap().is_zero());
        }
        for (i, a) in r.polytopes.iter().enumerate() {
            for (j, b) in r.polytopes.iter().enumerate() {
                prop_assert!(i == j || !a.polytope.is_subset_of(&b.polytope));
                // monotonicity: P(b_i) lies in P(b_i + b_j)
                let sum = polytope_of(&fan, &(&a.b + &b.b));
                prop_assert!(a.polytope.is_subset_of(&sum));
            }
        }
    }
}
