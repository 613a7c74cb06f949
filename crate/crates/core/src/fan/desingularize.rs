use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Fan;
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::scalar::Int;

/// Size caps for desingularization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FanLimits {
    /// At most `d + max_extra_rays` rays.
    pub max_extra_rays: usize,
    pub max_cones: usize,
}

impl Default for FanLimits {
    fn default() -> Self {
        FanLimits {
            max_extra_rays: 20,
            max_cones: 150,
        }
    }
}

impl FanLimits {
    fn check<Z: Int>(&self, fan: &Fan<Z>) -> Result<()> {
        let max_rays = fan.dim() + self.max_extra_rays;
        if fan.rays().len() > max_rays {
            return Err(Error::LimitsExceeded(format!(
                "{} rays exceed the cap of {max_rays}",
                fan.rays().len()
            )));
        }
        if fan.cones().len() > self.max_cones {
            return Err(Error::LimitsExceeded(format!(
                "{} maximal cones exceed the cap of {}",
                fan.cones().len(),
                self.max_cones
            )));
        }
        Ok(())
    }
}

/// Refines a complete simplicial fan to a unimodular one.
///
/// Each round collects the Hilbert bases of all non-unimodular maximal cones
/// and inserts the new vectors by stellar subdivision in a seeded random
/// order. Multiplicities strictly decrease, so the loop terminates; the caps
/// abort it early with [`Error::LimitsExceeded`].
///
/// Panics if the fan is not simplicial.
pub fn desingularize<Z: Int>(fan: &Fan<Z>, limits: &FanLimits, seed: u64) -> Result<Fan<Z>> {
    assert!(fan.is_simplicial(), "desingularization needs a simplicial fan");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fan = fan.clone();
    limits.check(&fan)?;
    loop {
        let singular: Vec<usize> = (0..fan.cones().len())
            .filter(|&c| !fan.multiplicity(c).is_one())
            .collect();
        if singular.is_empty() {
            return Ok(fan);
        }
        let mut fresh: Vec<Vector<Z>> = singular
            .iter()
            .flat_map(|&c| {
                Cone::from_generators_in(fan.dim(), fan.cone_rays(c))
                    .expect("fan cones are pointed")
                    .hilbert_basis()
            })
            .filter(|h| !fan.rays().contains(h))
            .collect();
        fresh.sort();
        fresh.dedup();
        fresh.shuffle(&mut rng);
        for h in fresh {
            if fan.stellar_insert(&h).is_none() {
                return Err(Error::Invariant(format!("{h} lies outside the fan being refined")));
            }
            limits.check(&fan)?;
        }
    }
}
