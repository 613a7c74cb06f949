//! Exact lattice geometry for smooth toric varieties: rational cones and
//! their Hilbert bases, lattice polytopes, complete fans and their support
//! polytopes, low-degree toric ideal computations, degree-2 criteria,
//! chiseling and shrinking, and a randomized search driver.
//!
//! Every kernel is generic over an exact integer scalar `Z: Int`. The
//! aliases below fix `Z = BigInt`, which is what the command-line tool uses.

pub mod cone;
pub mod criteria;
pub mod error;
pub mod fan;
pub mod fixtures;
pub mod lattice;
pub mod polytope;
pub mod scalar;
pub mod search;
mod textio;
pub mod toric;
pub mod transforms;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use scalar::Int;

pub type LatVec = lattice::Vector<BigInt>;
pub type LatMatrix = lattice::Matrix<BigInt>;
pub type RationalCone = cone::Cone<BigInt>;
pub type LatticePolytope = polytope::Polytope<BigInt>;
pub type LatticeFan = fan::Fan<BigInt>;
