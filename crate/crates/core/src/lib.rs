//! Exact computation of critical loci for pairs of multi-view projection setups.

pub mod error;
pub mod field;
pub mod geometry;
pub mod fixtures;
pub mod groebner;
pub mod io;
pub mod linalg;
pub mod locus;
pub mod monomial;
pub mod poly;
pub mod scene;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Field, Zp, DEFAULT_PRIME, Q};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{MultiPoly, PolyRing, Ring, VarSet};
pub use groebner::{GroebnerBasis, Ideal};
pub use scene::{Camera, ProjectionSetup, ProjectivePoint};
pub use locus::Side;
