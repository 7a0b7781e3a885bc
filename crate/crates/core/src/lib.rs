//! Exact computations on intersecting uniform set families: intersection
//! spectra, minimal-transversal bases, closed-form spectrum counts for the
//! star, `A` and `B_p` families, the weighted branching process bounding
//! basis levels, and exhaustive isomorph-free search at small sizes.
//!
//! Explicit families live on ground sets of at most 64 elements; closed
//! forms take arbitrary-precision `n`.

pub mod acceptance;
pub mod binom;
pub mod branching;
pub mod canon;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod halfground;
pub mod limits;
pub mod report;
pub mod scan;
pub mod search;
pub mod set;
pub mod spectrum;
pub mod sunflower;
pub mod transversal;

pub use error::{Error, Result};
pub use family::{FamilyFile, SetFamily};
pub use limits::Limits;
pub use set::{ElementSet, GroundSpec};
