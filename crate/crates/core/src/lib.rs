//! Exact multisections of the odd-dimensional torus `T^{2k-1} = (R/kZ)^{2k-1}`
//! into `k` pieces, their intersections, handle decompositions and lifts to
//! directed cube complexes.
//!
//! All coordinates are integers counting sixths of a unit, so every
//! breakpoint that occurs (integers, halves, thirds and sixths) is exact.

pub mod cubulation;
pub mod error;
pub mod golden;
pub mod handles;
pub mod identities;
pub mod index_set;
pub mod matching;
pub mod multisection;
pub mod perm;
pub mod torus;

pub use error::{Error, Result};
pub use index_set::IndexSet;
pub use torus::{Factor, OrbitBox, ScaledPoint, TorusParams};
