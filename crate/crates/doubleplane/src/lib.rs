//! Exact computational geometry of plane curves and double covers.
//!
//! The toolkit decides whether a degree-s plane curve C meets a degree-2s
//! branch curve B with even intersection multiplicity at every common point,
//! certifies the verdict with closed points and residue fields, constructs
//! families of such pairs, probes the splitting of the induced double cover
//! over C, and exhaustively classifies tangent conics to a quartic over a
//! small finite field.
//!
//! Arithmetic is exact throughout: the rationals, prime fields F_p, and
//! extension fields F_{p^k}. Every randomized step takes an explicit seed and
//! is deterministic given that seed.

pub mod algebra;
pub mod construct;
pub mod cover;
pub mod curve;
pub mod error;
pub mod hunt;
pub mod intersect;
pub mod ulrich;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
