//! Finite strict n-categories, the categories Θ_n and Δ^×n, cellular
//! presheaves and locality, with a verifier for their set-level identities.

pub mod budget;
pub mod colimit;
pub mod error;
pub mod ncat;
pub mod presheaf;
pub mod symmetry;
pub mod theta;
pub mod verifier;

pub use budget::{Budget, Ctx};
pub use error::{NctError, Result};
pub use ncat::{FunctorMap, NCat};
