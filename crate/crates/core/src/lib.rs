//! Spectral-statistics laboratory for shifted i.i.d. random matrices:
//! deterministic linear-algebra machinery (doubled Hermitian forms,
//! resolvents, overlaps, contour projectors, minor identities, the
//! self-consistent Dyson equation) plus a reproducible Monte Carlo harness
//! for density, overlap, and smallest-singular-value tail experiments.

pub mod ensembles;
pub mod error;
pub mod hermitization;
pub mod linalg;
pub mod matrix;
pub mod mde;
pub mod montecarlo;
pub mod rng;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{Field, Matrix};
