//! Computations on the variety `Hom(Z^k, G)` of commuting k-tuples in a compact
//! connected matrix group `G = (S^1)^r x SU(p_1) x ... x SU(p_s) / K`.
//!
//! The crate is organised bottom-up:
//!
//! * [`matgroup`]: group descriptors, elements, exp/log, Haar sampling, distance.
//! * [`commvar`]: commuting tuples, validation, samplers, conjugation.
//! * [`weyl`]: the conjugation map `sigma_k`, joint diagonalization, Weyl regularity.
//! * [`central`]: lifts through `G~ -> G~/K`, commutator fingerprints, deck action.
//! * [`finmodel`]: finite-group oracles (extraspecial groups, censuses, component counts).
//! * [`homotopy`]: loop contraction, tuple homotopies, paths to the trivial tuple, windings.
//! * [`pi1`]: fundamental-group bookkeeping and exact-sequence checks.
//! * [`acceptance`]: the end-to-end acceptance battery shared by tests and the CLI.

pub mod acceptance;
pub mod central;
pub mod commvar;
mod error;
pub mod finmodel;
pub mod homotopy;
pub mod matgroup;
pub mod pi1;
pub mod tol;
pub mod weyl;

pub use error::{Error, ExactnessStage, Result};
