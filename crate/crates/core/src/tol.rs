//! Default numerical tolerances.

/// Unitarity / determinant residual accepted when validating input elements.
pub const UNIT: f64 = 1e-9;
/// Residual targeted by constructions (sampling, exp).
pub const CONSTRUCT: f64 = 1e-12;
/// Commutator residual accepted for a commuting (or K-almost-commuting) tuple.
pub const COMM: f64 = 1e-9;
/// Distance from an eigenvalue to -1 below which the principal logarithm refuses.
pub const EIG_BRANCH: f64 = 1e-8;
/// Eigenvalue clustering threshold used by joint diagonalization.
pub const CLUSTER: f64 = 1e-7;
