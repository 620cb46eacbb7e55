//! Numerical tolerances shared by every module.
//!
//! All thresholds live here so that validation, clamping and witness
//! decisions agree with each other.

/// Max elementwise |A - A†| accepted for a Hermitian input.
pub const HERMITIAN: f64 = 1e-10;

/// Allowed deviation of a density matrix trace from 1.
pub const TRACE: f64 = 1e-10;

/// Most negative eigenvalue accepted for a positive semidefinite state.
pub const PSD: f64 = 1e-10;

/// Eigenvalues closer than this are grouped into one measurement outcome.
pub const DEGENERACY: f64 = 1e-9;

/// Probabilities in `[-PROB_CLAMP, 0)` are rounding noise and become 0.
pub const PROB_CLAMP: f64 = 1e-12;

/// Allowed deviation of a probability total from 1.
pub const PROB_SUM: f64 = 1e-10;

/// Probabilities below this contribute exactly 0 to Shannon sums.
pub const ENTROPY_FLOOR: f64 = 1e-15;

/// Density-matrix eigenvalues below this contribute 0 to von Neumann sums.
pub const VN_EIGEN_FLOOR: f64 = 1e-12;

/// Smallest marginal probability that may be conditioned on.
pub const CONDITIONING: f64 = 1e-12;

/// A bound counts as violated only when its slack is below `-VIOLATION`.
pub const VIOLATION: f64 = 1e-9;

/// Components below this magnitude are skipped when fixing eigenvector phases.
pub const PHASE_PIVOT: f64 = 1e-12;
