//! Entropic uncertainty with and without temporal memory.
//!
//! The crate computes sequential (two-time) projective measurement statistics
//! on finite-dimensional quantum systems and evaluates entropic uncertainty
//! bounds against them: Robertson, Maassen–Uffink, the quantum-memory bound,
//! the temporally conditioned bound and the temporal entropic steering
//! witness. For a spin-s rotor evolving under `H = ω S_y` it produces the
//! witness `M_s(θ, φ)` on parameter grids.
//!
//! Module layering, bottom to top:
//!
//! - [`numkernel`]: dense complex linear algebra
//! - [`spin`]: spin operators and Wigner small-d matrices
//! - [`quantum`]: states, observables, sequential statistics
//! - [`infotheory`]: Shannon and von Neumann entropies
//! - [`bounds`]: uncertainty relations and witnesses
//! - [`lhsmodel`]: classical hidden-state models of temporal correlations
//! - [`scan`]: grid scans, check sweeps and their file formats

pub mod bounds;
pub mod error;
pub mod infotheory;
pub mod lhsmodel;
pub mod numkernel;
pub mod quantum;
pub mod random;
pub mod scan;
pub mod spin;
pub mod tol;

pub use error::{Error, Result};
