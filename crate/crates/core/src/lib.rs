//! Local (region-filtered) entanglement measures for two-mode
//! continuous-variable quantum states.
//!
//! A projective position filter restricts each party of a two-mode state to a
//! small interval; in the limit of small intervals each mode becomes an
//! effective qubit and the remaining entanglement is characterized by ordinary
//! two-qubit measures. This crate provides
//!
//! - Gaussian density kernels for coupled-oscillator ground and thermal
//!   states, plus a generic kernel interface for non-Gaussian states
//!   ([`state`]);
//! - the leading-order concurrence and negativity densities computed from
//!   local derivative data ([`measures`]);
//! - the exact two-qubit reduction of a filtered state by quadrature, and its
//!   leading-order counterpart ([`qubit`]);
//! - standard 4x4 entanglement measures: Wootters concurrence, negativity,
//!   entanglement of formation ([`two_qubit`]);
//! - brute-force grid oracles: discretized wavefunctions, projective filters,
//!   Schmidt entropies and grid-level partial-transpose negativity ([`grid`]);
//! - covariance-matrix reference values: global negativity and the full
//!   reduced entropy ([`gaussian_ref`]);
//! - the effective-Pauli / SWAP construction that transfers the local
//!   entanglement onto true qubits ([`extraction`]).
//!
//! Units: `hbar = k_B = 1`, lengths in `(m w)^-1/2`, densities in `m*w`,
//! temperatures in units of `w`.
//!
//! The crate is `no_std` (requires `alloc`); all operations are pure
//! functions of their inputs and safe to run concurrently.

#![no_std]

extern crate alloc;

pub mod extraction;
pub mod gaussian_ref;
pub mod grid;
pub mod measures;
pub mod quad;
pub mod qubit;
pub mod state;
pub mod two_qubit;

pub use num_complex::Complex64;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A constructor precondition was violated.
    #[error("invalid parameter: {0}")]
    Parameter(&'static str),
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(&'static str),
    /// An internal identity (Hermiticity, realness, sign) failed beyond
    /// roundoff, signalling corrupted input rather than noise.
    #[error("consistency error: {0}")]
    Consistency(&'static str),
    /// A numerical method failed to converge to its tolerance.
    #[error("numeric error: {0}; achieved tolerance {1:e}")]
    Numeric(&'static str, f64),
    /// The requested measure is undefined for this input.
    #[error("unsupported measure: {0}")]
    Unsupported(&'static str),
    /// The optimum region shape is undefined (pure or degenerate case).
    #[error("undefined optimum: {0}")]
    UndefinedOptimum(&'static str),
    /// A matrix failed density-matrix validation.
    #[error("invalid state: {0}")]
    InvalidState(&'static str),
    /// A filter region captured (numerically) no probability.
    #[error("empty region: captured probability {0:e}")]
    EmptyRegion(f64),
    /// A grid eigenproblem exceeds the dimension budget.
    #[error("grid budget exceeded: dimension {dim} > budget {budget}; use a coarser grid")]
    Budget { dim: usize, budget: usize },
    /// Grid results disagree between resolutions.
    #[error("grid resolution too coarse: {0}")]
    Resolution(&'static str),
    /// The filter region is too large for the two-level approximation.
    #[error("region too large for two-level reduction: lambda3/lambda2 = {0:e}")]
    RegionTooLarge(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
