//! Two-qubit entanglement under mixing with the maximally mixed state.
//!
//! The central question this crate answers: given a two-qubit state `ρ₀`, how
//! much of the maximally mixed state `I/4` must be blended in,
//!
//! ```text
//! ρ(ω) = (1 − ω) ρ₀ + ω I/4,        0 ≤ ω ≤ 1,
//! ```
//!
//! before the result becomes separable?  The threshold `ω_c` is a measure of
//! how robust the entanglement of `ρ₀` is against isotropic noise.
//!
//! Three independent computation routes are provided and cross-checked:
//!
//! * closed-form expressions for pure states and for two structured families
//!   of Bell-diagonal-like mixtures ([`omega::omega_c_pure`],
//!   [`omega::omega_c_rank2`], [`omega::omega_c_rank4`]);
//! * the Wootters concurrence evaluated pointwise along the mixing path
//!   ([`entanglement::concurrence`]);
//! * a bisection solver that brackets the separability boundary using the
//!   positive-partial-transpose criterion and the concurrence alone
//!   ([`omega::omega_c_bisect`]).
//!
//! [`matcore`] holds the dense 2×2/4×4 complex matrix kernels (Jacobi and QR
//! eigensolvers, matrix square root, singular values) that everything else is
//! built on; no external linear-algebra crate is used, so every numerical
//! claim here is testable down to the rotation level.

pub mod entanglement;
pub mod matcore;
pub mod omega;
pub mod states;

use thiserror::Error;

/// Everything that can go wrong constructing states or evaluating measures.
///
/// Validation failures carry the offending quantity so callers can report
/// how far out of tolerance the input was.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix required to be Hermitian deviates from its adjoint.
    #[error("matrix is not Hermitian (max |m - m†| entry = {0:.3e})")]
    NotHermitian(f64),
    /// The product spectrum came back complex or significantly negative.
    #[error("spectrum is not real and nonnegative (eigenvalue {re:.6e} + {im:.6e}i)")]
    SpectrumNotReal { re: f64, im: f64 },
    /// A matrix required to be positive semi-definite has a negative eigenvalue
    /// beyond the rejection threshold.
    #[error("matrix is not positive semi-definite (eigenvalue {0:.6e})")]
    NotPsd(f64),
    /// A matrix entry is NaN or infinite.
    #[error("matrix has non-finite entries")]
    NonFinite,
    /// A density matrix must have unit trace.
    #[error("trace must equal 1 (got {0:.12})")]
    TraceNotOne(f64),
    /// A state vector's norm is too far from 1 to renormalize silently.
    #[error("state vector is not normalized (norm = {0:.12})")]
    NotNormalized(f64),
    /// Ensemble or structured-family weights are unusable.
    #[error("invalid weights: {0}")]
    WeightsInvalid(String),
    /// The mixing weight lies outside [0, 1].
    #[error("mixing weight must lie in [0, 1] (got {0})")]
    OmegaOutOfRange(f64),
    /// A structured-family parameter lies outside its domain.
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    /// Bisection tolerance outside the supported range.
    #[error("bisection tolerance must lie in [1e-12, 1e-3] (got {0:e})")]
    ToleranceOutOfRange(f64),
    /// A sweep grid that cannot be iterated.
    #[error("invalid sweep grid: {0}")]
    GridInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Fixed numerical thresholds used throughout the crate.
///
/// These are part of the observable contract (validation behaviour and
/// cross-route agreement guarantees), so they live in one place rather than
/// being scattered as magic numbers.
pub mod tol {
    /// Max allowed entry of |m − m†| for a matrix accepted as Hermitian.
    pub const HERMITICITY: f64 = 1e-10;
    /// Negative eigenvalue band that is clamped to zero (numerical noise).
    pub const SPECTRUM_CLAMP: f64 = 1e-10;
    /// Negative eigenvalue magnitude (or imaginary part) beyond which a
    /// spectrum is rejected instead of repaired.
    pub const SPECTRUM_REJECT: f64 = 1e-8;
    /// State vectors and weight sums within this distance of 1 are
    /// renormalized; anything farther out is an error.
    pub const NORMALIZATION_ACCEPT: f64 = 1e-6;
    /// Concurrence values below this are treated as exactly zero
    /// (separable) by the bisection solver and the sweep.
    pub const CONCURRENCE_ZERO: f64 = 1e-12;
    /// Partial-transpose eigenvalues down to −PPT_BOUNDARY still count as
    /// nonnegative when testing separability.
    pub const PPT_BOUNDARY: f64 = 1e-10;
    /// Closed-form and bisection values of the critical weight must agree
    /// to this tolerance before a closed-form answer is trusted.
    pub const CLOSED_BISECT_AGREEMENT: f64 = 1e-6;
}
