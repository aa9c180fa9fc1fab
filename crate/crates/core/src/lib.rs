//! Markovian embedding of nonlocal (memory-kernel) evolution equations.
//!
//! A history-dependent equation of the form
//!
//! ```text
//! ẏ(t) = L(t, y) + ∫₀ᵗ N(y(t), y(s), t − s) ds
//! ```
//!
//! is rewritten as a local-in-time system by representing the memory kernel
//! spectrally, `N = ∫_Γ n(k) e^{c(k)(t−s)} … dk`, and adjoining one complex
//! auxiliary variable H(k, t) per spectral node. Each node evolves by an
//! ordinary differential equation
//!
//! ```text
//! Ḣ(k) = (c(k) + d(k, y))·H(k) + s(k, y, t)
//! ```
//!
//! and the memory term is recovered as a quadrature of H over k. The cost per
//! step is constant in time, in contrast to direct evaluation of the history
//! integral, whose cost grows with the length of the stored path.
//!
//! The crate provides:
//!
//! - [`quadrature`]: Chebyshev grids with Chebyshev-weight and Clenshaw-Curtis
//!   rules, and deterministic history integration.
//! - [`integrators`]: Heun and ETDRK2 single-step integrators with stable
//!   φ-function evaluation.
//! - [`embedding`]: the generic coupled mechanical/history stepper.
//! - [`walker`]: the 1D walking-droplet (pilot-wave) instantiation, with
//!   Bessel J₁, the analytical steady speed, and regime diagnostics.
//! - [`stefan`]: the 1D single-phase Stefan (melting front) instantiation,
//!   with erf, closed-form kernels, and the similarity solution.
//! - [`direct`]: a direct Volterra solver for the walker equation that stores
//!   the full path; correctness oracle and performance baseline.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only switches scalar math to the host libm.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod direct;
pub mod embedding;
pub mod integrators;
mod math;
pub mod quadrature;
pub mod stefan;
pub mod walker;

/// The complex scalar used throughout the public API, re-exported so
/// downstream code does not need its own `num-complex` dependency.
pub use num_complex::Complex64;

/// Runtime failure of a solver loop.
///
/// Precondition violations (degenerate grids, mismatched dimensions, invalid
/// parameters) panic instead: they are programmer errors, and every
/// constructor documents its requirements. `Error` is reserved for conditions
/// that depend on the data of the run itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Error {
    /// The state became non-finite at time `t` (blow-up or invalid arithmetic).
    Divergence { t: f64 },
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::Divergence { t } => write!(f, "solver diverged: non-finite state at t = {t}"),
        }
    }
}

impl core::error::Error for Error {}
