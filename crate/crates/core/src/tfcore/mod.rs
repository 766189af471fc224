//! Exact and sampled signal representations.
//!
//! The central type is [`PiecewiseAtom`]: a compactly supported function
//! assembled from half-open pieces that are either finite exponential sums
//! ([`TrigPiece`]) or pointwise-evaluable closed forms ([`NumericPiece`]).
//! Translation, modulation, and scalar multiples stay inside the class, and
//! Fourier coefficients of trig content come out in closed form, so frame
//! and norm computations downstream can be exact wherever the inputs are.
//!
//! Generic test signals live in [`SampledSignal`]; Gabor coefficient
//! rectangles in [`CoeffGrid`] with mixed `ℓ^{p,q}` norms via [`lpq_norm`].

mod atom;
mod fourier;
mod mixed;
mod sampled;
mod serial;

pub use atom::{
    box_atom, triangle_atom, NumericBuilder, NumericPiece, Piece, PiecewiseAtom, Smoothness,
    TrigPiece,
};
pub use fourier::{
    adaptive_simpson, fourier_coefficient, inner_product, l2_norm_sq, QuadOpts, EPS_DEGENERATE,
};
pub use mixed::{lpq_norm, CoeffGrid, MixedNormParams};
pub use sampled::{GridSpec, SampledSignal};
pub use serial::{atom_from_json, atom_to_json, SerialError};

use std::fmt;

/// Errors from signal construction and integration.
#[derive(Debug, Clone, PartialEq)]
pub enum TfError {
    /// Interval endpoints do not satisfy `a < b`, or are not finite.
    InvalidInterval { a: f64, b: f64 },
    /// Pieces of an atom overlap.
    OverlappingPieces { first_end: f64, second_start: f64 },
    /// Grid step must be positive and finite.
    InvalidStep(f64),
    /// A sampled signal needs at least one sample.
    EmptySignal,
    /// Mixed-norm exponents must be `>= 1` (or infinity).
    InvalidExponent(f64),
    /// Adaptive quadrature exhausted its evaluation budget before reaching
    /// the requested absolute tolerance.
    QuadratureFailure {
        a: f64,
        b: f64,
        requested_tol: f64,
        achieved: f64,
    },
}

impl fmt::Display for TfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TfError::InvalidInterval { a, b } => {
                write!(f, "invalid interval [{a}, {b}): endpoints must satisfy a < b")
            }
            TfError::OverlappingPieces {
                first_end,
                second_start,
            } => write!(
                f,
                "overlapping pieces: piece ending at {first_end} overlaps piece starting at {second_start}"
            ),
            TfError::InvalidStep(s) => write!(f, "grid step must be positive, got {s}"),
            TfError::EmptySignal => write!(f, "sampled signal needs at least one sample"),
            TfError::InvalidExponent(p) => {
                write!(f, "mixed-norm exponent must be >= 1 or infinity, got {p}")
            }
            TfError::QuadratureFailure {
                a,
                b,
                requested_tol,
                achieved,
            } => write!(
                f,
                "quadrature on [{a}, {b}] could not reach tolerance {requested_tol:.3e} within budget (achieved {achieved:.3e})"
            ),
        }
    }
}

impl std::error::Error for TfError {}
