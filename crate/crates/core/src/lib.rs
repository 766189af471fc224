//! Numerical laboratory for Gabor frames and modulation spaces.
//!
//! The crate is organized in layers:
//!
//! - [`tfcore`]: exact piecewise atoms (finite exponential sums and named
//!   numeric closed forms), sampled signals, closed-form Fourier
//!   coefficients over intervals, and discrete mixed `ℓ^{p,q}` norms.
//! - [`gabor`]: Gabor systems on a lattice `αZ × βZ`, the compact-support
//!   frame criterion with computed bounds, canonical dual windows,
//!   analysis/synthesis on finite index rectangles, reconstruction error,
//!   and the translate-correlation duality check.
//! - [`modnorm`]: modulation-space norm estimators, both STFT-based
//!   `M^{p,q}` mixed norms with a Gaussian window and the exact
//!   Fourier-coefficient equivalent norm on box partitions, plus
//!   extensible-pair exponent arithmetic.
//! - [`srlab`]: Shapiro-Rudin sign polynomials and the constructions built
//!   from them: dyadic frequency blocks, geometrically weighted sums,
//!   localized single-cell atoms, the multi-cell counterexample atom, its
//!   Parseval-frame variant, and divergence profiling of coefficient sums.
//! - [`probes`]: convergence instrumentation - discrete Hilbert transform,
//!   Rademacher/Khintchine ratio checks, and seeded permutation/sign-flip
//!   probes of unconditional convergence.
//! - [`accept`]: the one-shot acceptance suite wired into both `cargo test`
//!   and the CLI.
//!
//! Every type is immutable after construction and every operation is a
//! pure function, so computations are safe to fan out over lattice indices;
//! randomized probes derive all their streams from explicit seeds, and
//! accumulations are compensated where order could otherwise show.

pub mod accept;
pub mod gabor;
pub mod modnorm;
pub mod phase;
pub mod probes;
pub mod srlab;
pub mod tfcore;
