//! Numerical toolkit for (conditionally) positive semidefinite functions and
//! the translation-invariant Fourier multipliers they define.
//!
//! The crate is organised in four layers:
//!
//! | module      | purpose                                                          |
//! |-------------|------------------------------------------------------------------|
//! | [`psd`]     | eigenvalue tests for matrices, Gram matrices, Hadamard products  |
//! | [`synth`]   | generators: Bochner transforms, Lévy–Khintchine, exponentials    |
//! | [`engine`]  | periodic grids, discrete Fourier pair, multiplier application    |
//! | [`harness`] | seeded scenarios, JSON configs and reports, CLI plumbing         |
//!
//! Fourier transforms use the unitary convention
//! `f^(y) = (2π)^{-n/2} ∫ e^{-i y·x} f(x) dx` throughout, so a multiplier
//! `G(-i∇)` maps `f` to `(G f^)^∨`.
//!
//! Ensemble loops run on rayon when the `parallel` feature is enabled (the
//! default); without it everything runs sequentially with identical results.

pub mod engine;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod par;
pub mod psd;
pub mod rng;
pub mod symbol;
pub mod synth;

pub use error::{Error, Result};
pub use linalg::{C64, CMatrix};
pub use symbol::{MatrixSymbol, Provenance, ScalarSymbol};
