//! Discrete realisation of translation-invariant operators on periodic grids.

pub mod dft;
pub mod grid;
pub mod io;
pub mod multiplier;

pub use dft::{dft_forward, dft_inverse};
pub use grid::{GridField, GridSpec};
pub use multiplier::{
    apply_multiplier, convolve_atomic, convolve_atomic_matrix, kernel_and_tv, l2_norm_bound, lp_vector_norm, positivity_of, positivity_trial,
    GridWitness, KernelTv, SampledSymbol, MultiplierNormReport, PositivityVerdict,
};
