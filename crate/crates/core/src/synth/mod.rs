//! Constructive generators of (conditionally) positive semidefinite symbols.

pub mod example;
pub mod expm;
pub mod levy;
pub mod measure;
pub mod mollifier;
pub mod semigroup;

pub use example::{example_f0, exp_f0_closed_form, hyperbolic_factor};
pub use expm::{expm, expm_series};
pub use levy::{levy_khintchine, lk_matrix, LkParams};
pub use measure::{bochner_matrix, bochner_scalar, random_psd_matrix, Atom, AtomicMeasure, MatrixMeasure, ScalarMeasure};
pub use mollifier::{basis_test_field, basis_test_field_with, mollifier, MIN_SAMPLES_ACROSS, Mollifier, MollifierSpec, Normalization};
pub use semigroup::{hadamard_exp, matrix_exp};
