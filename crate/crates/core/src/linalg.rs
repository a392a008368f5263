//! Dense complex matrix helpers shared by the PSD tests and the synthesizers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
pub use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Dense complex square matrix, row/column indexed as `m[(row, col)]`.
pub type CMatrix = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a matrix from real row-major data.
pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, cols, |i, j| C64::new(rows[i][j], 0.0))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn ensure_finite(m: &CMatrix, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn ensure_square(m: &CMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "expected square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// Largest entry of `|M - M*|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `(M + M*) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
/// Column `k` of the returned matrix is the eigenvector of eigenvalue `k`.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(h.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Spectral norm (largest singular value).
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |a, &s| a.max(s))
}

/// `Σ_{j,k} conj(c_j) M_{jk} c_k`.
pub fn quadratic_form(m: &CMatrix, v: &DVector<C64>) -> C64 {
    v.dotc(&(m * v))
}

/// Entrywise (Hadamard/Schur) product.
pub fn hadamard(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "Hadamard product of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.component_mul(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_entrywise() {
        let a = from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = from_real_rows(&[&[5.0, 6.0], &[7.0, 8.0]]);
        let p = hadamard(&a, &b).unwrap();
        assert_eq!(p, from_real_rows(&[&[5.0, 12.0], &[21.0, 32.0]]));
        let ones = CMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert_eq!(hadamard(&a, &ones).unwrap(), a);
        let c3 = CMatrix::identity(3, 3);
        assert!(matches!(hadamard(&a, &c3), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn eigen_sorted() {
        let m = from_real_rows(&[&[2.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 0.5]]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert_eq!(vals, vec![-1.0, 0.5, 2.0]);
        assert!((vecs[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn operator_norm_of_rotation_is_one() {
        let r = from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!((operator_norm(&r) - 1.0).abs() < 1e-14);
    }
}
