//! Matrix exponential by scaling and squaring with a Taylor core.

use crate::linalg::{self, CMatrix};
use crate::Result;

/// `‖B‖₁ ≤ THETA` after scaling.
const THETA: f64 = 0.5;
const MAX_TERMS: usize = 40;

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)`.
///
/// `A` is scaled by `2^{-s}` so that `‖A/2^s‖₁ ≤ 1/2`, the Taylor series is
/// summed until its tail bound drops below half an ulp, and the result is
/// squared `s` times.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    linalg::ensure_square(a)?;
    linalg::ensure_finite(a, "matrix exponential argument")?;
    let n = a.nrows();
    let norm = one_norm(a);
    let s = if norm > THETA { (norm / THETA).log2().ceil() as i32 } else { 0 };
    let b = a.scale(2f64.powi(-s));
    let nb = one_norm(&b);

    let mut term = CMatrix::identity(n, n);
    let mut sum = term.clone();
    let mut factorial_tail = nb; // nb^{k+1}/(k+1)! for k = 0
    for k in 1..=MAX_TERMS {
        term = (&term * &b).unscale(k as f64);
        sum += &term;
        factorial_tail *= nb / (k + 1) as f64;
        // ‖e^B‖ ≥ e^{-1/2}, so an absolute tail below ε/2 is relative ≤ ε.
        let tail = factorial_tail / (1.0 - nb / (k + 2) as f64);
        if tail <= 0.5 * f64::EPSILON {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    linalg::ensure_finite(&sum, "matrix exponential")?;
    Ok(sum)
}

/// Plain truncated power series `Σ_{ℓ<terms} A^ℓ/ℓ!`.
pub fn expm_series(a: &CMatrix, terms: usize) -> CMatrix {
    let n = a.nrows();
    let mut term = CMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..terms {
        term = (&term * a).unscale(k as f64);
        sum += &term;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use crate::linalg::{from_real_rows, C64};

    #[test]
    fn zero_gives_identity() {
        let z = CMatrix::zeros(3, 3);
        assert_eq!(expm(&z).unwrap(), CMatrix::identity(3, 3));
    }

    #[test]
    fn diagonal_is_entrywise() {
        let d = from_real_rows(&[&[-3.0, 0.0], &[0.0, 7.5]]);
        let e = expm(&d).unwrap();
        assert!((e[(0, 0)].re / (-3.0f64).exp() - 1.0).abs() < 1e-14);
        assert!((e[(1, 1)].re / 7.5f64.exp() - 1.0).abs() < 1e-14);
        assert_eq!(e[(0, 1)], C64::new(0.0, 0.0));
    }

    #[test]
    fn rotation_generator() {
        let t = 2.3_f64;
        let g = from_real_rows(&[&[0.0, -t], &[t, 0.0]]);
        let e = expm(&g).unwrap();
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-14);
        assert!((e[(1, 0)].re - t.sin()).abs() < 1e-14);
    }

    #[test]
    fn overflow_reported() {
        let big = from_real_rows(&[&[1000.0]]);
        assert!(matches!(expm(&big), Err(Error::NonFinite(_))));
    }

    #[test]
    fn series_agrees_for_small_argument() {
        let a = from_real_rows(&[&[0.1, 0.2], &[-0.3, 0.05]]);
        let d = expm(&a).unwrap() - expm_series(&a, 30);
        assert!(linalg::max_abs(&d) < 1e-15);
    }
}
