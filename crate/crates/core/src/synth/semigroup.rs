//! Hadamard (entrywise) and genuine matrix exponentials of matrix symbols.

use crate::linalg::{C64, CMatrix};
use crate::symbol::{MatrixSymbol, Provenance};
use crate::synth::expm::expm;
use crate::{Error, Result};

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("t must be a positive real, got {t}")))
    }
}

/// `x ↦ exp_H(t F(x))`, the entrywise exponential. Bounded when
/// `Re F_{jk} ≤ c` is known for all entries.
pub fn hadamard_exp(f: &MatrixSymbol, t: f64) -> Result<MatrixSymbol> {
    check_t(t)?;
    let g = f.clone();
    let m = f.size();
    let mut out = MatrixSymbol::new(f.dim(), m, Provenance::Expression(format!("exp_H({t}·F)")), move |x| {
        g.eval(x).map(|z| (z * t).exp())
    });
    if let Some(c) = f.entry_re_upper() {
        // Frobenius bound on the operator norm.
        out = out.with_sup_norm(m as f64 * (t * c).exp()).with_entry_re_upper((t * c).exp());
    } else if let Some(s) = f.sup_norm() {
        out = out.with_sup_norm(m as f64 * (t * s).exp()).with_entry_re_upper((t * s).exp());
    }
    Ok(out)
}

/// `x ↦ exp(t F(x))`, the pointwise matrix exponential. Points where the
/// exponential overflows evaluate to NaN and are reported as non-finite by
/// the consumers.
pub fn matrix_exp(f: &MatrixSymbol, t: f64) -> Result<MatrixSymbol> {
    check_t(t)?;
    let g = f.clone();
    let m = f.size();
    let mut out = MatrixSymbol::new(f.dim(), m, Provenance::Expression(format!("exp({t}·F)")), move |x| {
        expm(&g.eval(x).scale(t)).unwrap_or_else(|_| CMatrix::from_element(m, m, C64::new(f64::NAN, f64::NAN)))
    });
    if let Some(c) = f.abscissa() {
        out = out.with_sup_norm((t * c).exp());
    } else if let Some(s) = f.sup_norm() {
        out = out.with_sup_norm((t * s).exp());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real_rows;
    use crate::symbol::ScalarSymbol;

    #[test]
    fn hadamard_exp_of_constant() {
        let ln2 = 2f64.ln();
        let s = MatrixSymbol::constant(from_real_rows(&[&[0.0, ln2], &[ln2, 0.0]]), 1);
        let e = hadamard_exp(&s, 1.0).unwrap().eval(&[0.3]);
        let want = from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(crate::linalg::max_abs(&(e - want)) < 1e-15);
        assert!(hadamard_exp(&s, 0.0).is_err());
    }

    #[test]
    fn hadamard_exp_tends_to_ones() {
        let f = MatrixSymbol::diagonal(vec![ScalarSymbol::quadratic(1, -1.0), ScalarSymbol::quadratic(1, -1.0)]);
        let e = hadamard_exp(&f, 1e-9).unwrap().eval(&[2.0]);
        assert!(e.iter().all(|z| (z - C64::new(1.0, 0.0)).norm() < 1e-8));
    }

    #[test]
    fn matrix_exp_diagonal_and_zero() {
        let f = MatrixSymbol::diagonal(vec![ScalarSymbol::quadratic(1, -1.0), ScalarSymbol::quadratic(1, -1.0)]);
        let e = matrix_exp(&f, 0.5).unwrap();
        assert_eq!(e.sup_norm(), Some(1.0));
        let v = e.eval(&[2.0]);
        assert!((v[(0, 0)].re - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(v[(0, 1)], C64::new(0.0, 0.0));
        let z = MatrixSymbol::constant(CMatrix::zeros(2, 2), 1);
        assert_eq!(matrix_exp(&z, 3.0).unwrap().eval(&[1.0]), CMatrix::identity(2, 2));
    }
}
