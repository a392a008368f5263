//! The 2×2 family `F₀(x) = [[a(x), b], [b, a(x)]]` and its closed-form
//! exponential `exp(tF₀(x)) = e^{t a(x)} [[cosh tb, sinh tb], [sinh tb, cosh tb]]`.

use crate::linalg::{C64, CMatrix};
use crate::symbol::{MatrixSymbol, Provenance, ScalarSymbol};
use crate::{Error, Result};

/// `F₀` built from a real-valued `a` and a coupling `b ≥ 0`.
///
/// The abscissa bound `sup a + b` is recorded when `a` is known to be bounded
/// above; without it `exp(tF₀)` is not flagged bounded.
pub fn example_f0(a: &ScalarSymbol, b: f64) -> Result<MatrixSymbol> {
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::InvalidArgument(format!("b must be a nonnegative real, got {b}")));
    }
    let af = a.clone();
    let mut out = MatrixSymbol::new(a.dim(), 2, Provenance::Expression("example-f0".into()), move |x| {
        let v = C64::new(af.eval(x).re, 0.0);
        let bb = C64::new(b, 0.0);
        CMatrix::from_row_slice(2, 2, &[v, bb, bb, v])
    });
    if let Some(c) = a.re_upper() {
        out = out.with_abscissa(c + b).with_entry_re_upper(c.max(b));
    }
    if let Some(s) = a.sup_bound() {
        out = out.with_sup_norm(s + b);
    }
    Ok(out)
}

/// The constant factor `[[cosh tb, sinh tb], [sinh tb, cosh tb]]`.
pub fn hyperbolic_factor(b: f64, t: f64) -> CMatrix {
    let (ch, sh) = ((t * b).cosh(), (t * b).sinh());
    CMatrix::from_row_slice(2, 2, &[C64::new(ch, 0.0), C64::new(sh, 0.0), C64::new(sh, 0.0), C64::new(ch, 0.0)])
}

/// Closed form of `exp(tF₀)`.
pub fn exp_f0_closed_form(a: &ScalarSymbol, b: f64, t: f64) -> Result<MatrixSymbol> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be a positive real, got {t}")));
    }
    let factor = hyperbolic_factor(b, t);
    let af = a.clone();
    let f = factor.clone();
    let mut out = MatrixSymbol::new(a.dim(), 2, Provenance::Expression("exp-f0-closed-form".into()), move |x| {
        f.scale((t * af.eval(x).re).exp())
    });
    if let Some(c) = a.re_upper() {
        out = out.with_sup_norm((t * (c + b)).exp());
    }
    Ok(out)
}
