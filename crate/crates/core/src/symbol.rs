//! Evaluatable scalar- and matrix-valued functions on `ℝⁿ`.
//!
//! Symbols carry a little metadata next to the closure: where they came from,
//! and whatever upper bounds are known by construction. The multiplier engine
//! refuses symbols without a sup bound.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::linalg::{C64, CMatrix};

type ScalarFn = dyn Fn(&[f64]) -> C64 + Send + Sync;
type MatrixFn = dyn Fn(&[f64]) -> CMatrix + Send + Sync;

/// How a symbol was constructed.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "detail")]
pub enum Provenance {
    Builtin(String),
    Bochner,
    LevyKhintchine,
    Expression(String),
}

#[derive(Clone)]
pub struct ScalarSymbol {
    dim: usize,
    eval: Arc<ScalarFn>,
    provenance: Provenance,
    sup_abs: Option<f64>,
    re_upper: Option<f64>,
}

impl fmt::Debug for ScalarSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarSymbol")
            .field("dim", &self.dim)
            .field("provenance", &self.provenance)
            .field("sup_abs", &self.sup_abs)
            .field("re_upper", &self.re_upper)
            .finish()
    }
}

impl ScalarSymbol {
    pub fn new<F>(dim: usize, provenance: Provenance, f: F) -> Self
    where
        F: Fn(&[f64]) -> C64 + Send + Sync + 'static,
    {
        Self { dim, eval: Arc::new(f), provenance, sup_abs: None, re_upper: None }
    }

    /// Declares `sup |F| ≤ bound`. Also implies `Re F ≤ bound`.
    pub fn with_sup_bound(mut self, bound: f64) -> Self {
        self.sup_abs = Some(bound);
        self.re_upper = Some(self.re_upper.map_or(bound, |c| c.min(bound)));
        self
    }

    /// Declares `Re F ≤ c`.
    pub fn with_re_upper(mut self, c: f64) -> Self {
        self.re_upper = Some(c);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn sup_bound(&self) -> Option<f64> {
        self.sup_abs
    }

    pub fn re_upper(&self) -> Option<f64> {
        self.re_upper
    }

    pub fn is_bounded(&self) -> bool {
        self.sup_abs.is_some()
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> C64 {
        debug_assert_eq!(x.len(), self.dim);
        (self.eval)(x)
    }

    /// Pointwise product. Bounds multiply when both are known.
    pub fn product(&self, other: &ScalarSymbol) -> ScalarSymbol {
        assert_eq!(self.dim, other.dim, "symbol dimensions differ");
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let mut out = ScalarSymbol::new(
            self.dim,
            Provenance::Expression("product".into()),
            move |x| a(x) * b(x),
        );
        if let (Some(s), Some(t)) = (self.sup_abs, other.sup_abs) {
            out = out.with_sup_bound(s * t);
        }
        out
    }

    /// `c·F`.
    pub fn scaled(&self, c: C64) -> ScalarSymbol {
        let a = self.eval.clone();
        let mut out =
            ScalarSymbol::new(self.dim, Provenance::Expression("scaled".into()), move |x| c * a(x));
        if let Some(s) = self.sup_abs {
            out = out.with_sup_bound(s * c.norm());
        }
        out
    }

    /// `F + c` for real `c`.
    pub fn shifted(&self, c: f64) -> ScalarSymbol {
        let a = self.eval.clone();
        let mut out = ScalarSymbol::new(self.dim, Provenance::Expression("shifted".into()), move |x| {
            a(x) + C64::new(c, 0.0)
        });
        if let Some(s) = self.sup_abs {
            out = out.with_sup_bound(s + c.abs());
        } else if let Some(r) = self.re_upper {
            out = out.with_re_upper(r + c);
        }
        out
    }

    /// `x ↦ exp(t F(x))`; bounded by `e^{t c}` when `Re F ≤ c` is known.
    pub fn exp_scaled(&self, t: f64) -> ScalarSymbol {
        let a = self.eval.clone();
        let mut out = ScalarSymbol::new(self.dim, Provenance::Expression(format!("exp({t}·F)")), move |x| {
            (a(x) * t).exp()
        });
        if let Some(c) = self.re_upper {
            out = out.with_sup_bound((t * c).exp());
        }
        out
    }

    /// `x ↦ conj F(-x)`, used by the symmetry prechecks.
    pub fn reflected_conj(&self, x: &[f64]) -> C64 {
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        self.eval(&neg).conj()
    }

    // Builtin families.

    /// `exp(-|x|² / (2 w²))`.
    pub fn gaussian(dim: usize, width: f64) -> ScalarSymbol {
        let k = 0.5 / (width * width);
        ScalarSymbol::new(dim, Provenance::Builtin("gaussian".into()), move |x| {
            C64::new((-k * norm_sq(x)).exp(), 0.0)
        })
        .with_sup_bound(1.0)
    }

    /// `cos(v·x)`.
    pub fn cosine(freq: Vec<f64>) -> ScalarSymbol {
        let dim = freq.len();
        ScalarSymbol::new(dim, Provenance::Builtin("cos".into()), move |x| {
            C64::new(dot(&freq, x).cos(), 0.0)
        })
        .with_sup_bound(1.0)
    }

    /// `sin(v·x)`.
    pub fn sine(freq: Vec<f64>) -> ScalarSymbol {
        let dim = freq.len();
        ScalarSymbol::new(dim, Provenance::Builtin("sin".into()), move |x| {
            C64::new(dot(&freq, x).sin(), 0.0)
        })
        .with_sup_bound(1.0)
    }

    /// `coef·|x|²`.
    pub fn quadratic(dim: usize, coef: f64) -> ScalarSymbol {
        let out = ScalarSymbol::new(dim, Provenance::Builtin("quadratic".into()), move |x| {
            C64::new(coef * norm_sq(x), 0.0)
        });
        if coef <= 0.0 {
            out.with_re_upper(0.0)
        } else {
            out
        }
    }

    /// `i v·x`.
    pub fn drift(v: Vec<f64>) -> ScalarSymbol {
        let dim = v.len();
        ScalarSymbol::new(dim, Provenance::Builtin("drift".into()), move |x| C64::new(0.0, dot(&v, x)))
            .with_re_upper(0.0)
    }

    pub fn constant(dim: usize, value: C64) -> ScalarSymbol {
        ScalarSymbol::new(dim, Provenance::Builtin("constant".into()), move |_| value)
            .with_sup_bound(value.norm())
    }

    /// Radial smooth bump equal to 1 on `|x| ≤ plateau·radius`, vanishing for
    /// `|x| ≥ radius`. Compactly supported, hence not a Bochner transform unless
    /// its inverse transform happens to be nonnegative.
    pub fn bump(dim: usize, radius: f64, plateau: f64) -> ScalarSymbol {
        ScalarSymbol::new(dim, Provenance::Builtin("bump".into()), move |x| {
            let r = norm_sq(x).sqrt() / radius;
            C64::new(crate::synth::mollifier::radial_profile(r, plateau), 0.0)
        })
        .with_sup_bound(1.0)
    }
}

/// Matrix-valued symbol `ℝⁿ → ℂ^{m×m}`.
#[derive(Clone)]
pub struct MatrixSymbol {
    dim: usize,
    size: usize,
    eval: Arc<MatrixFn>,
    provenance: Provenance,
    sup_norm: Option<f64>,
    abscissa: Option<f64>,
    entry_re_upper: Option<f64>,
}

impl fmt::Debug for MatrixSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixSymbol")
            .field("dim", &self.dim)
            .field("size", &self.size)
            .field("provenance", &self.provenance)
            .field("sup_norm", &self.sup_norm)
            .field("abscissa", &self.abscissa)
            .finish()
    }
}

impl MatrixSymbol {
    pub fn new<F>(dim: usize, size: usize, provenance: Provenance, f: F) -> Self
    where
        F: Fn(&[f64]) -> CMatrix + Send + Sync + 'static,
    {
        Self {
            dim,
            size,
            eval: Arc::new(f),
            provenance,
            sup_norm: None,
            abscissa: None,
            entry_re_upper: None,
        }
    }

    /// Declares `sup ‖F(x)‖ ≤ bound` (operator norm). This is the "bounded"
    /// flag required by the multiplier engine.
    pub fn with_sup_norm(mut self, bound: f64) -> Self {
        self.sup_norm = Some(bound);
        self
    }

    /// Declares an upper bound on the largest eigenvalue of `(F + F*)/2`, which
    /// bounds `‖exp(tF(x))‖ ≤ e^{t c}`.
    pub fn with_abscissa(mut self, c: f64) -> Self {
        self.abscissa = Some(c);
        self
    }

    /// Declares `Re F_{jk} ≤ c` for every entry.
    pub fn with_entry_re_upper(mut self, c: f64) -> Self {
        self.entry_re_upper = Some(c);
        self
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = p;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn sup_norm(&self) -> Option<f64> {
        self.sup_norm
    }

    pub fn abscissa(&self) -> Option<f64> {
        self.abscissa
    }

    pub fn entry_re_upper(&self) -> Option<f64> {
        self.entry_re_upper
    }

    pub fn is_bounded(&self) -> bool {
        self.sup_norm.is_some()
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> CMatrix {
        debug_assert_eq!(x.len(), self.dim);
        (self.eval)(x)
    }

    /// Builds an `m×m` symbol from its scalar entries (row-major).
    pub fn from_entries(entries: Vec<Vec<ScalarSymbol>>) -> MatrixSymbol {
        let m = entries.len();
        assert!(m > 0 && entries.iter().all(|r| r.len() == m), "entries must be square");
        let dim = entries[0][0].dim();
        assert!(entries.iter().flatten().all(|e| e.dim() == dim), "entry dimensions differ");
        let frob = entries
            .iter()
            .flatten()
            .map(|e| e.sup_bound().map(|s| s * s))
            .sum::<Option<f64>>()
            .map(f64::sqrt);
        let re_up = entries
            .iter()
            .flatten()
            .map(|e| e.re_upper())
            .try_fold(f64::NEG_INFINITY, |acc, r| r.map(|r| acc.max(r)));
        let cells = entries.clone();
        let mut out = MatrixSymbol::new(dim, m, Provenance::Expression("entrywise".into()), move |x| {
            CMatrix::from_fn(m, m, |j, k| cells[j][k].eval(x))
        });
        out.sup_norm = frob;
        out.entry_re_upper = re_up;
        let off_diag_zero = entries.iter().enumerate().all(|(j, row)| {
            row.iter().enumerate().all(|(k, e)| {
                j == k || matches!(e.provenance(), Provenance::Builtin(s) if s == "zero")
            })
        });
        if off_diag_zero {
            out.abscissa = (0..m)
                .map(|j| entries[j][j].re_upper())
                .try_fold(f64::NEG_INFINITY, |acc, r| r.map(|r| acc.max(r)));
        }
        out
    }

    /// Diagonal symbol with the given diagonal entries.
    pub fn diagonal(diag: Vec<ScalarSymbol>) -> MatrixSymbol {
        let m = diag.len();
        let dim = diag[0].dim();
        let entries = (0..m)
            .map(|j| (0..m).map(|k| if j == k { diag[j].clone() } else { ScalarSymbol::zero(dim) }).collect())
            .collect();
        let mut out = MatrixSymbol::from_entries(entries);
        out.sup_norm = diag
            .iter()
            .map(|e| e.sup_bound())
            .try_fold(0.0_f64, |acc, s| s.map(|s| acc.max(s)));
        out.provenance = Provenance::Expression("diagonal".into());
        out
    }

    pub fn constant(value: CMatrix, dim: usize) -> MatrixSymbol {
        let norm = crate::linalg::operator_norm(&value);
        let herm = crate::linalg::hermitian_part(&value);
        let (vals, _) = crate::linalg::hermitian_eigen(&herm);
        let size = value.nrows();
        MatrixSymbol::new(dim, size, Provenance::Builtin("constant".into()), move |_| value.clone())
            .with_sup_norm(norm)
            .with_abscissa(vals.last().copied().unwrap_or(0.0))
    }

    pub fn from_scalar(s: ScalarSymbol) -> MatrixSymbol {
        let mut out = MatrixSymbol::from_entries(vec![vec![s.clone()]]);
        out.provenance = s.provenance().clone();
        out.abscissa = s.re_upper();
        out
    }

    /// Scalar view of entry `(j, k)`.
    pub fn entry(&self, j: usize, k: usize) -> ScalarSymbol {
        assert!(j < self.size && k < self.size, "entry index out of range");
        let f = self.eval.clone();
        let mut out = ScalarSymbol::new(self.dim, Provenance::Expression(format!("entry({j},{k})")), move |x| {
            f(x)[(j, k)]
        });
        if let Some(s) = self.sup_norm {
            out = out.with_sup_bound(s);
        } else if let Some(c) = self.entry_re_upper {
            out = out.with_re_upper(c);
        }
        out
    }
}

impl ScalarSymbol {
    /// Identically zero; recognised by [`MatrixSymbol::from_entries`] when
    /// deciding whether a symbol is diagonal.
    pub fn zero(dim: usize) -> ScalarSymbol {
        ScalarSymbol::new(dim, Provenance::Builtin("zero".into()), |_| C64::new(0.0, 0.0)).with_sup_bound(0.0)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_evaluate() {
        let g = ScalarSymbol::gaussian(1, 1.0);
        assert!((g.eval(&[1.0]).re - (-0.5f64).exp()).abs() < 1e-15);
        let q = ScalarSymbol::quadratic(2, -1.0);
        assert_eq!(q.eval(&[1.0, 2.0]).re, -5.0);
        assert_eq!(q.re_upper(), Some(0.0));
        let d = ScalarSymbol::drift(vec![2.0]);
        assert_eq!(d.eval(&[3.0]), C64::new(0.0, 6.0));
        let s = ScalarSymbol::sine(vec![1.0]);
        assert!((s.reflected_conj(&[0.5]).re + 0.5f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn bump_is_compactly_supported() {
        let b = ScalarSymbol::bump(1, 2.0, 0.5);
        assert_eq!(b.eval(&[0.0]).re, 1.0);
        assert_eq!(b.eval(&[0.99]).re, 1.0);
        assert_eq!(b.eval(&[2.0]).re, 0.0);
        let mid = b.eval(&[1.5]).re;
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn diagonal_detection_and_bounds() {
        let d = MatrixSymbol::diagonal(vec![ScalarSymbol::quadratic(1, -1.0), ScalarSymbol::quadratic(1, -2.0)]);
        assert_eq!(d.abscissa(), Some(0.0));
        assert!(!d.is_bounded());
        let v = d.eval(&[1.0]);
        assert_eq!(v[(1, 1)].re, -2.0);
        assert_eq!(v[(0, 1)].re, 0.0);
        let e = MatrixSymbol::from_entries(vec![
            vec![ScalarSymbol::gaussian(1, 1.0), ScalarSymbol::gaussian(1, 1.0)],
            vec![ScalarSymbol::gaussian(1, 1.0), ScalarSymbol::gaussian(1, 1.0)],
        ]);
        assert_eq!(e.sup_norm(), Some(2.0));
        assert_eq!(e.abscissa(), None);
    }
}
