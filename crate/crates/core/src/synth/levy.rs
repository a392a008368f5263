//! Lévy–Khintchine functions: the conditionally positive semidefinite
//! functions that are bounded above in real part.
//!
//! ```text
//! F(x) = α + i(β, x) − (x, A x)
//!        + Σ_j w_j [e^{i(x, y_j)} − 1 − i(x, y_j)/(1 + |y_j|²)] (1 + |y_j|²)/|y_j|²
//! ```
//!
//! with `α ∈ ℝ`, `β ∈ ℝⁿ`, `A ≥ 0` and a nonnegative atomic Lévy measure
//! `ν = Σ w_j δ_{y_j}` without an atom at the origin.

use rand::Rng;

use crate::linalg::{self, C64, CMatrix};
use crate::psd;
use crate::symbol::{dot, norm_sq, MatrixSymbol, Provenance, ScalarSymbol};
use crate::synth::measure::{random_psd_matrix, ScalarMeasure};
use crate::{Error, Result};

/// Atoms closer than this to the origin are rejected.
const ORIGIN_EPS: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct LkParams {
    pub alpha: f64,
    pub beta: Vec<f64>,
    pub a: CMatrix,
    pub nu: ScalarMeasure,
}

impl LkParams {
    /// All parameters zero: `F ≡ 0`.
    pub fn zero(dim: usize) -> Self {
        Self { alpha: 0.0, beta: vec![0.0; dim], a: CMatrix::zeros(dim, dim), nu: ScalarMeasure::empty(dim) }
    }

    /// `F(x) = −coef·|x|²`, i.e. `A = coef·I`.
    pub fn quadratic(dim: usize, coef: f64) -> Self {
        Self { a: CMatrix::identity(dim, dim).scale(coef), ..Self::zero(dim) }
    }

    pub fn dim(&self) -> usize {
        self.beta.len()
    }

    pub fn is_zero(&self) -> bool {
        self.alpha == 0.0
            && self.beta.iter().all(|&b| b == 0.0)
            && self.a.iter().all(|z| z.norm() == 0.0)
            && self.nu.atoms().iter().all(|a| a.weight.norm() == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if n == 0 {
            return Err(Error::InvalidLkParams("dimension must be positive".into()));
        }
        if self.a.shape() != (n, n) || self.nu.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "A is {:?} and ν lives in ℝ^{}, expected dimension {n}",
                self.a.shape(),
                self.nu.dim()
            )));
        }
        if !self.alpha.is_finite() || self.beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite("α or β".into()));
        }
        let v = psd::is_psd(&self.a, 1e-12)?;
        if !v.passed {
            return Err(Error::InvalidLkParams(format!(
                "A must be Hermitian positive semidefinite (min eigenvalue {:e})",
                v.min_eigenvalue
            )));
        }
        if !self.nu.is_nonnegative() {
            return Err(Error::InvalidLkParams("Lévy measure must be nonnegative".into()));
        }
        if let Some(i) = self.nu.atoms().iter().position(|a| norm_sq(&a.location).sqrt() <= ORIGIN_EPS) {
            return Err(Error::AtomAtOrigin(i));
        }
        Ok(())
    }

    /// Random valid parameters: `α ∈ [-1, 1]`, `β ∈ [-1, 1]ⁿ`,
    /// `A = a_min·I + C C*` scaled into `[a_min, a_min + 1]`, and 1–3 Lévy
    /// atoms in `[-2, 2]ⁿ` away from the origin.
    pub fn random<R: Rng>(rng: &mut R, dim: usize, a_min: f64) -> Self {
        let alpha = rng.random_range(-1.0..=1.0);
        let beta = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let c = random_psd_matrix(rng, dim);
        let cn = linalg::operator_norm(&c).max(1e-300);
        let a = c.scale(rng.random_range(0.0..=1.0) / cn) + CMatrix::identity(dim, dim).scale(a_min);
        let count = rng.random_range(1..=3);
        let atoms = (0..count)
            .map(|_| {
                let mut y: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..=2.0)).collect();
                if norm_sq(&y) < 0.01 {
                    y[0] += 0.5;
                }
                (y, rng.random_range(0.05..=1.0))
            })
            .collect::<Vec<_>>();
        let nu = ScalarMeasure::from_real(dim, atoms).expect("finite atoms");
        Self { alpha, beta, a, nu }
    }

    /// Direct evaluation of the Lévy–Khintchine formula at `x`.
    pub fn eval(&self, x: &[f64]) -> C64 {
        let n = x.len();
        let mut quad = C64::new(0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                quad += self.a[(j, k)] * x[j] * x[k];
            }
        }
        let mut jump = C64::new(0.0, 0.0);
        for atom in self.nu.atoms() {
            let y = &atom.location;
            let xy = dot(x, y);
            let y2 = norm_sq(y);
            let integrand = C64::from_polar(1.0, xy) - 1.0 - C64::new(0.0, xy / (1.0 + y2));
            jump += atom.weight * integrand * ((1.0 + y2) / y2);
        }
        C64::new(self.alpha, dot(&self.beta, x)) - quad + jump
    }
}

/// The Lévy–Khintchine function of `p`. Conditionally positive semidefinite
/// by construction, with `Re F ≤ α`.
pub fn levy_khintchine(p: &LkParams) -> Result<ScalarSymbol> {
    p.validate()?;
    if p.is_zero() {
        return Ok(ScalarSymbol::zero(p.dim()));
    }
    let params = p.clone();
    Ok(ScalarSymbol::new(p.dim(), Provenance::LevyKhintchine, move |x| params.eval(x)).with_re_upper(p.alpha))
}

/// Entrywise Lévy–Khintchine matrix symbol, `F_{jk} = levy_khintchine(p_{jk})`.
pub fn lk_matrix(entries: &[Vec<LkParams>]) -> Result<MatrixSymbol> {
    let m = entries.len();
    if m == 0 || entries.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch("Lévy–Khintchine entries must form a square array".into()));
    }
    let dim = entries[0][0].dim();
    let cells = entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| {
                    if p.dim() != dim {
                        return Err(Error::DimensionMismatch("entries have different dimensions".into()));
                    }
                    levy_khintchine(p)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixSymbol::from_entries(cells).with_provenance(Provenance::LevyKhintchine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psd::{test_cpsd_function, SamplingPlan};
    use crate::rng::substream;

    #[test]
    fn quadratic_only() {
        let f = levy_khintchine(&LkParams::quadratic(1, 1.0)).unwrap();
        for x in [-2.0, 0.5, 3.0_f64] {
            assert_eq!(f.eval(&[x]), C64::new(-x * x, 0.0));
        }
        assert_eq!(f.re_upper(), Some(0.0));
    }

    #[test]
    fn drift_only() {
        let p = LkParams { beta: vec![2.0, -1.0], ..LkParams::zero(2) };
        let f = levy_khintchine(&p).unwrap();
        assert_eq!(f.eval(&[1.0, 3.0]), C64::new(0.0, -1.0));
    }

    #[test]
    fn single_atom_matches_formula_and_is_cpsd() {
        let (w, y0) = (0.7, 1.3_f64);
        let p = LkParams { nu: ScalarMeasure::from_real(1, [(vec![y0], w)]).unwrap(), ..LkParams::zero(1) };
        let f = levy_khintchine(&p).unwrap();
        for x in [-1.0, 0.25, 2.0_f64] {
            let expect = (C64::from_polar(1.0, x * y0) - 1.0 - C64::new(0.0, x * y0 / (1.0 + y0 * y0)))
                * (w * (1.0 + y0 * y0) / (y0 * y0));
            assert!((f.eval(&[x]) - expect).norm() < 1e-14);
        }
        assert!(test_cpsd_function(&f, &SamplingPlan::default()).unwrap().verdict.passed);
    }

    #[test]
    fn atom_at_origin_rejected() {
        let p = LkParams { nu: ScalarMeasure::from_real(1, [(vec![0.0], 1.0)]).unwrap(), ..LkParams::zero(1) };
        assert!(matches!(levy_khintchine(&p), Err(Error::AtomAtOrigin(0))));
    }

    #[test]
    fn non_psd_a_rejected() {
        let p = LkParams { a: CMatrix::identity(1, 1).scale(-1.0), ..LkParams::zero(1) };
        assert!(matches!(levy_khintchine(&p), Err(Error::InvalidLkParams(_))));
    }

    #[test]
    fn random_params_valid_and_cpsd() {
        for s in 0..4 {
            let p = LkParams::random(&mut substream(9, s), 1 + s as usize % 2, 0.1);
            p.validate().unwrap();
            let f = levy_khintchine(&p).unwrap();
            assert!(test_cpsd_function(&f, &SamplingPlan::default().with_seed(s)).unwrap().verdict.passed);
        }
    }

    #[test]
    fn lk_matrix_shapes() {
        let p = LkParams::quadratic(1, 1.0);
        let same = lk_matrix(&[vec![p.clone(), p.clone()], vec![p.clone(), p.clone()]]).unwrap();
        let v = same.eval(&[2.0]);
        assert!(v.iter().all(|z| *z == C64::new(-4.0, 0.0)));
        let z = LkParams::zero(1);
        let diag = lk_matrix(&[vec![p.clone(), z.clone()], vec![z, LkParams::quadratic(1, 2.0)]]).unwrap();
        assert_eq!(diag.abscissa(), Some(0.0));
        let v = diag.eval(&[1.0]);
        assert_eq!(v[(0, 1)], C64::new(0.0, 0.0));
        assert_eq!(v[(1, 1)], C64::new(-2.0, 0.0));
        for j in 0..2 {
            assert!(test_cpsd_function(&diag.entry(j, j), &SamplingPlan::default()).unwrap().verdict.passed);
        }
    }
}
