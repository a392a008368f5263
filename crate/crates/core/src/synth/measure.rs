//! Finite atomic measures and their Fourier transforms.

use std::f64::consts::PI;

use rand::Rng;

use crate::linalg::{self, C64, CMatrix};
use crate::psd;
use crate::symbol::{dot, MatrixSymbol, Provenance, ScalarSymbol};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Atom<W> {
    pub location: Vec<f64>,
    pub weight: W,
}

/// `Σ_j w_j δ_{ξ_j}` on `ℝⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure<W> {
    dim: usize,
    atoms: Vec<Atom<W>>,
}

pub type ScalarMeasure = AtomicMeasure<C64>;
pub type MatrixMeasure = AtomicMeasure<CMatrix>;

impl<W> AtomicMeasure<W> {
    pub fn new(dim: usize, atoms: Vec<Atom<W>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("measure dimension must be positive".into()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if a.location.len() != dim {
                return Err(Error::DimensionMismatch(format!("atom {i} has dimension {}", a.location.len())));
            }
            if a.location.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("location of atom {i}")));
            }
        }
        Ok(Self { dim, atoms })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, atoms: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom<W>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

impl ScalarMeasure {
    /// Builds a measure from real weights.
    pub fn from_real(dim: usize, atoms: impl IntoIterator<Item = (Vec<f64>, f64)>) -> Result<Self> {
        Self::new(
            dim,
            atoms
                .into_iter()
                .map(|(location, w)| Atom { location, weight: C64::new(w, 0.0) })
                .collect(),
        )
    }

    /// `|μ|(ℝⁿ) = Σ |w_j|`.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.norm()).sum()
    }

    pub fn total_mass(&self) -> C64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.check_nonnegative().is_ok()
    }

    fn check_nonnegative(&self) -> Result<()> {
        for (index, a) in self.atoms.iter().enumerate() {
            let w = a.weight;
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(Error::NonFinite(format!("weight of atom {index}")));
            }
            if w.re < 0.0 || w.im.abs() > 1e-14 * w.re.abs().max(1.0) {
                return Err(Error::NegativeWeight { index, weight: format!("{w}") });
            }
        }
        Ok(())
    }

    /// `c·μ`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom { location: a.location.clone(), weight: a.weight * c })
                .collect(),
        }
    }

    /// `μ^(x) = (2π)^{-n/2} Σ_j w_j e^{-i x·ξ_j}`.
    pub fn transform(&self, x: &[f64]) -> C64 {
        let norm = (2.0 * PI).powf(-(self.dim as f64) / 2.0);
        self.atoms
            .iter()
            .map(|a| a.weight * C64::from_polar(1.0, -dot(x, &a.location)))
            .sum::<C64>()
            * norm
    }

    /// Random nonnegative measure with `count` atoms uniform in
    /// `[-spread, spread]ⁿ` and weights uniform in `(0, 1]`. With `lattice`
    /// set, locations are snapped to multiples of that spacing.
    pub fn random_nonnegative<R: Rng>(
        rng: &mut R,
        dim: usize,
        count: usize,
        spread: f64,
        lattice: Option<f64>,
    ) -> Self {
        let atoms = (0..count)
            .map(|_| {
                let location = (0..dim)
                    .map(|_| {
                        let v = rng.random_range(-spread..=spread);
                        lattice.map_or(v, |h| (v / h).round() * h)
                    })
                    .collect();
                let w = 1.0 - rng.random::<f64>();
                Atom { location, weight: C64::new(w, 0.0) }
            })
            .collect();
        Self { dim, atoms }
    }
}

impl MatrixMeasure {
    /// Size `m` of the matrix weights (0 when empty).
    pub fn weight_size(&self) -> usize {
        self.atoms.first().map_or(0, |a| a.weight.nrows())
    }

    /// `μ^(x) = (2π)^{-n/2} Σ_j e^{-i x·ξ_j} W_j`.
    pub fn transform(&self, x: &[f64]) -> CMatrix {
        let m = self.weight_size();
        let norm = (2.0 * PI).powf(-(self.dim as f64) / 2.0);
        let mut out = CMatrix::zeros(m, m);
        for a in &self.atoms {
            out += &a.weight * (C64::from_polar(1.0, -dot(x, &a.location)) * norm);
        }
        out
    }

    /// Random measure with PSD weights `W = C C*`, `C` an `m×r` complex
    /// Gaussian matrix with random rank `r ∈ 1..=m`.
    pub fn random_psd<R: Rng>(rng: &mut R, dim: usize, m: usize, count: usize, spread: f64) -> Self {
        let atoms = (0..count)
            .map(|_| {
                let location = (0..dim).map(|_| rng.random_range(-spread..=spread)).collect();
                Atom { location, weight: random_psd_matrix(rng, m) }
            })
            .collect();
        Self { dim, atoms }
    }
}

/// `C C*` with `C` an `m×r` matrix of standard complex Gaussians, `r` uniform
/// in `1..=m`, so singular PSD matrices are included.
pub fn random_psd_matrix<R: Rng>(rng: &mut R, m: usize) -> CMatrix {
    use rand_distr::StandardNormal;
    let rank = rng.random_range(1..=m);
    let c = CMatrix::from_fn(m, rank, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    &c * c.adjoint()
}

/// Bochner transform of a nonnegative atomic measure. The result is positive
/// semidefinite and bounded by its value at the origin.
pub fn bochner_scalar(mu: &ScalarMeasure) -> Result<ScalarSymbol> {
    mu.check_nonnegative()?;
    let mass = mu.total_mass().re;
    let norm = (2.0 * PI).powf(-(mu.dim as f64) / 2.0);
    let m = mu.clone();
    Ok(ScalarSymbol::new(mu.dim, Provenance::Bochner, move |x| m.transform(x)).with_sup_bound(norm * mass))
}

/// Bochner transform of an atomic measure with PSD matrix weights.
pub fn bochner_matrix(mu: &MatrixMeasure) -> Result<MatrixSymbol> {
    let m = mu.weight_size();
    for (index, a) in mu.atoms.iter().enumerate() {
        if a.weight.shape() != (m, m) {
            return Err(Error::DimensionMismatch(format!("weight {index} is {:?}, expected ({m}, {m})", a.weight.shape())));
        }
        let v = psd::is_psd(&a.weight, 1e-12)?;
        if !v.passed {
            return Err(Error::NonPsdWeight { index, min_eig: v.min_eigenvalue });
        }
    }
    if m == 0 {
        return Err(Error::InvalidArgument("matrix measure needs at least one atom".into()));
    }
    let at_origin = mu.transform(&vec![0.0; mu.dim]);
    let sup = linalg::operator_norm(&at_origin);
    let measure = mu.clone();
    Ok(MatrixSymbol::new(mu.dim, m, Provenance::Bochner, move |x| measure.transform(x)).with_sup_norm(sup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psd::{test_psd_function, test_psd_matrix_function, SamplingPlan};
    use crate::rng::substream;

    #[test]
    fn point_mass_at_origin_is_constant() {
        let mu = ScalarMeasure::from_real(1, [(vec![0.0], 1.0)]).unwrap();
        let f = bochner_scalar(&mu).unwrap();
        let c = (2.0 * PI).powf(-0.5);
        for x in [-3.0, 0.0, 1.7] {
            assert!((f.eval(&[x]) - C64::new(c, 0.0)).norm() < 1e-15);
        }
        assert!((f.sup_bound().unwrap() - c).abs() < 1e-15);
    }

    #[test]
    fn two_atoms_give_cosine() {
        let mu = ScalarMeasure::from_real(1, [(vec![1.0], 0.5), (vec![-1.0], 0.5)]).unwrap();
        let f = bochner_scalar(&mu).unwrap();
        let c = (2.0 * PI).powf(-0.5);
        for x in [-2.0, 0.3, 4.0_f64] {
            let v = f.eval(&[x]);
            assert!((v.re - c * x.cos()).abs() < 1e-15 && v.im.abs() < 1e-15);
        }
        assert_eq!(mu.total_variation(), 1.0);
    }

    #[test]
    fn negative_weight_rejected() {
        let mu = ScalarMeasure::from_real(1, [(vec![0.0], 1.0), (vec![1.0], -0.1)]).unwrap();
        assert!(matches!(bochner_scalar(&mu), Err(Error::NegativeWeight { index: 1, .. })));
    }

    #[test]
    fn random_nonnegative_measures_are_psd() {
        for s in 0..5 {
            let mut r = substream(42, s);
            let mu = ScalarMeasure::random_nonnegative(&mut r, 1 + (s as usize % 2), 4, 3.0, None);
            let f = bochner_scalar(&mu).unwrap();
            let v = test_psd_function(&f, &SamplingPlan::default().with_seed(s)).unwrap();
            assert!(v.verdict.passed, "{v:?}");
        }
    }

    #[test]
    fn matrix_measure_checks() {
        let mut r = substream(5, 0);
        let mu = MatrixMeasure::random_psd(&mut r, 2, 2, 2, 2.0);
        let f = bochner_matrix(&mu).unwrap();
        let v = test_psd_matrix_function(&f, &SamplingPlan::default()).unwrap();
        assert!(v.verdict.passed, "{v:?}");
        assert!(v.max_bound_excess.unwrap() <= 1e-12);

        let w = linalg::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let single = MatrixMeasure::new(1, vec![Atom { location: vec![0.0], weight: w.clone() }]).unwrap();
        let f = bochner_matrix(&single).unwrap();
        let expect = w.scale((2.0 * PI).powf(-0.5));
        assert!((f.eval(&[3.0]).map(|z| z.re) - expect.map(|z| z.re)).abs().max() < 1e-15);

        let bad = linalg::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let mu = MatrixMeasure::new(1, vec![Atom { location: vec![0.0], weight: bad }]).unwrap();
        assert!(matches!(bochner_matrix(&mu), Err(Error::NonPsdWeight { index: 0, .. })));
    }

    #[test]
    fn lattice_snapping() {
        let mut r = substream(1, 1);
        let mu = ScalarMeasure::random_nonnegative(&mut r, 1, 10, 5.0, Some(0.25));
        for a in mu.atoms() {
            let k = a.location[0] / 0.25;
            assert_eq!(k, k.round());
        }
    }
}
