use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::linalg::C64;
use crate::{Error, Result};

/// Uniform periodic grid on `[-L/2, L/2)ⁿ` with `N` samples per axis.
///
/// Sample `j` on an axis sits at `x_j = -L/2 + j·L/N`; its dual frequency
/// grid is `ξ_k = 2πk/L`, `k = -N/2, …, N/2 - 1`, stored in FFT order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct GridSpec {
    dim: usize,
    samples: usize,
    length: f64,
}

#[derive(Deserialize)]
struct RawGrid {
    dim: usize,
    samples: usize,
    length: f64,
}

impl TryFrom<RawGrid> for GridSpec {
    type Error = Error;

    fn try_from(r: RawGrid) -> Result<Self> {
        GridSpec::new(r.dim, r.samples, r.length)
    }
}

impl GridSpec {
    pub fn new(dim: usize, samples: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if samples < 8 || !samples.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("samples per axis must be a power of two ≥ 8, got {samples}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("box length must be positive, got {length}")));
        }
        Ok(Self { dim, samples, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// `h = L/N`.
    pub fn spacing(&self) -> f64 {
        self.length / self.samples as f64
    }

    /// `Δξ = 2π/L`.
    pub fn freq_spacing(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Total number of grid points `Nⁿ`.
    pub fn len(&self) -> usize {
        self.samples.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major multi-index of flat index `i` (axis 0 slowest).
    pub fn multi_index(&self, mut i: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for d in (0..self.dim).rev() {
            idx[d] = i % self.samples;
            i /= self.samples;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &k| acc * self.samples + k)
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        let h = self.spacing();
        self.multi_index(i).into_iter().map(|j| -0.5 * self.length + j as f64 * h).collect()
    }

    /// Signed frequency index of FFT slot `k`.
    pub fn signed_freq(&self, k: usize) -> isize {
        if k < self.samples / 2 {
            k as isize
        } else {
            k as isize - self.samples as isize
        }
    }

    pub fn frequency(&self, i: usize) -> Vec<f64> {
        let dxi = self.freq_spacing();
        self.multi_index(i).into_iter().map(|k| self.signed_freq(k) as f64 * dxi).collect()
    }

    /// Flat index of the grid point at the origin.
    pub fn origin_index(&self) -> usize {
        self.flat_index(&vec![self.samples / 2; self.dim])
    }
}

/// `m` complex components sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    spec: GridSpec,
    components: Vec<Vec<C64>>,
}

impl GridField {
    pub fn new(spec: GridSpec, components: Vec<Vec<C64>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("field needs at least one component".into()));
        }
        if let Some(bad) = components.iter().position(|c| c.len() != spec.len()) {
            return Err(Error::DimensionMismatch(format!(
                "component {bad} has {} samples, grid has {}",
                components[bad].len(),
                spec.len()
            )));
        }
        if components.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("grid field values".into()));
        }
        Ok(Self { spec, components })
    }

    pub fn zeros(spec: GridSpec, m: usize) -> Self {
        let len = spec.len();
        Self { spec, components: vec![vec![C64::new(0.0, 0.0); len]; m] }
    }

    /// Samples `f(x)` (one value per component) at every grid point.
    pub fn from_fn<F>(spec: GridSpec, m: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<C64>,
    {
        let mut components = vec![Vec::with_capacity(spec.len()); m];
        for i in 0..spec.len() {
            let v = f(&spec.point(i));
            if v.len() != m {
                return Err(Error::DimensionMismatch(format!("expected {m} values, got {}", v.len())));
            }
            for (c, z) in components.iter_mut().zip(v) {
                c.push(z);
            }
        }
        Self::new(spec, components)
    }

    pub(crate) fn from_parts_unchecked(spec: GridSpec, components: Vec<Vec<C64>>) -> Self {
        Self { spec, components }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Number of components `m`.
    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, j: usize) -> &[C64] {
        &self.components[j]
    }

    pub fn components(&self) -> &[Vec<C64>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Vec<C64>> {
        self.components
    }

    /// `max_{j,x} |f_j(x)|`.
    pub fn sup_norm(&self) -> f64 {
        self.components.iter().flatten().fold(0.0, |a, z| a.max(z.norm()))
    }

    /// All components nonnegative up to `tol·‖f‖_∞`.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        let s = self.sup_norm();
        self.components.iter().flatten().all(|z| z.re >= -tol * s && z.im.abs() <= tol * s)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: C64, other: &GridField, b: C64) -> Result<GridField> {
        if self.spec != other.spec || self.m() != other.m() {
            return Err(Error::DimensionMismatch("fields live on different grids".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(x, y)| x.iter().zip(y).map(|(u, v)| a * u + b * v).collect())
            .collect();
        Ok(Self { spec: self.spec.clone(), components })
    }

    /// Periodic lattice translation `(τ_s f)(x) = f(x - s·h)`.
    pub fn lattice_shift(&self, steps: &[isize]) -> GridField {
        assert_eq!(steps.len(), self.spec.dim());
        let n = self.spec.samples() as isize;
        let components = self
            .components
            .iter()
            .map(|c| {
                (0..self.spec.len())
                    .map(|i| {
                        let src: Vec<usize> = self
                            .spec
                            .multi_index(i)
                            .iter()
                            .zip(steps)
                            .map(|(&k, &s)| (k as isize - s).rem_euclid(n) as usize)
                            .collect();
                        c[self.spec.flat_index(&src)]
                    })
                    .collect()
            })
            .collect();
        Self { spec: self.spec.clone(), components }
    }
}
