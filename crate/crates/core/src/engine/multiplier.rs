//! Fourier multipliers `G(-i∇)f = (G f̂)^∨` on a periodic grid, plus the
//! direct-space oracles used to check them.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use super::dft::{dft_forward, dft_inverse};
use super::grid::{GridField, GridSpec};
use crate::linalg::{self, C64, CMatrix};
use crate::symbol::{MatrixSymbol, ScalarSymbol};
use crate::synth::{Atom, MatrixMeasure, ScalarMeasure};
use crate::{par, rng, Error, Result};

fn symbol_on_grid(g: &MatrixSymbol, spec: &GridSpec) -> Result<Vec<CMatrix>> {
    if !g.is_bounded() {
        return Err(Error::UnboundedSymbol);
    }
    if g.dim() != spec.dim() {
        return Err(Error::DimensionMismatch(format!("symbol on ℝ^{}, grid on ℝ^{}", g.dim(), spec.dim())));
    }
    let values = par::map_range(spec.len(), |i| g.eval(&spec.frequency(i)));
    if values.iter().any(|m| m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite()))) {
        return Err(Error::NonFinite("symbol values on the frequency grid".into()));
    }
    Ok(values)
}

/// A symbol evaluated once on a frequency grid, reusable across fields.
#[derive(Clone, Debug)]
pub struct SampledSymbol {
    spec: GridSpec,
    size: usize,
    values: Vec<CMatrix>,
}

impl SampledSymbol {
    pub fn new(g: &MatrixSymbol, spec: &GridSpec) -> Result<Self> {
        Ok(Self { spec: spec.clone(), size: g.size(), values: symbol_on_grid(g, spec)? })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `G(ξ_i)` at frequency index `i`.
    pub fn value(&self, i: usize) -> &CMatrix {
        &self.values[i]
    }

    pub fn apply(&self, f: &GridField) -> Result<GridField> {
        if self.size != f.m() {
            return Err(Error::DimensionMismatch(format!(
                "{0}×{0} symbol, {1}-component field",
                self.size,
                f.m()
            )));
        }
        if f.spec() != &self.spec {
            return Err(Error::DimensionMismatch("field and symbol sampled on different grids".into()));
        }
        let spectrum = dft_forward(f);
        let m = self.size;
        let mixed = par::map_range(self.spec.len(), |i| {
            let gi = &self.values[i];
            (0..m)
                .map(|j| (0..m).map(|k| gi[(j, k)] * spectrum.component(k)[i]).sum::<C64>())
                .collect::<Vec<_>>()
        });
        let components = (0..m).map(|j| mixed.iter().map(|v| v[j]).collect()).collect();
        Ok(dft_inverse(&GridField::from_parts_unchecked(self.spec.clone(), components)))
    }
}

/// `G(-i∇)f` for an `m×m` symbol and an `m`-component field.
pub fn apply_multiplier(g: &MatrixSymbol, f: &GridField) -> Result<GridField> {
    if g.size() != f.m() {
        return Err(Error::DimensionMismatch(format!("{0}×{0} symbol, {1}-component field", g.size(), f.m())));
    }
    SampledSymbol::new(g, f.spec())?.apply(f)
}

/// Location of the worst sample of a positivity trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridWitness {
    pub component: usize,
    pub index: usize,
    pub position: Vec<f64>,
    pub value: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityVerdict {
    pub passed: bool,
    /// `min_{j,x} Re (Gf)_j(x)`.
    pub min_real: f64,
    /// `max_{j,x} |Im (Gf)_j(x)|`.
    pub max_imag: f64,
    pub sup_norm: f64,
    pub tolerance: f64,
    pub witness: Option<GridWitness>,
}

/// Checks that `out` is real and nonnegative up to `tol·‖out‖_∞`.
pub fn positivity_of(out: &GridField, tol: f64) -> PositivityVerdict {
    let sup = out.sup_norm();
    let limit = tol * sup.max(f64::MIN_POSITIVE);
    let mut min_real = (f64::INFINITY, 0, 0);
    let mut max_imag = (0.0_f64, 0, 0);
    for (j, c) in out.components().iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            if z.re < min_real.0 {
                min_real = (z.re, j, i);
            }
            if z.im.abs() > max_imag.0 {
                max_imag = (z.im.abs(), j, i);
            }
        }
    }
    let real_ok = min_real.0 >= -limit;
    let imag_ok = max_imag.0 <= limit;
    let witness = if !real_ok {
        Some((min_real.1, min_real.2))
    } else if !imag_ok {
        Some((max_imag.1, max_imag.2))
    } else {
        None
    }
    .map(|(component, index)| GridWitness {
        component,
        index,
        position: out.spec().point(index),
        value: out.component(component)[index],
    });
    PositivityVerdict {
        passed: real_ok && imag_ok,
        min_real: min_real.0,
        max_imag: max_imag.0,
        sup_norm: sup,
        tolerance: tol,
        witness,
    }
}

/// Applies `G(-i∇)` to a nonnegative field and checks the output stays
/// nonnegative.
pub fn positivity_trial(g: &MatrixSymbol, f: &GridField, tol: f64) -> Result<PositivityVerdict> {
    let sup = f.sup_norm();
    for (component, c) in f.components().iter().enumerate() {
        if let Some(z) = c.iter().find(|z| z.re < -tol * sup || z.im.abs() > tol * sup) {
            let value = if z.re < -tol * sup { z.re } else { z.im };
            return Err(Error::NegativeInput { component, value });
        }
    }
    Ok(positivity_of(&apply_multiplier(g, f)?, tol))
}

/// `(f ∗ μ)(x) = Σ_a w_a f(x - ξ_a)`, componentwise, evaluated directly on the grid.
///
/// The field is extended periodically; off-lattice shifts use multilinear
/// interpolation. Equals the multiplier with symbol `(2π)^{n/2} μ^` on
/// lattice atoms.
pub fn convolve_atomic(f: &GridField, mu: &ScalarMeasure) -> Result<GridField> {
    let m = f.m();
    let atoms = mu
        .atoms()
        .iter()
        .map(|a| Atom { location: a.location.clone(), weight: CMatrix::identity(m, m) * a.weight })
        .collect();
    convolve_atomic_matrix(f, &MatrixMeasure::new(mu.dim(), atoms)?)
}

/// `Σ_a W_a f(x - ξ_a)` for a matrix-weighted measure, the direct-space
/// form of `(2π)^{n/2}·bochner_matrix(μ)(-i∇) f`.
pub fn convolve_atomic_matrix(f: &GridField, mu: &MatrixMeasure) -> Result<GridField> {
    let spec = f.spec().clone();
    if mu.dim() != spec.dim() {
        return Err(Error::DimensionMismatch(format!("measure on ℝ^{}, grid on ℝ^{}", mu.dim(), spec.dim())));
    }
    let m = f.m();
    let half = 0.5 * spec.length();
    let h = spec.spacing();
    let n = spec.samples() as isize;
    let dim = spec.dim();
    let mut shifts = Vec::with_capacity(mu.len());
    for (index, a) in mu.atoms().iter().enumerate() {
        if a.weight.nrows() != m || a.weight.ncols() != m {
            return Err(Error::DimensionMismatch(format!("atom {index} weight is not {m}×{m}")));
        }
        if a.location.iter().any(|&v| v < -half || v >= half) {
            return Err(Error::AtomOutOfBox { index, location: a.location.clone() });
        }
        // split each coordinate into integer steps and a fractional part
        let parts: Vec<(isize, f64)> = a
            .location
            .iter()
            .map(|&v| {
                let s = v / h;
                let r = s.round();
                if (s - r).abs() < 1e-9 {
                    (r as isize, 0.0)
                } else {
                    (s.floor() as isize, s - s.floor())
                }
            })
            .collect();
        shifts.push(parts);
    }
    let rows = par::map_range(spec.len(), |i| {
        let idx = spec.multi_index(i);
        let mut acc = vec![C64::new(0.0, 0.0); m];
        for (a, parts) in mu.atoms().iter().zip(&shifts) {
            // f(i - s) = Σ_corners Π (1-t or t) f[i - floor(s) - corner]
            let mut sample = vec![C64::new(0.0, 0.0); m];
            for corner in 0..(1usize << dim) {
                let mut w = 1.0;
                let mut src = vec![0usize; dim];
                for d in 0..dim {
                    let (step, t) = parts[d];
                    let bit = (corner >> d) & 1;
                    w *= if bit == 1 { t } else { 1.0 - t };
                    src[d] = (idx[d] as isize - step - bit as isize).rem_euclid(n) as usize;
                }
                if w == 0.0 {
                    continue;
                }
                let flat = spec.flat_index(&src);
                for (k, s) in sample.iter_mut().enumerate() {
                    *s += f.component(k)[flat] * w;
                }
            }
            for (j, out) in acc.iter_mut().enumerate() {
                for (k, s) in sample.iter().enumerate() {
                    *out += a.weight[(j, k)] * s;
                }
            }
        }
        acc
    });
    let components = (0..m).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    GridField::new(spec, components)
}

/// Convolution kernel of a scalar multiplier and its total variation.
#[derive(Clone, Debug)]
pub struct KernelTv {
    /// Samples of `G^∨`.
    pub kernel: GridField,
    /// `hⁿ Σ |G^∨|`, the discrete `L¹` norm of the kernel.
    pub tv: f64,
    /// `(2π)^{-n/2}·tv`: since `G(-i∇)f = (2π)^{-n/2} G^∨ * f`, this bounds
    /// the operator norm on every `Lᵖ`.
    pub l1_operator_norm: f64,
}

pub fn kernel_and_tv(g: &ScalarSymbol, spec: &GridSpec) -> Result<KernelTv> {
    let ms = MatrixSymbol::from_scalar(g.clone());
    let values = symbol_on_grid(&ms, spec)?;
    let sampled = GridField::from_parts_unchecked(spec.clone(), vec![values.iter().map(|v| v[(0, 0)]).collect()]);
    let kernel = dft_inverse(&sampled);
    let tv = spec.spacing().powi(spec.dim() as i32) * kernel.component(0).iter().map(|z| z.norm()).sum::<f64>();
    let l1_operator_norm = (2.0 * PI).powf(-(spec.dim() as f64) / 2.0) * tv;
    Ok(KernelTv { kernel, tv, l1_operator_norm })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplierNormReport {
    /// Schur-test bound `sqrt(max row sum · max column sum)` of the entry
    /// operator norms `‖G_jk(-i∇)‖_{1,1}`.
    pub tv_estimate: f64,
    /// `max_ξ ‖G(ξ)‖` over the frequency grid.
    pub sup_symbol: f64,
    /// Largest observed `‖Gf‖₂/‖f‖₂` over random fields.
    pub parseval_ratio: f64,
}

/// Estimates `‖G(-i∇)‖_{2,2}` three ways. On the grid these satisfy
/// `parseval_ratio ≤ sup_symbol ≤ tv_estimate`.
pub fn l2_norm_bound(g: &MatrixSymbol, spec: &GridSpec, batch: usize, seed: u64) -> Result<MultiplierNormReport> {
    let m = g.size();
    let sampled = SampledSymbol::new(g, spec)?;
    let sup_symbol = par::map_slice(&sampled.values, linalg::operator_norm).into_iter().fold(0.0, f64::max);

    let mut entry = vec![vec![0.0; m]; m];
    for (j, row) in entry.iter_mut().enumerate() {
        for (k, e) in row.iter_mut().enumerate() {
            *e = kernel_and_tv(&g.entry(j, k), spec)?.l1_operator_norm;
        }
    }
    let row_max = entry.iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max);
    let col_max = (0..m).map(|k| entry.iter().map(|r| r[k]).sum::<f64>()).fold(0.0, f64::max);
    let tv_estimate = (row_max * col_max).sqrt();

    let ratios = par::map_range(batch, |trial| -> Result<f64> {
        let mut r = rng::substream(seed, trial as u64);
        let components = (0..m)
            .map(|_| {
                (0..spec.len())
                    .map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        let f = GridField::from_parts_unchecked(spec.clone(), components);
        let out = sampled.apply(&f)?;
        Ok(l2(&out) / l2(&f))
    });
    let mut parseval_ratio: f64 = 0.0;
    for r in ratios {
        parseval_ratio = parseval_ratio.max(r?);
    }
    Ok(MultiplierNormReport { tv_estimate, sup_symbol, parseval_ratio })
}

fn l2(f: &GridField) -> f64 {
    f.components().iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `Σ_j (hⁿ Σ_x |f_j(x)|^p)^{1/p}`.
pub fn lp_vector_norm(f: &GridField, p: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must lie in [1, ∞), got {p}")));
    }
    let spec = f.spec();
    let cell = spec.spacing().powi(spec.dim() as i32);
    Ok(f
        .components()
        .iter()
        .map(|c| (cell * c.iter().map(|z| z.norm().powf(p)).sum::<f64>()).powf(1.0 / p))
        .sum())
}


#[cfg(test)]
mod oracle_tests {
    use super::*;

    #[test]
    fn average_of_two_shifts() {
        let spec = GridSpec::new(1, 64, 16.0).unwrap();
        let f = GridField::from_fn(spec.clone(), 1, |x| vec![C64::new((-x[0] * x[0]).exp(), 0.0)]).unwrap();
        let mu = ScalarMeasure::from_real(1, [(vec![1.0], 0.5), (vec![-1.0], 0.5)]).unwrap();
        let out = convolve_atomic(&f, &mu).unwrap();
        let expected = f.lattice_shift(&[4]).combine(C64::new(0.5, 0.0), &f.lattice_shift(&[-4]), C64::new(0.5, 0.0)).unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn off_lattice_atom_interpolates_linearly() {
        let spec = GridSpec::new(1, 16, 16.0).unwrap();
        let f = GridField::from_fn(spec.clone(), 1, |x| vec![C64::new(x[0], 0.0)]).unwrap();
        let mu = ScalarMeasure::from_real(1, [(vec![0.25], 1.0)]).unwrap();
        let out = convolve_atomic(&f, &mu).unwrap();
        // away from the wrap, f(x - 0.25) = x - 0.25 exactly
        for i in 2..14 {
            assert!((out.component(0)[i].re - (spec.point(i)[0] - 0.25)).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_smoothing_matches_closed_form() {
        // e^{-|ξ|²/2} applied to e^{-|x|²/2} gives 2^{-n/2} e^{-|x|²/4}.
        for spec in [GridSpec::new(1, 512, 40.0).unwrap(), GridSpec::new(2, 128, 30.0).unwrap()] {
            let n = spec.dim() as i32;
            let gauss = |x: &[f64], s: f64| (-x.iter().map(|v| v * v).sum::<f64>() / s).exp();
            let f = GridField::from_fn(spec.clone(), 1, |x| vec![C64::new(gauss(x, 2.0), 0.0)]).unwrap();
            let g = MatrixSymbol::from_scalar(ScalarSymbol::gaussian(spec.dim(), 1.0));
            let out = apply_multiplier(&g, &f).unwrap();
            for i in 0..spec.len() {
                let want = 2f64.powi(-n).sqrt() * gauss(&spec.point(i), 4.0);
                assert!((out.component(0)[i] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn spectral_output_matches_quadrature_convolution() {
        // (2π)^{-1/2} ∫ e^{-y²/2} f(x - y) dy by the trapezoid rule on a
        // fine independent mesh, for an off-centre bump pair.
        let f = |x: f64| (-(x - 1.0).powi(2)).exp() + 0.5 * (-2.0 * (x + 2.0).powi(2)).exp();
        let spec = GridSpec::new(1, 1024, 40.0).unwrap();
        let field = GridField::from_fn(spec.clone(), 1, |x| vec![C64::new(f(x[0]), 0.0)]).unwrap();
        let g = MatrixSymbol::from_scalar(ScalarSymbol::gaussian(1, 1.0));
        let out = apply_multiplier(&g, &field).unwrap();
        let h = 1e-3;
        for i in [400, 480, 512, 523, 565, 620] {
            let x = spec.point(i)[0];
            let quad: f64 = (-12_000..=12_000)
                .map(|k| {
                    let y = k as f64 * h;
                    (-y * y / 2.0).exp() * f(x - y)
                })
                .sum::<f64>()
                * h
                / (2.0 * std::f64::consts::PI).sqrt();
            assert!((out.component(0)[i].re - quad).abs() < 1e-6, "x={x}");
        }
    }
}
