//! Radial mollifiers `φ_ε(x) = ε^{-n} φ(x/ε)` and their Fourier transforms.
//!
//! The profile is constant on `[0, plateau]`, decreases through a `C^∞`
//! smooth step on `[plateau, 1]` and vanishes beyond 1, so every derivative
//! at the origin is exactly zero.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{GridField, GridSpec};
use crate::linalg::C64;
use crate::symbol::{norm_sq, Provenance, ScalarSymbol};
use crate::{Error, Result};

/// `exp(-1/u)` for `u > 0`, else 0.
fn flat(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// Smooth step from 1 at `s ≤ 0` to 0 at `s ≥ 1`, flat to all orders at both ends.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        let (a, b) = (flat(1.0 - s), flat(s));
        a / (a + b)
    }
}

/// Unnormalised radial profile: 1 on `[0, plateau]`, smooth step to 0 at `r = 1`.
pub fn radial_profile(r: f64, plateau: f64) -> f64 {
    if r <= plateau {
        1.0
    } else if r >= 1.0 {
        0.0
    } else {
        smooth_step((r - plateau) / (1.0 - plateau))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `∫ φ = 1`; the transform then tends to `(2π)^{-n/2}` as `ε ↓ 0`.
    UnitIntegral,
    /// `φ^(0) = 1`, i.e. `∫ φ = (2π)^{n/2}`.
    UnitTransformLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MollifierSpec {
    pub dim: usize,
    pub eps: f64,
    pub plateau: f64,
    pub normalization: Normalization,
}

impl MollifierSpec {
    pub fn new(dim: usize, eps: f64) -> Self {
        Self { dim, eps, plateau: 0.5, normalization: Normalization::UnitIntegral }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::InvalidArgument(format!("mollifier dimension {} not in 1..=3", self.dim)));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::InvalidArgument(format!("eps must lie in (0, 1], got {}", self.eps)));
        }
        if !(self.plateau > 0.0 && self.plateau < 1.0) {
            return Err(Error::InvalidArgument(format!("plateau must lie in (0, 1), got {}", self.plateau)));
        }
        Ok(())
    }
}

fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// `J₀(z) = (1/π) ∫_0^π cos(z sin θ) dθ` by the trapezoid rule, which is
/// spectrally accurate for this periodic integrand.
fn bessel_j0(z: f64) -> f64 {
    let m = 48 + z.abs().ceil() as usize;
    let h = PI / m as f64;
    let mut s = 0.5 * (1.0 + 1.0);
    for k in 1..m {
        s += (z * (k as f64 * h).sin()).cos();
    }
    s / m as f64
}

/// Composite Gauss–Legendre rule for `∫_{ℝⁿ} ψ(|x|) K(ρ|x|) dx` reduced to
/// the radial variable; weights already include `ψ(r) r^{n-1}` and the area
/// of the unit sphere.
#[derive(Debug)]
struct RadialQuadrature {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialQuadrature {
    fn build(dim: usize, plateau: f64, panels: usize) -> Self {
        let (gx, gw) = gauss_legendre(16);
        let sphere = match dim {
            1 => 2.0,
            2 => 2.0 * PI,
            _ => 4.0 * PI,
        };
        let mut nodes = vec![];
        let mut weights = vec![];
        let plateau_panels = (panels / 4).max(4);
        let mut add = |a: f64, b: f64, count: usize| {
            let h = (b - a) / count as f64;
            for p in 0..count {
                let lo = a + p as f64 * h;
                for (x, w) in gx.iter().zip(&gw) {
                    let r = lo + 0.5 * h * (x + 1.0);
                    nodes.push(r);
                    weights.push(0.5 * h * w * sphere * r.powi(dim as i32 - 1) * radial_profile(r, plateau));
                }
            }
        };
        add(0.0, plateau, plateau_panels);
        add(plateau, 1.0, panels);
        Self { dim, nodes, weights }
    }

    fn integrate(&self, rho: f64) -> f64 {
        let kernel = |z: f64| match self.dim {
            1 => z.cos(),
            2 => bessel_j0(z),
            _ => {
                if z.abs() < 1e-4 {
                    1.0 - z * z / 6.0
                } else {
                    z.sin() / z
                }
            }
        };
        if rho == 0.0 {
            return self.weights.iter().sum();
        }
        self.nodes.iter().zip(&self.weights).map(|(&r, &w)| w * kernel(rho * r)).sum()
    }
}

/// A normalised mollifier with its eagerly built transform quadrature.
#[derive(Clone, Debug)]
pub struct Mollifier {
    spec: MollifierSpec,
    amplitude: f64,
    quad: Arc<RadialQuadrature>,
}

impl Mollifier {
    pub fn new(spec: MollifierSpec) -> Result<Self> {
        spec.validate()?;
        let mut panels = 32;
        let mut coarse = RadialQuadrature::build(spec.dim, spec.plateau, panels);
        loop {
            let fine = RadialQuadrature::build(spec.dim, spec.plateau, 2 * panels);
            let (a, b) = (coarse.integrate(0.0), fine.integrate(0.0));
            if (a - b).abs() <= 1e-13 * b {
                coarse = fine;
                break;
            }
            panels *= 2;
            if panels > 8192 {
                return Err(Error::QuadratureFailure(format!(
                    "profile mass not converged: {a} vs {b} at {panels} panels"
                )));
            }
            coarse = fine;
        }
        let mass = coarse.integrate(0.0);
        let target = match spec.normalization {
            Normalization::UnitIntegral => 1.0,
            Normalization::UnitTransformLimit => (2.0 * PI).powf(spec.dim as f64 / 2.0),
        };
        Ok(Self { amplitude: target / mass, quad: Arc::new(coarse), spec })
    }

    pub fn spec(&self) -> &MollifierSpec {
        &self.spec
    }

    /// `φ_ε(x)`.
    pub fn value(&self, x: &[f64]) -> f64 {
        let eps = self.spec.eps;
        let r = norm_sq(x).sqrt() / eps;
        self.amplitude * radial_profile(r, self.spec.plateau) / eps.powi(self.spec.dim as i32)
    }

    /// `φ_ε^(ξ) = φ^(εξ)`; accurate for `ε|ξ| ≲ 500`.
    pub fn transform(&self, xi: &[f64]) -> f64 {
        let rho = self.spec.eps * norm_sq(xi).sqrt();
        (2.0 * PI).powf(-(self.spec.dim as f64) / 2.0) * self.amplitude * self.quad.integrate(rho)
    }

    /// `lim_{ε↓0} φ_ε^(ξ) = (2π)^{-n/2} ∫ φ`.
    pub fn transform_limit(&self) -> f64 {
        (2.0 * PI).powf(-(self.spec.dim as f64) / 2.0) * self.integral()
    }

    /// `∫ φ_ε` as computed by the radial quadrature.
    pub fn integral(&self) -> f64 {
        self.amplitude * self.quad.integrate(0.0)
    }

    pub fn symbols(&self) -> (ScalarSymbol, ScalarSymbol) {
        let me = self.clone();
        let value = ScalarSymbol::new(self.spec.dim, Provenance::Builtin("mollifier".into()), move |x| {
            C64::new(me.value(x), 0.0)
        })
        .with_sup_bound(self.amplitude / self.spec.eps.powi(self.spec.dim as i32));
        let me = self.clone();
        let transform = ScalarSymbol::new(self.spec.dim, Provenance::Bochner, move |xi| {
            C64::new(me.transform(xi), 0.0)
        })
        .with_sup_bound(self.transform_limit());
        (value, transform)
    }
}

/// `(φ_ε, φ_ε^)` as symbols.
pub fn mollifier(spec: &MollifierSpec) -> Result<(ScalarSymbol, ScalarSymbol)> {
    Ok(Mollifier::new(spec.clone())?.symbols())
}

/// Minimum number of grid samples across the support diameter `2ε`.
pub const MIN_SAMPLES_ACROSS: f64 = 8.0;

/// The `m`-component field with `φ_ε` in slot `component` (0-based) and zeros
/// elsewhere, using the default mollifier profile.
pub fn basis_test_field(eps: f64, component: usize, m: usize, grid: &GridSpec) -> Result<GridField> {
    basis_test_field_with(&Mollifier::new(MollifierSpec::new(grid.dim(), eps))?, component, m, grid)
}

pub fn basis_test_field_with(moll: &Mollifier, component: usize, m: usize, grid: &GridSpec) -> Result<GridField> {
    if component >= m {
        return Err(Error::InvalidArgument(format!("component {component} out of range for m = {m}")));
    }
    if moll.spec().dim != grid.dim() {
        return Err(Error::DimensionMismatch("mollifier and grid dimensions differ".into()));
    }
    let diameter = 2.0 * moll.spec().eps;
    if diameter / grid.spacing() < MIN_SAMPLES_ACROSS {
        return Err(Error::UnderResolved { spacing: grid.spacing(), diameter });
    }
    let values: Vec<C64> = (0..grid.len()).map(|i| C64::new(moll.value(&grid.point(i)), 0.0)).collect();
    let zeros = vec![C64::new(0.0, 0.0); grid.len()];
    let components = (0..m).map(|j| if j == component { values.clone() } else { zeros.clone() }).collect();
    GridField::new(grid.clone(), components)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_shape() {
        let p = 0.5;
        assert_eq!(radial_profile(0.0, p), 1.0);
        assert_eq!(radial_profile(0.5, p), 1.0);
        assert_eq!(radial_profile(1.0, p), 0.0);
        assert_eq!(radial_profile(3.0, p), 0.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        // Nonincreasing on a fine radial grid.
        let mut prev = f64::INFINITY;
        for i in 0..=10_000 {
            let v = radial_profile(1.2 * i as f64 / 10_000.0, p);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        let int: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((int - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn bessel_j0_values() {
        assert!((bessel_j0(0.0) - 1.0).abs() < 1e-15);
        // J₀(1) and J₀(10), reference values.
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_j0(10.0) + 0.245_935_764_451_348_3).abs() < 1e-14);
    }

    #[test]
    fn unit_integral_and_support() {
        for dim in 1..=3 {
            for eps in [1.0, 0.1] {
                let m = Mollifier::new(MollifierSpec::new(dim, eps)).unwrap();
                assert!((m.integral() - 1.0).abs() < 1e-12);
                let mut x = vec![0.0; dim];
                x[0] = eps;
                assert_eq!(m.value(&x), 0.0);
                x[0] = 0.999 * eps;
                assert!(m.value(&x) > 0.0);
                let k = (2.0 * PI).powf(-(dim as f64) / 2.0);
                assert!((m.transform_limit() - k).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unit_transform_limit_normalization() {
        let spec = MollifierSpec { normalization: Normalization::UnitTransformLimit, ..MollifierSpec::new(2, 0.5) };
        let m = Mollifier::new(spec).unwrap();
        assert!((m.transform(&[0.0, 0.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transform_tends_to_constant() {
        let xi = [3.0];
        let mut prev_gap = f64::INFINITY;
        for k in 1..=8 {
            let m = Mollifier::new(MollifierSpec::new(1, 2f64.powi(-k))).unwrap();
            let gap = (m.transform(&xi) - m.transform_limit()).abs();
            assert!(gap <= prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-4);
    }

    #[test]
    fn invalid_specs() {
        assert!(Mollifier::new(MollifierSpec::new(1, 0.0)).is_err());
        assert!(Mollifier::new(MollifierSpec::new(1, 1.5)).is_err());
        assert!(Mollifier::new(MollifierSpec { plateau: 1.0, ..MollifierSpec::new(1, 0.5) }).is_err());
        assert!(Mollifier::new(MollifierSpec::new(4, 0.5)).is_err());
    }
}
