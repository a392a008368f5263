//! Seeded nonnegative test fields and probe grids.

use rand::Rng;

use crate::engine::{GridField, GridSpec};
use crate::linalg::C64;
use crate::synth::{Mollifier, MollifierSpec, MIN_SAMPLES_ACROSS};
use crate::{rng, Error, Result};

/// Largest probe grid the harness will allocate.
const MAX_PROBE_POINTS: usize = 1 << 22;

/// `m` components, each a mixture of 1–5 mollifier bumps with weights in
/// `(0, 1]`, centres in `[-L/4, L/4]ⁿ` and radii in `[max(5h, L/40), L/12]`.
/// Depends only on `(seed, index)`.
pub fn random_nonnegative_field(grid: &GridSpec, m: usize, seed: u64, index: usize) -> Result<GridField> {
    let unit = Mollifier::new(MollifierSpec::new(grid.dim(), 1.0))?;
    let mut r = rng::substream(seed, index as u64);
    let l = grid.length();
    let lo = (5.0 * grid.spacing()).max(l / 40.0);
    let hi = (l / 12.0).max(lo);
    let n = grid.dim() as i32;
    let mut components = Vec::with_capacity(m);
    for _ in 0..m {
        let count = r.random_range(1..=5);
        let bumps: Vec<(Vec<f64>, f64, f64)> = (0..count)
            .map(|_| {
                let centre = (0..grid.dim()).map(|_| r.random_range(-0.25 * l..=0.25 * l)).collect();
                let eps = r.random_range(lo..=hi);
                let w = 1.0 - r.random::<f64>();
                (centre, eps, w)
            })
            .collect();
        let values = (0..grid.len())
            .map(|i| {
                let x = grid.point(i);
                let v: f64 = bumps
                    .iter()
                    .map(|(c, eps, w)| {
                        let y: Vec<f64> = x.iter().zip(c).map(|(a, b)| (a - b) / eps).collect();
                        w * unit.value(&y) / eps.powi(n)
                    })
                    .sum();
                C64::new(v, 0.0)
            })
            .collect();
        components.push(values);
    }
    GridField::new(grid.clone(), components)
}

/// Same box as `grid`, refined by a power of two until the smallest `ε`
/// gets at least 8 samples across its support. Lattice points of `grid`
/// remain lattice points of the probe grid.
pub fn probe_grid(grid: &GridSpec, eps_min: f64) -> Result<GridSpec> {
    let mut n = grid.samples();
    while 2.0 * eps_min / (grid.length() / n as f64) < MIN_SAMPLES_ACROSS {
        n *= 2;
        if n.pow(grid.dim() as u32) > MAX_PROBE_POINTS {
            return Err(Error::ConfigInvalid(format!(
                "resolving ε = {eps_min} needs more than {MAX_PROBE_POINTS} grid points; raise the smallest ε or shrink the box"
            )));
        }
    }
    GridSpec::new(grid.dim(), n, grid.length())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_are_nonnegative_and_reproducible() {
        let g = GridSpec::new(1, 256, 20.0).unwrap();
        let a = random_nonnegative_field(&g, 2, 5, 3).unwrap();
        let b = random_nonnegative_field(&g, 2, 5, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.components().iter().flatten().all(|z| z.re >= 0.0 && z.im == 0.0));
        assert!(a.sup_norm() > 0.0);
        assert_ne!(a, random_nonnegative_field(&g, 2, 5, 4).unwrap());
    }

    #[test]
    fn probe_grid_refines() {
        let g = GridSpec::new(1, 1024, 40.0).unwrap();
        let p = probe_grid(&g, 1.0 / 64.0).unwrap();
        assert_eq!(p.samples(), 16384);
        assert_eq!(probe_grid(&g, 0.5).unwrap(), g);
        let g2 = GridSpec::new(2, 256, 40.0).unwrap();
        assert!(probe_grid(&g2, 1.0 / 64.0).is_err());
    }
}
