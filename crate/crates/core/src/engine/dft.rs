//! Discrete Fourier pair consistent with `f̂(ξ) = (2π)^{-n/2} ∫ e^{-iξ·x} f(x) dx`.
//!
//! Forward: `f̂[k] = (2π)^{-n/2} hⁿ (-1)^{|k|} FFT(f)[k]`, the sign coming from
//! the box offset `x_0 = -L/2`. Inverse: `g^∨[j] = (2π)^{-n/2} Δξⁿ IFFT((-1)^{|k|} g)[j]`
//! with an unnormalised inverse FFT. Since `h·Δξ·N = 2π` the pair is an exact
//! inverse and satisfies the discrete Parseval identity `hⁿ Σ|f|² = Δξⁿ Σ|f̂|²`.

use std::f64::consts::PI;

use rustfft::{FftDirection, FftPlanner};

use super::grid::{GridField, GridSpec};
use crate::linalg::C64;
use crate::par;

fn fft_all_axes(spec: &GridSpec, data: &mut [C64], direction: FftDirection) {
    let n = spec.samples();
    let dim = spec.dim();
    let fft = FftPlanner::new().plan_fft(n, direction);
    // axis dim-1 is contiguous; other axes are gathered into contiguous lines
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            par::for_each_chunk_mut(data, n, |_, line| {
                let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
                fft.process_with_scratch(line, &mut scratch);
            });
            continue;
        }
        let block = stride * n;
        let lines = data.len() / n;
        let mut buf = vec![C64::new(0.0, 0.0); data.len()];
        // line index l = outer·stride + inner; element j of line sits at outer·block + j·stride + inner
        for l in 0..lines {
            let (outer, inner) = (l / stride, l % stride);
            for j in 0..n {
                buf[l * n + j] = data[outer * block + j * stride + inner];
            }
        }
        par::for_each_chunk_mut(&mut buf, n, |_, line| {
            let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(line, &mut scratch);
        });
        for l in 0..lines {
            let (outer, inner) = (l / stride, l % stride);
            for j in 0..n {
                data[outer * block + j * stride + inner] = buf[l * n + j];
            }
        }
    }
}

fn parity(spec: &GridSpec, i: usize) -> f64 {
    let s: usize = spec.multi_index(i).iter().sum();
    if s.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn transform_component(spec: &GridSpec, values: &[C64], forward: bool) -> Vec<C64> {
    let n = spec.dim() as i32;
    let mut data = values.to_vec();
    if forward {
        fft_all_axes(spec, &mut data, FftDirection::Forward);
        let scale = (2.0 * PI).powf(-0.5 * n as f64) * spec.spacing().powi(n);
        for (i, z) in data.iter_mut().enumerate() {
            *z *= scale * parity(spec, i);
        }
    } else {
        for (i, z) in data.iter_mut().enumerate() {
            *z *= parity(spec, i);
        }
        fft_all_axes(spec, &mut data, FftDirection::Inverse);
        let scale = (2.0 * PI).powf(-0.5 * n as f64) * spec.freq_spacing().powi(n);
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
    data
}

/// Samples of `f̂` on the frequency grid, FFT order.
pub fn dft_forward(f: &GridField) -> GridField {
    let spec = f.spec().clone();
    let components = f.components().iter().map(|c| transform_component(&spec, c, true)).collect();
    GridField::from_parts_unchecked(spec, components)
}

/// Inverse of [`dft_forward`]: spectrum samples in FFT order to spatial samples.
pub fn dft_inverse(g: &GridField) -> GridField {
    let spec = g.spec().clone();
    let components = g.components().iter().map(|c| transform_component(&spec, c, false)).collect();
    GridField::from_parts_unchecked(spec, components)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_field(spec: &GridSpec) -> GridField {
        GridField::from_fn(spec.clone(), 1, |x| {
            vec![C64::new((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0)]
        })
        .unwrap()
    }

    #[test]
    fn gaussian_is_self_dual() {
        for (dim, n, l) in [(1, 1024, 40.0), (2, 64, 20.0), (3, 64, 20.0)] {
            let spec = GridSpec::new(dim, n, l).unwrap();
            let ft = dft_forward(&gaussian_field(&spec));
            let err = (0..spec.len())
                .map(|i| {
                    let xi = spec.frequency(i);
                    let exact = (-0.5 * xi.iter().map(|v| v * v).sum::<f64>()).exp();
                    (ft.component(0)[i] - exact).norm()
                })
                .fold(0.0, f64::max);
            assert!(err < 1e-10, "dim {dim}: {err}");
        }
    }

    #[test]
    fn roundtrip_and_parseval() {
        let spec = GridSpec::new(2, 16, 6.0).unwrap();
        let f = GridField::from_fn(spec.clone(), 2, |x| {
            vec![C64::new(x[0].sin(), x[1]), C64::new((x[0] * x[1]).cos(), 0.0)]
        })
        .unwrap();
        let ft = dft_forward(&f);
        let back = dft_inverse(&ft);
        for j in 0..2 {
            for i in 0..spec.len() {
                assert!((back.component(j)[i] - f.component(j)[i]).norm() < 1e-12);
            }
        }
        let h2 = spec.spacing().powi(2);
        let d2 = spec.freq_spacing().powi(2);
        let lhs: f64 = f.components().iter().flatten().map(|z| z.norm_sqr()).sum::<f64>() * h2;
        let rhs: f64 = ft.components().iter().flatten().map(|z| z.norm_sqr()).sum::<f64>() * d2;
        assert!((lhs - rhs).abs() < 1e-10 * lhs);
    }
}
