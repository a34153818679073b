//! Coefficient computation: FFT-based trigonometric interpolation and the
//! type-II DCT at Chebyshev roots.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{chebyshev_nodes, Basis, SeriesApprox, TargetFunction};
use crate::error::{invalid, Error, Result};
use crate::grid::unravel;

/// Multiply axis `axis` of a row-major tensor by the matrix `m`
/// (`new_len` rows × `shape[axis]` columns, row-major).
pub fn mode_product(
    data: &[Complex64],
    shape: &[usize],
    axis: usize,
    m: &[Complex64],
    new_len: usize,
) -> Vec<Complex64> {
    let k = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    debug_assert_eq!(m.len(), new_len * k);
    let mut out = vec![Complex64::new(0.0, 0.0); outer * new_len * inner];
    out.par_chunks_mut(inner).enumerate().for_each(|(idx, dst)| {
        let (o, g) = (idx / new_len, idx % new_len);
        for s in 0..k {
            let w = m[g * k + s];
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            let src = &data[(o * k + s) * inner..(o * k + s + 1) * inner];
            for (d, v) in dst.iter_mut().zip(src) {
                *d += w * v;
            }
        }
    });
    out
}

/// Apply `f` in place to every 1-D line of the tensor along `axis`.
fn along_axis(data: &mut [Complex64], shape: &[usize], axis: usize, mut f: impl FnMut(&mut [Complex64])) {
    let k = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut line = vec![Complex64::new(0.0, 0.0); k];
    for o in 0..outer {
        for i in 0..inner {
            for (s, v) in line.iter_mut().enumerate() {
                *v = data[(o * k + s) * inner + i];
            }
            f(&mut line);
            for (s, v) in line.iter().enumerate() {
                data[(o * k + s) * inner + i] = *v;
            }
        }
    }
}

fn sample(f: &TargetFunction, axes: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
    let total: usize = shape.iter().product();
    let values: Vec<Complex64> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let idx = unravel(flat, &shape);
            let p: Vec<f64> = idx.iter().zip(axes).map(|(&j, ax)| ax[j]).collect();
            f.eval(&p)
        })
        .collect();
    if let Some(pos) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        let idx = unravel(pos, &shape);
        let p: Vec<f64> = idx.iter().zip(axes).map(|(&j, ax)| ax[j]).collect();
        return Err(Error::NumericDomain(format!("non-finite function value at node {p:?}")));
    }
    Ok(values)
}

fn check_arity(f: &TargetFunction, degrees: &[usize]) -> Result<()> {
    if degrees.is_empty() {
        return invalid("need at least one degree");
    }
    if f.arity() != degrees.len() {
        return invalid(format!("{} degrees for a function of {} variables", degrees.len(), f.arity()));
    }
    Ok(())
}

/// X_k = Σ_m x_m cos(πk(2m+1)/(2N)), via one complex FFT of length 4N.
struct Dct2 {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
}

impl Dct2 {
    fn new(planner: &mut FftPlanner<f64>, n: usize) -> Self {
        Self {
            n,
            fft: planner.plan_fft_forward(4 * n),
            buf: vec![Complex64::new(0.0, 0.0); 4 * n],
        }
    }

    fn apply(&mut self, line: &mut [Complex64]) {
        let n = self.n;
        self.buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        // Odd slots carry x and its mirror image, so the transform is a pure cosine sum.
        for (m, &x) in line.iter().enumerate() {
            self.buf[2 * m + 1] = x;
            self.buf[4 * n - 2 * m - 1] = x;
        }
        self.fft.process(&mut self.buf);
        for (k, v) in line.iter_mut().enumerate() {
            *v = self.buf[k] * 0.5;
        }
    }
}

/// Chebyshev interpolant through the tensor grid of roots of T_{d_i+1}.
pub fn chebyshev_interpolate(f: &TargetFunction, degrees: &[usize]) -> Result<SeriesApprox> {
    check_arity(f, degrees)?;
    let axes = degrees
        .iter()
        .map(|&d| chebyshev_nodes(d + 1))
        .collect::<Result<Vec<_>>>()?;
    let shape: Vec<usize> = degrees.iter().map(|d| d + 1).collect();
    let mut data = sample(f, &axes)?;
    let mut planner = FftPlanner::new();
    for (axis, &n) in shape.iter().enumerate() {
        let mut dct = Dct2::new(&mut planner, n);
        let scale = 2.0 / n as f64;
        along_axis(&mut data, &shape, axis, |line| {
            dct.apply(line);
            line.iter_mut().for_each(|v| *v *= scale);
            line[0] *= 0.5;
        });
    }
    SeriesApprox::new(Basis::Chebyshev, degrees, data)
}

/// Trigonometric interpolant of a period-2 function through the nodes
/// x_m = 2m/(2d_i+1).
pub fn fourier_interpolate(f: &TargetFunction, degrees: &[usize]) -> Result<SeriesApprox> {
    check_arity(f, degrees)?;
    let shape: Vec<usize> = degrees.iter().map(|d| 2 * d + 1).collect();
    let axes: Vec<Vec<f64>> = shape
        .iter()
        .map(|&m| (0..m).map(|j| 2.0 * j as f64 / m as f64).collect())
        .collect();
    let mut data = sample(f, &axes)?;
    let mut planner = FftPlanner::new();
    for (axis, &m) in shape.iter().enumerate() {
        let fft = planner.plan_fft_forward(m);
        let d = degrees[axis] as i64;
        let scale = 1.0 / m as f64;
        let mut tmp = vec![Complex64::new(0.0, 0.0); m];
        along_axis(&mut data, &shape, axis, |line| {
            fft.process(line);
            // FFT bin (k mod m) → storage slot k + d.
            for k in -d..=d {
                tmp[(k + d) as usize] = line[k.rem_euclid(m as i64) as usize] * scale;
            }
            line.copy_from_slice(&tmp);
        });
    }
    SeriesApprox::new(Basis::Fourier, degrees, data)
}
