//! Success probabilities, error metrics and shot-data statistics.

mod kde;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{Convention, GridSpec};
use crate::series::{evaluate_on_grid, Basis, SeriesApprox, TargetFunction};
use crate::simulator::PreparationOutcome;

pub use kde::{
    analyze_grid_counts, default_h_grid, kde_cv_bandwidth, kde_estimate, BandwidthScan, KdeData, ShotAnalysis,
    DIRECT_LOO_LIMIT,
};

/// Σ_grid |f_d|² / (𝒩² · #grid points): the post-selection probability of
/// the assembled circuit, computed without simulating it.
pub fn success_probability_analytic(s: &SeriesApprox, g: &GridSpec) -> Result<f64> {
    if s.dims() != g.dims() {
        return invalid(format!("{}-D series on a {}-D grid", s.dims(), g.dims()));
    }
    let want = match s.basis() {
        Basis::Fourier => Convention::FourierUnit,
        Basis::Chebyshev => Convention::ChebyshevSym,
    };
    if g.convention() != want {
        return invalid(format!("{:?} series needs a {want:?} grid", s.basis()));
    }
    let vals = evaluate_on_grid(s, &g.axes())?;
    let sum: f64 = vals.par_iter().map(|v| v.norm_sqr()).sum();
    Ok(sum / (s.norm() * s.norm() * g.len() as f64))
}

/// Relative change between the base and refined quadrature above which
/// the result is flagged.
pub const QUADRATURE_RTOL: f64 = 1e-4;

/// Quadrature points per axis of the base rule, so that m^D ≥ 10⁶.
fn base_points(dims: usize) -> usize {
    let mut m = (1e6f64.powf(1.0 / dims as f64)).ceil() as usize;
    while (m as f64).powi(dims as i32) < 1e6 {
        m += 1;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticProbability {
    /// Value from the refined rule.
    pub value: f64,
    /// |refined − base| / |refined|.
    pub rel_change: f64,
    pub converged: bool,
}

/// Mean of |f|² over the domain, by the tensor midpoint rule.
fn mean_abs_sqr(f: &TargetFunction, m: usize) -> f64 {
    let dims = f.arity();
    let (lo, hi) = f.domain().bounds();
    let step = (hi - lo) / m as f64;
    let total = m.pow(dims as u32);
    let sum: f64 = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0.0; dims],
            |x, mut flat| {
                for slot in x.iter_mut().rev() {
                    *slot = lo + (flat % m) as f64 * step + 0.5 * step;
                    flat /= m;
                }
                f.eval(x).norm_sqr()
            },
        )
        .sum();
    sum / total as f64
}

/// p* = ∫|f|² / (vol · 𝒩²): the large-n limit of the analytic success
/// probability, `norm` being Σ|c_k| of the series actually loaded.
pub fn asymptotic_success_probability(f: &TargetFunction, norm: f64) -> Result<AsymptoticProbability> {
    if !(norm.is_finite() && norm > 0.0) {
        return invalid(format!("coefficient norm {norm} must be positive"));
    }
    let m = base_points(f.arity());
    let coarse = mean_abs_sqr(f, m);
    let fine = mean_abs_sqr(f, 2 * m);
    if !fine.is_finite() {
        return Err(Error::NumericDomain("|f|² not integrable on the sample points".into()));
    }
    let rel_change = if fine == 0.0 { 0.0 } else { (fine - coarse).abs() / fine };
    let converged = rel_change <= QUADRATURE_RTOL;
    if !converged {
        log::warn!("p* quadrature moved by {rel_change:.2e} on refinement");
    }
    Ok(AsymptoticProbability {
        value: fine / (norm * norm),
        rel_change,
        converged,
    })
}

/// f on every grid point, row-major with dimension 0 slowest.
pub fn target_on_grid(f: &TargetFunction, g: &GridSpec) -> Result<Vec<Complex64>> {
    if f.arity() != g.dims() {
        return invalid(format!("{}-ary target on a {}-D grid", f.arity(), g.dims()));
    }
    let vals: Vec<Complex64> = (0..g.len()).into_par_iter().map(|i| f.eval(&g.point(i))).collect();
    if vals.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NumericDomain("target not finite on the grid".into()));
    }
    Ok(vals)
}

/// max_grid |f − g̃| where g̃ is the post-selected state scaled by
/// √(Σ_grid |f|²) and rotated by the best global phase.
pub fn max_grid_error(outcome: &PreparationOutcome, f: &TargetFunction, g: &GridSpec) -> Result<f64> {
    if outcome.qubits() != g.qubits() {
        return invalid(format!("outcome registers {:?} vs grid {:?}", outcome.qubits(), g.qubits()));
    }
    let target = target_on_grid(f, g)?;
    Ok(rescaled_max_error(outcome.amplitudes(), &target))
}

/// The metric of [`max_grid_error`] on raw arrays.
pub fn rescaled_max_error(amps: &[Complex64], target: &[Complex64]) -> f64 {
    let scale = target.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let overlap: Complex64 = amps.iter().zip(target).map(|(a, t)| a.conj() * t).sum();
    let rot = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    amps.iter()
        .zip(target)
        .map(|(a, t)| (a * rot * scale - t).norm())
        .fold(0.0, f64::max)
}

/// sup |f − f_d| over a dense tensor sample of f's domain, `per_axis`
/// points per axis including the endpoints.
pub fn dense_sup_error(s: &SeriesApprox, f: &TargetFunction, per_axis: usize) -> Result<f64> {
    if s.dims() != f.arity() {
        return invalid(format!("{}-D series vs {}-ary target", s.dims(), f.arity()));
    }
    if per_axis < 2 {
        return invalid("dense sampling needs at least two points per axis");
    }
    let (lo, hi) = f.domain().bounds();
    let axis: Vec<f64> = (0..per_axis)
        .map(|i| lo + (hi - lo) * i as f64 / (per_axis - 1) as f64)
        .collect();
    let axes = vec![axis; s.dims()];
    let approx = evaluate_on_grid(s, &axes)?;
    let shape = vec![per_axis; s.dims()];
    let err = approx
        .par_iter()
        .enumerate()
        .map_init(
            || vec![0.0; shape.len()],
            |x, (mut flat, v)| {
                for (slot, xs) in x.iter_mut().zip(&axes).rev() {
                    *slot = xs[flat % per_axis];
                    flat /= per_axis;
                }
                (f.eval(x) - v).norm()
            },
        )
        .reduce(|| 0.0, f64::max);
    if !err.is_finite() {
        return Err(Error::NumericDomain("target not finite on the dense sample".into()));
    }
    Ok(err)
}

/// (Σ√(p_i q_i))² / (Σp · Σq).
pub fn classical_fidelity(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return invalid(format!("fidelity of arrays of length {} and {}", p.len(), q.len()));
    }
    if p.iter().chain(q).any(|&v| !(v >= 0.0 && v.is_finite())) {
        return invalid("fidelity inputs must be finite and nonnegative");
    }
    let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
    if sp <= 0.0 || sq <= 0.0 {
        return invalid("fidelity input sums to zero");
    }
    let bc: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    Ok((bc * bc / (sp * sq)).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mu_x: f64,
    pub mu_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub rho: f64,
}

/// Means, variances and correlation of a nonnegative density on the tensor
/// grid xs × ys (row-major, x slowest). The density is normalized first.
pub fn density_moments(dens: &[f64], xs: &[f64], ys: &[f64]) -> Result<Moments> {
    if dens.len() != xs.len() * ys.len() {
        return invalid(format!("density of {} values on a {}×{} grid", dens.len(), xs.len(), ys.len()));
    }
    if dens.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
        return invalid("density must be finite and nonnegative");
    }
    let total: f64 = dens.iter().sum();
    if total <= 0.0 {
        return invalid("density sums to zero");
    }
    let ny = ys.len();
    let px: Vec<f64> = dens.chunks(ny).map(|r| r.iter().sum::<f64>() / total).collect();
    let py: Vec<f64> = (0..ny)
        .map(|j| dens.iter().skip(j).step_by(ny).sum::<f64>() / total)
        .collect();
    let mean = |p: &[f64], v: &[f64]| p.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let (mu_x, mu_y) = (mean(&px, xs), mean(&py, ys));
    let var = |p: &[f64], v: &[f64], mu: f64| p.iter().zip(v).map(|(a, b)| a * (b - mu).powi(2)).sum::<f64>();
    let (var_x, var_y) = (var(&px, xs, mu_x), var(&py, ys, mu_y));
    let mut cov = 0.0;
    for (i, row) in dens.chunks(ny).enumerate() {
        let dx = xs[i] - mu_x;
        cov += row.iter().zip(ys).map(|(w, y)| w * dx * (y - mu_y)).sum::<f64>();
    }
    cov /= total;
    let rho = if var_x > 0.0 && var_y > 0.0 { cov / (var_x * var_y).sqrt() } else { 0.0 };
    Ok(Moments { mu_x, mu_y, var_x, var_y, rho })
}
