//! Built-in target functions and the plane-wave one-electron solver.

mod planewave;

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::series::{DomainKind, TargetFunction};

pub use planewave::{planewave_state, solve_coulomb_planewaves, to_series, Eigenstate, Nucleus, PlaneWaveProblem};

/// Checked 2×2 SPD covariance: (σ_xx, σ_xy, σ_yy, det).
fn spd2(sigma: [[f64; 2]; 2]) -> Result<(f64, f64, f64, f64)> {
    let [[a, b], [c, d]] = sigma;
    if [a, b, c, d].iter().any(|v| !v.is_finite()) {
        return invalid("covariance entries must be finite");
    }
    if (b - c).abs() > 1e-12 * (a.abs() + d.abs()) {
        return invalid("covariance must be symmetric");
    }
    let det = a * d - b * c;
    if a <= 0.0 || det <= 0.0 {
        return invalid("covariance must be positive definite");
    }
    Ok((a, b, d, det))
}

fn check_mu(mu: [f64; 2]) -> Result<()> {
    if mu.iter().any(|v| !v.is_finite()) {
        return invalid("mean must be finite");
    }
    Ok(())
}

/// (x−μ)ᵀ Σ⁻¹ (x−μ) for a 2×2 Σ.
fn quad_form(mu: [f64; 2], (a, b, d, det): (f64, f64, f64, f64), p: &[f64]) -> f64 {
    let (dx, dy) = (p[0] - mu[0], p[1] - mu[1]);
    (d * dx * dx - 2.0 * b * dx * dy + a * dy * dy) / det
}

/// Mexican-hat wavelet on [−1, 1]²:
/// (1 − r²/2σ²) e^{−r²/2σ²} / (πσ⁴).
pub fn ricker2d(sigma: f64) -> Result<TargetFunction> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return invalid(format!("Ricker width {sigma} must be positive"));
    }
    let norm = 1.0 / (PI * sigma.powi(4));
    Ok(TargetFunction::real(2, DomainKind::Symmetric, move |p| {
        let u = (p[0] * p[0] + p[1] * p[1]) / (2.0 * sigma * sigma);
        norm * (1.0 - u) * (-u).exp()
    }))
}

/// Bivariate Student's t with one degree of freedom on [0, 1]².
pub fn student_t2d(mu: [f64; 2], sigma: [[f64; 2]; 2]) -> Result<TargetFunction> {
    check_mu(mu)?;
    let s = spd2(sigma)?;
    let norm = 1.0 / (2.0 * PI * s.3.sqrt());
    Ok(TargetFunction::real(2, DomainKind::UnitCube, move |p| {
        norm * (1.0 + quad_form(mu, s, p)).powf(-1.5)
    }))
}

/// Bivariate normal density on [0, 1]².
pub fn gaussian2d(mu: [f64; 2], sigma: [[f64; 2]; 2]) -> Result<TargetFunction> {
    check_mu(mu)?;
    let s = spd2(sigma)?;
    let norm = 1.0 / (2.0 * PI * s.3.sqrt());
    Ok(TargetFunction::real(2, DomainKind::UnitCube, move |p| {
        norm * (-0.5 * quad_form(mu, s, p)).exp()
    }))
}

/// Σ from standard deviations and correlation.
pub fn covariance(sx: f64, sy: f64, rho: f64) -> [[f64; 2]; 2] {
    [[sx * sx, rho * sx * sy], [rho * sx * sy, sy * sy]]
}
