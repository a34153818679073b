use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Basis, SeriesApprox};
use crate::error::{invalid, Result};

/// Tail mass outside [0,1]^D above which a warning is logged.
pub const GAUSSIAN_TAIL_WARN: f64 = 1e-4;

/// Fourier coefficients of a Gaussian density on [0,1]^D, zero-extended
/// to the period-2 cell, read off its characteristic function:
/// c_k = 2^{−D} exp(i μᵀω − ½ ωᵀΣω) with ω = −πk, k_i ∈ [−d, d].
///
/// `sigma` is the D×D covariance in row-major order.
pub fn gaussian_fourier_coeffs(mu: &[f64], sigma: &[f64], degree: usize) -> Result<SeriesApprox> {
    let dims = mu.len();
    if dims == 0 {
        return invalid("mean vector is empty");
    }
    if sigma.len() != dims * dims {
        return invalid(format!("covariance needs {} entries, got {}", dims * dims, sigma.len()));
    }
    if mu.iter().chain(sigma).any(|v| !v.is_finite()) {
        return invalid("non-finite Gaussian parameter");
    }
    let cov = DMatrix::from_row_slice(dims, dims, sigma);
    let scale = cov.amax().max(1.0);
    if (&cov - cov.transpose()).amax() > 1e-12 * scale {
        return invalid("covariance is not symmetric");
    }
    if cov.clone().cholesky().is_none() {
        return invalid("covariance is not positive definite");
    }

    let tail = tail_mass_bound(mu, &cov);
    if tail > GAUSSIAN_TAIL_WARN {
        log::warn!("Gaussian tail mass outside the unit cube up to {tail:.2e}; zero extension truncates it");
    }

    let len = 2 * degree + 1;
    let total = len.pow(dims as u32);
    let pref = 0.5f64.powi(dims as i32);
    let d = degree as i64;
    let mut coeffs = Vec::with_capacity(total);
    let mut omega = vec![0.0; dims];
    for flat in 0..total {
        let mut rem = flat;
        for w in omega.iter_mut().rev() {
            let k = (rem % len) as i64 - d;
            rem /= len;
            *w = -std::f64::consts::PI * k as f64;
        }
        let phase: f64 = mu.iter().zip(&omega).map(|(m, w)| m * w).sum();
        let mut quad = 0.0;
        for i in 0..dims {
            for j in 0..dims {
                quad += omega[i] * cov[(i, j)] * omega[j];
            }
        }
        coeffs.push(Complex64::from_polar(pref * (-0.5 * quad).exp(), phase));
    }
    SeriesApprox::new(Basis::Fourier, &vec![degree; dims], coeffs)
}

/// Union bound on P(X ∉ [0,1]^D) from the marginal tails.
fn tail_mass_bound(mu: &[f64], cov: &DMatrix<f64>) -> f64 {
    mu.iter()
        .enumerate()
        .map(|(i, &m)| {
            let s = cov[(i, i)].sqrt();
            let lower = 0.5 * libm::erfc(m / (s * std::f64::consts::SQRT_2));
            let upper = 0.5 * libm::erfc((1.0 - m) / (s * std::f64::consts::SQRT_2));
            lower + upper
        })
        .sum()
}
