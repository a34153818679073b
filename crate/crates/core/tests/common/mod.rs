#![allow(dead_code)]

use lcu_prep::circuit::{unitary_columns, Circuit, RegisterRole};
use lcu_prep::series::{Basis, DomainKind, SeriesApprox, TargetFunction};
use lcu_prep::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coeffs(r: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| c64(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect()
}

pub fn random_series(r: &mut ChaCha8Rng, basis: Basis, degrees: &[usize]) -> SeriesApprox {
    let len: usize = degrees
        .iter()
        .map(|&d| if basis == Basis::Fourier { 2 * d + 1 } else { d + 1 })
        .product();
    SeriesApprox::new(basis, degrees, random_coeffs(r, len)).unwrap()
}

/// 2D Ricker wavelet (σ given), written out independently of the library.
pub fn ricker(sigma: f64) -> TargetFunction {
    TargetFunction::real(2, DomainKind::Symmetric, move |p| {
        let r2 = (p[0] * p[0] + p[1] * p[1]) / (2.0 * sigma * sigma);
        (1.0 - r2) * (-r2).exp() / (std::f64::consts::PI * sigma.powi(4))
    })
}

/// Bivariate Student's t, ν = 1, μ = (0.5, 0.5), Σ = 0.05·I.
pub fn student_t() -> TargetFunction {
    let (s00, s01, s11) = (0.05, 0.0, 0.05);
    let det = s00 * s11 - s01 * s01;
    TargetFunction::real(2, DomainKind::UnitCube, move |p| {
        let (dx, dy) = (p[0] - 0.5, p[1] - 0.5);
        let q = (s11 * dx * dx - 2.0 * s01 * dx * dy + s00 * dy * dy) / det;
        1.0 / (2.0 * std::f64::consts::PI * det.sqrt()) * (1.0 + q).powf(-1.5)
    })
}

/// Offsets of all ancilla qubits and of the main register of dimension 0..D.
pub fn main_offsets(c: &Circuit) -> Vec<(usize, usize)> {
    let mut m: Vec<(usize, usize, usize)> = c
        .registers()
        .iter()
        .filter_map(|r| match r.role {
            RegisterRole::Main(d) => Some((d, r.offset, r.width)),
            _ => None,
        })
        .collect();
    m.sort();
    m.into_iter().map(|(_, o, w)| (o, w)).collect()
}

/// ⟨0_anc, x| U |0_anc, y⟩ for a single main register.
pub fn top_left_block(c: &Circuit) -> Vec<Vec<Complex64>> {
    let mains = main_offsets(c);
    assert_eq!(mains.len(), 1);
    let (off, width) = mains[0];
    let cols: Vec<usize> = (0..1usize << width).map(|y| y << off).collect();
    let data = unitary_columns(c, &cols).unwrap();
    (0..1usize << width)
        .map(|x| data.iter().map(|col| col[x << off]).collect())
        .collect()
}

/// max |a·e^{iφ} − b| with φ chosen at the largest |a| entry.
pub fn phase_aligned_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let i = (0..a.len())
        .max_by(|&i, &j| a[i].norm().partial_cmp(&a[j].norm()).unwrap())
        .unwrap();
    let rot = if a[i].norm() == 0.0 { c64(1.0, 0.0) } else { b[i] / a[i] };
    let rot = rot / rot.norm();
    a.iter().zip(b).map(|(x, y)| (x * rot - y).norm()).fold(0.0, f64::max)
}

/// Fourier coefficients (d = 3) of the demonstration Gaussians:
/// μ = (0.5, 0.5), σ = (0.22, 0.18), correlation ρ.
pub fn demo_gaussian(rho: f64) -> SeriesApprox {
    let (sx, sy) = (0.22, 0.18);
    let cov = [sx * sx, rho * sx * sy, rho * sx * sy, sy * sy];
    lcu_prep::series::gaussian_fourier_coeffs(&[0.5, 0.5], &cov, 3).unwrap()
}

/// |f_d| on the 2^n × 2^n Fourier grid, row-major.
pub fn abs_on_grid(s: &SeriesApprox, n: usize) -> (Vec<f64>, Vec<f64>) {
    let axis = lcu_prep::grid::grid_points(lcu_prep::grid::Convention::FourierUnit, n).unwrap();
    let vals = lcu_prep::series::evaluate_on_grid(s, &[axis.clone(), axis.clone()]).unwrap();
    (vals.iter().map(|v| v.norm()).collect(), axis)
}

/// Row-major tensor grid of 3D points from one axis.
pub fn cube_points(axis: &[f64]) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(axis.len().pow(3));
    for &x in axis {
        for &y in axis {
            for &z in axis {
                out.push([x, y, z]);
            }
        }
    }
    out
}
