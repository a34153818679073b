//! Uniform main-register grids and the diagonal grid operators.
//!
//! Basis state |x⟩ of an n-qubit register is identified with grid value
//! number x = Σ_j 2^j x_j (little-endian: bit j lives on qubit j).

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// x_j = j/(2^n − 1) on [0, 1]; used with Fourier series.
    FourierUnit,
    /// x_j = 2j/(2^n − 1) − 1 on [−1, 1]; used with Chebyshev series.
    ChebyshevSym,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    qubits: Vec<usize>,
    convention: Convention,
}

/// Largest register width accepted anywhere; keeps 2^n well inside usize.
pub const MAX_REGISTER_QUBITS: usize = 40;

impl GridSpec {
    pub fn new(qubits: Vec<usize>, convention: Convention) -> Result<Self> {
        if qubits.is_empty() {
            return invalid("grid needs at least one dimension");
        }
        if let Some(&n) = qubits.iter().find(|&&n| n == 0 || n > MAX_REGISTER_QUBITS) {
            return invalid(format!("grid register width {n} out of range 1..={MAX_REGISTER_QUBITS}"));
        }
        Ok(Self { qubits, convention })
    }

    pub fn uniform(dims: usize, n: usize, convention: Convention) -> Result<Self> {
        Self::new(vec![n; dims], convention)
    }

    pub fn dims(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn total_qubits(&self) -> usize {
        self.qubits.iter().sum()
    }

    /// Points per axis, 2^{n_i}.
    pub fn shape(&self) -> Vec<usize> {
        self.qubits.iter().map(|&n| 1usize << n).collect()
    }

    pub fn len(&self) -> usize {
        1usize << self.total_qubits()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid values along every axis.
    pub fn axes(&self) -> Vec<Vec<f64>> {
        self.qubits
            .iter()
            .map(|&n| axis(self.convention, n))
            .collect()
    }

    /// Coordinates of the grid point with row-major flat index `flat`
    /// (dimension 0 slowest).
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let shape = self.shape();
        let idx = unravel(flat, &shape);
        idx.iter()
            .zip(&self.qubits)
            .map(|(&j, &n)| value(self.convention, n, j))
            .collect()
    }
}

fn value(convention: Convention, n: usize, j: usize) -> f64 {
    let top = ((1u64 << n) - 1) as f64;
    match convention {
        Convention::FourierUnit => j as f64 / top,
        Convention::ChebyshevSym => 2.0 * j as f64 / top - 1.0,
    }
}

fn axis(convention: Convention, n: usize) -> Vec<f64> {
    let len = 1usize << n;
    let mut v: Vec<f64> = (0..len).map(|j| value(convention, n, j)).collect();
    // Pin endpoints; j/top rounding already gives them but be explicit.
    v[0] = match convention {
        Convention::FourierUnit => 0.0,
        Convention::ChebyshevSym => -1.0,
    };
    v[len - 1] = 1.0;
    v
}

/// The 2^n grid values for one register.
pub fn grid_points(convention: Convention, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > MAX_REGISTER_QUBITS {
        return invalid(format!("register width {n} out of range 1..={MAX_REGISTER_QUBITS}"));
    }
    Ok(axis(convention, n))
}

/// Diagonal of H^F or H^C; entry x is the grid value of basis state |x⟩.
pub fn grid_operator_diag(convention: Convention, n: usize) -> Result<Vec<f64>> {
    grid_points(convention, n)
}

/// Row-major multi-index of `flat` in a tensor of the given shape.
pub fn unravel(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for (slot, &s) in idx.iter_mut().zip(shape).rev() {
        *slot = flat % s;
        flat /= s;
    }
    idx
}

pub fn ravel(idx: &[usize], shape: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (&i, &s)| acc * s + i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_grids() {
        let f = grid_points(Convention::FourierUnit, 2).unwrap();
        let c = grid_points(Convention::ChebyshevSym, 2).unwrap();
        let third = 1.0 / 3.0;
        for (a, b) in f.iter().zip([0.0, third, 2.0 * third, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in c.iter().zip([-1.0, -third, third, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(grid_points(Convention::FourierUnit, 1).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn zero_width_rejected() {
        assert!(grid_points(Convention::FourierUnit, 0).is_err());
        assert!(GridSpec::new(vec![], Convention::FourierUnit).is_err());
        assert!(GridSpec::new(vec![3, 0], Convention::FourierUnit).is_err());
    }

    #[test]
    fn chebyshev_endpoints_and_norm() {
        let d = grid_operator_diag(Convention::ChebyshevSym, 3).unwrap();
        assert_eq!(d[0], -1.0);
        assert_eq!(d[7], 1.0);
        for n in 1..=10 {
            for conv in [Convention::FourierUnit, Convention::ChebyshevSym] {
                let m = grid_operator_diag(conv, n)
                    .unwrap()
                    .iter()
                    .fold(0.0f64, |m, v| m.max(v.abs()));
                assert_eq!(m, 1.0);
            }
        }
    }

    #[test]
    fn chebyshev_is_affine_image_of_fourier() {
        for n in 1..=10 {
            let f = grid_operator_diag(Convention::FourierUnit, n).unwrap();
            let c = grid_operator_diag(Convention::ChebyshevSym, n).unwrap();
            for (hf, hc) in f.iter().zip(&c) {
                assert!((2.0 * hf - 1.0 - hc).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn chebyshev_diag_is_weighted_pauli_z_sum() {
        for n in 1..=10usize {
            let c = grid_operator_diag(Convention::ChebyshevSym, n).unwrap();
            let top = ((1u64 << n) - 1) as f64;
            for (x, hc) in c.iter().enumerate() {
                let s: f64 = (0..n)
                    .map(|j| {
                        let z = if (x >> j) & 1 == 0 { 1.0 } else { -1.0 };
                        -((1u64 << j) as f64) / top * z
                    })
                    .sum();
                assert!((s - hc).abs() < 1e-14, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn ravel_roundtrip() {
        let shape = [3, 4, 5];
        for f in 0..60 {
            assert_eq!(ravel(&unravel(f, &shape), &shape), f);
        }
        let g = GridSpec::new(vec![1, 2], Convention::FourierUnit).unwrap();
        assert_eq!(g.point(5), vec![1.0, 1.0 / 3.0]);
    }
}
