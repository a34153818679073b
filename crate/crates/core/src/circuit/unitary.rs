//! Dense-matrix semantics of the IR. Deliberately independent of the
//! simulator kernels: every gate is expanded to its full local matrix and
//! applied by generic gather/multiply/scatter.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

pub const MAX_UNITARY_QUBITS: usize = 14;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

impl Gate {
    /// Local matrix over `self.qubits()`; local bit t ↔ t-th listed qubit.
    pub fn local_matrix(&self) -> DMatrix<Complex64> {
        let k = self.qubits().len();
        let dim = 1usize << k;
        let diag = |f: &dyn Fn(usize) -> Complex64| DMatrix::from_fn(dim, dim, |r, c| if r == c { f(r) } else { ZERO });
        match self {
            Gate::PhaseShift { theta, .. } => diag(&|x| if x == 1 { Complex64::from_polar(1.0, *theta) } else { ONE }),
            Gate::ControlledPhase { theta, .. } => {
                diag(&|x| if x == 3 { Complex64::from_polar(1.0, *theta) } else { ONE })
            }
            Gate::PauliZ { .. } => diag(&|x| if x == 1 { -ONE } else { ONE }),
            Gate::PauliX { .. } => DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            Gate::Hadamard { .. } => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                DMatrix::from_row_slice(2, 2, &[h, h, h, -h])
            }
            Gate::Cx { .. } => DMatrix::from_fn(4, 4, |r, c| {
                let image = if c & 1 == 1 { c ^ 2 } else { c };
                if r == image {
                    ONE
                } else {
                    ZERO
                }
            }),
            Gate::MultiControlledZ { controls, .. } => diag(&|x| {
                let fires = controls
                    .iter()
                    .enumerate()
                    .all(|(t, c)| ((x >> t) & 1 == 1) != c.open);
                if fires && (x >> controls.len()) & 1 == 1 {
                    -ONE
                } else {
                    ONE
                }
            }),
            Gate::UniformlyControlledRy { controls, angles, .. } => {
                let tbit = 1usize << controls.len();
                DMatrix::from_fn(dim, dim, |r, c| {
                    if r & !tbit != c & !tbit {
                        return ZERO;
                    }
                    let half = 0.5 * angles[c & !tbit];
                    let (s, co) = half.sin_cos();
                    // Ry = [[cos, −sin], [sin, cos]]
                    let v = match (r & tbit != 0, c & tbit != 0) {
                        (false, false) | (true, true) => co,
                        (false, true) => -s,
                        (true, false) => s,
                    };
                    Complex64::new(v, 0.0)
                })
            }
            Gate::DiagonalPhase { phases, .. } => diag(&|x| Complex64::from_polar(1.0, phases[x])),
        }
    }
}

fn apply_local(col: &mut [Complex64], qubits: &[usize], m: &DMatrix<Complex64>) {
    let dim = m.nrows();
    let mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
    let offsets: Vec<usize> = (0..dim)
        .map(|x| {
            qubits
                .iter()
                .enumerate()
                .filter(|(t, _)| (x >> t) & 1 == 1)
                .map(|(_, &q)| 1usize << q)
                .sum()
        })
        .collect();
    let mut buf = vec![ZERO; dim];
    for base in 0..col.len() {
        if base & mask != 0 {
            continue;
        }
        for (x, b) in buf.iter_mut().enumerate() {
            *b = col[base + offsets[x]];
        }
        for r in 0..dim {
            let mut acc = ZERO;
            for c in 0..dim {
                acc += m[(r, c)] * buf[c];
            }
            col[base + offsets[r]] = acc;
        }
    }
}

fn check_size(c: &Circuit) -> Result<usize> {
    let q = c.num_qubits();
    if q > MAX_UNITARY_QUBITS {
        return Err(Error::ResourceLimit {
            what: "dense unitary qubits",
            requested: q,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    Ok(q)
}

/// Columns `cols` of the circuit unitary (images of those basis states).
pub fn unitary_columns(c: &Circuit, cols: &[usize]) -> Result<Vec<Vec<Complex64>>> {
    let q = check_size(c)?;
    let dim = 1usize << q;
    let mats: Vec<(Vec<usize>, DMatrix<Complex64>)> =
        c.gates().iter().map(|g| (g.qubits(), g.local_matrix())).collect();
    let phase = Complex64::from_polar(1.0, c.global_phase());
    Ok(cols
        .par_iter()
        .map(|&j| {
            let mut col = vec![ZERO; dim];
            col[j] = ONE;
            for (qs, m) in &mats {
                apply_local(&mut col, qs, m);
            }
            col.iter_mut().for_each(|v| *v *= phase);
            col
        })
        .collect())
}

/// Full 2^Q × 2^Q unitary, gates applied in list order.
pub fn to_unitary(c: &Circuit) -> Result<DMatrix<Complex64>> {
    let q = check_size(c)?;
    let dim = 1usize << q;
    let cols: Vec<usize> = (0..dim).collect();
    let data = unitary_columns(c, &cols)?;
    Ok(DMatrix::from_fn(dim, dim, |r, col| data[col][r]))
}
