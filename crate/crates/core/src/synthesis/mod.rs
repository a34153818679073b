//! Circuit builders: coefficient loaders A and C, the Fourier and Chebyshev
//! select operators B, their controlled-power ladders, and full assembly.

mod assemble;
mod chebyshev;
mod fourier;
mod loader;
mod powers;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, GateCounts, RegisterRole};
use crate::error::{invalid, Result};
use crate::grid::{unravel, Convention, GridSpec};
use crate::series::{Basis, SeriesApprox};

pub use assemble::{assemble_lcu, assemble_state_prep, assemble_with, factorize, AssemblyOptions, Factor};
pub use chebyshev::{build_chebyshev_uv, QubitizedWalk};
pub use fourier::{build_fourier_b, build_fourier_b_range, fourier_select_gates};
pub use loader::{build_coefficient_loader, state_loader_gates};
pub use powers::{build_controlled_powers, PowerBase};

/// ⌈log₂ k⌉, with ⌈log₂ 1⌉ = 0.
pub fn ceil_log2(k: usize) -> usize {
    assert!(k > 0);
    (usize::BITS - (k - 1).leading_zeros()) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimPlan {
    pub basis: Basis,
    /// Lowest series index on this axis (−d for symmetric Fourier, 0 for Chebyshev).
    pub lower: i64,
    /// Number of coefficients K.
    pub len: usize,
    /// Coefficient ancillas a = ⌈log₂ K⌉.
    pub coeff_qubits: usize,
    /// Block-encoding ancillas b (0 for Fourier, ⌈log₂ n⌉ for Chebyshev).
    pub be_qubits: usize,
    /// Main register width n.
    pub main_qubits: usize,
}

impl DimPlan {
    pub fn degree(&self) -> usize {
        let hi = self.lower + self.len as i64 - 1;
        self.lower.unsigned_abs().max(hi.unsigned_abs()) as usize
    }
}

/// Everything the loader needs: per-axis sizes plus |c_k|/𝒩 and arg c_k
/// over the zero-padded joint index (dimension 0 in the lowest bits).
#[derive(Debug, Clone, PartialEq)]
pub struct LcuPlan {
    pub dims: Vec<DimPlan>,
    pub magnitudes: Vec<f64>,
    pub phases: Vec<f64>,
    pub norm: f64,
}

fn principal_arg(z: Complex64) -> f64 {
    if z.norm() == 0.0 {
        return 0.0;
    }
    let p = z.arg();
    if p <= -std::f64::consts::PI {
        p + 2.0 * std::f64::consts::PI
    } else {
        p
    }
}

impl LcuPlan {
    pub fn new(s: &SeriesApprox, g: &GridSpec) -> Result<Self> {
        if s.dims() != g.dims() {
            return invalid(format!("series is {}-D, grid is {}-D", s.dims(), g.dims()));
        }
        let conv = match s.basis() {
            Basis::Fourier => Convention::FourierUnit,
            Basis::Chebyshev => Convention::ChebyshevSym,
        };
        if g.convention() != conv {
            return invalid(format!("{:?} series needs a {conv:?} grid", s.basis()));
        }
        if s.norm() == 0.0 {
            return invalid("all series coefficients are zero");
        }
        let dims: Vec<DimPlan> = (0..s.dims())
            .map(|i| {
                let n = g.qubits()[i];
                DimPlan {
                    basis: s.basis(),
                    lower: s.lower()[i],
                    len: s.shape()[i],
                    coeff_qubits: ceil_log2(s.shape()[i]),
                    be_qubits: match s.basis() {
                        Basis::Fourier => 0,
                        Basis::Chebyshev => ceil_log2(n),
                    },
                    main_qubits: n,
                }
            })
            .collect();
        let (magnitudes, phases) = joint_tables(s.coeffs(), s.shape(), s.norm(), &dims);
        Ok(Self {
            dims,
            magnitudes,
            phases,
            norm: s.norm(),
        })
    }

    pub fn coeff_qubits(&self) -> usize {
        self.dims.iter().map(|d| d.coeff_qubits).sum()
    }
}

/// Scatter a row-major coefficient tensor into the padded joint index.
fn joint_tables(coeffs: &[Complex64], shape: &[usize], norm: f64, dims: &[DimPlan]) -> (Vec<f64>, Vec<f64>) {
    let total_bits: usize = dims.iter().map(|d| d.coeff_qubits).sum();
    let mut mags = vec![0.0; 1 << total_bits];
    let mut phases = vec![0.0; 1 << total_bits];
    for (flat, c) in coeffs.iter().enumerate() {
        let j = joint_index(&unravel(flat, shape), dims);
        mags[j] = c.norm() / norm;
        phases[j] = principal_arg(*c);
    }
    (mags, phases)
}

pub(crate) fn joint_index(storage_idx: &[usize], dims: &[DimPlan]) -> usize {
    let mut shift = 0;
    let mut j = 0;
    for (&s, d) in storage_idx.iter().zip(dims) {
        j |= s << shift;
        shift += d.coeff_qubits;
    }
    j
}

/// Qubit totals by register role plus gate counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub main_qubits: usize,
    pub coeff_qubits: usize,
    pub be_qubits: usize,
    pub total_qubits: usize,
    pub gates: GateCounts,
}

pub fn resource_report(c: &Circuit) -> ResourceReport {
    let mut r = ResourceReport {
        main_qubits: 0,
        coeff_qubits: 0,
        be_qubits: 0,
        total_qubits: c.num_qubits(),
        gates: c.count_gates(),
    };
    for reg in c.registers() {
        match reg.role {
            RegisterRole::Main(_) => r.main_qubits += reg.width,
            RegisterRole::CoeffAncilla(_) => r.coeff_qubits += reg.width,
            RegisterRole::BeAncilla(_) => r.be_qubits += reg.width,
        }
    }
    r
}
