use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, RegisterRole};
use crate::error::Result;
use crate::grid::GridSpec;
use crate::series::{Basis, SeriesApprox};

use super::chebyshev::QubitizedWalk;
use super::fourier::fourier_select_gates;
use super::loader::loader_parts;
use super::{joint_tables, DimPlan, LcuPlan};

/// Singular-value ratio below which an unfolding counts as rank one.
pub const RANK_ONE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyOptions {
    /// Split an exactly separable coefficient tensor into independent loaders.
    pub factorize: bool,
    /// Start the main registers in |+⟩^{⊗n} (state preparation); without it
    /// the circuit is the bare block-encoding A†CB⋯A.
    pub hadamard_layer: bool,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self {
            factorize: true,
            hadamard_layer: true,
        }
    }
}

/// Coefficients over a subset of dimensions, row-major in that subset's order.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub dims: Vec<usize>,
    pub coeffs: Vec<Complex64>,
}

/// Peel off leading dimensions while the tensor is an outer product
/// (leading axis) ⊗ (rest), judged by σ₂/σ₁ of the unfolding.
pub fn factorize(s: &SeriesApprox) -> Vec<Factor> {
    let shape = s.shape();
    let mut dims: Vec<usize> = (0..s.dims()).collect();
    let mut tensor = s.coeffs().to_vec();
    let mut out = Vec::new();
    while dims.len() > 1 {
        let rows = shape[dims[0]];
        let cols = tensor.len() / rows;
        let m = DMatrix::from_row_slice(rows, cols, &tensor);
        let svd = m.svd(true, true);
        let sv = &svd.singular_values;
        let i1 = sv.imax();
        let s1 = sv[i1];
        let s2 = sv.iter().enumerate().filter(|&(i, _)| i != i1).map(|(_, &v)| v).fold(0.0, f64::max);
        if s1 == 0.0 || s2 >= RANK_ONE_TOL * s1 {
            break;
        }
        let u = svd.u.as_ref().expect("requested U");
        let vt = svd.v_t.as_ref().expect("requested Vᵀ");
        out.push(Factor {
            dims: vec![dims[0]],
            coeffs: u.column(i1).iter().map(|z| z * s1).collect(),
        });
        tensor = vt.row(i1).iter().copied().collect();
        dims.remove(0);
    }
    out.push(Factor { dims, coeffs: tensor });
    out
}

/// Registers: coeff_0..coeff_{D−1}, then (be_i, main_i) per dimension.
pub fn assemble_with(s: &SeriesApprox, g: &GridSpec, opts: AssemblyOptions) -> Result<Circuit> {
    let plan = LcuPlan::new(s, g)?;
    let factors = if opts.factorize {
        factorize(s)
    } else {
        vec![Factor {
            dims: (0..s.dims()).collect(),
            coeffs: s.coeffs().to_vec(),
        }]
    };

    let mut c = Circuit::new();
    let mut coeff = Vec::new();
    for (i, d) in plan.dims.iter().enumerate() {
        coeff.push(if d.coeff_qubits > 0 {
            c.add_register(&format!("coeff_{i}"), RegisterRole::CoeffAncilla(i), d.coeff_qubits)?
                .qubits()
        } else {
            vec![]
        });
    }
    let mut be = Vec::new();
    let mut main = Vec::new();
    for (i, d) in plan.dims.iter().enumerate() {
        be.push(if d.be_qubits > 0 {
            c.add_register(&format!("be_{i}"), RegisterRole::BeAncilla(i), d.be_qubits)?.qubits()
        } else {
            vec![]
        });
        main.push(c.add_register(&format!("main_{i}"), RegisterRole::Main(i), d.main_qubits)?.qubits());
    }

    if opts.hadamard_layer {
        c.extend(main.iter().flatten().map(|&t| Gate::Hadamard { target: t }))?;
    }

    for f in &factors {
        let sub: Vec<DimPlan> = f.dims.iter().map(|&i| plan.dims[i]).collect();
        let shape: Vec<usize> = sub.iter().map(|d| d.len).collect();
        let norm: f64 = f.coeffs.iter().map(|z| z.norm()).sum();
        let (mags, phases) = joint_tables(&f.coeffs, &shape, norm, &sub);
        let qubits: Vec<usize> = f.dims.iter().flat_map(|&i| coeff[i].iter().copied()).collect();
        let (ga, gc, phase) = loader_parts(&mags, &phases, &qubits);

        c.extend(ga.iter().cloned())?;
        for &i in &f.dims {
            let d = &plan.dims[i];
            match d.basis {
                Basis::Fourier => c.extend(fourier_select_gates(&coeff[i], &main[i], d.lower))?,
                Basis::Chebyshev => {
                    if !coeff[i].is_empty() {
                        let w = QubitizedWalk::new(d.main_qubits)?;
                        c.extend(w.controlled_powers(&coeff[i], &be[i], &main[i]))?;
                    }
                }
            }
        }
        c.extend(gc)?;
        c.add_global_phase(phase);
        c.extend(ga.iter().rev().map(Gate::inverse))?;
    }
    Ok(c)
}

/// Full state-preparation circuit: |+⟩ layer, then A, B_1..B_D, C, A†,
/// with separable coefficient tensors split into independent loaders.
pub fn assemble_state_prep(s: &SeriesApprox, g: &GridSpec) -> Result<Circuit> {
    assemble_with(s, g, AssemblyOptions::default())
}

/// The bare joint block-encoding A†·C·B_D⋯B_1·A (no |+⟩ layer, no factorization).
pub fn assemble_lcu(s: &SeriesApprox, g: &GridSpec) -> Result<Circuit> {
    assemble_with(
        s,
        g,
        AssemblyOptions {
            factorize: false,
            hadamard_layer: false,
        },
    )
}
