use crate::circuit::{Circuit, Gate, RegisterRole};
use crate::error::{invalid, Result};

use super::LcuPlan;

/// Uniformly-controlled-Ry tree taking |0…0⟩ to Σ_k amps[k] |k⟩ for
/// non-negative `amps` of unit norm; k little-endian over `qubits`.
///
/// The most significant qubit is rotated first; qubit t is then rotated
/// under control of qubits t+1.. (one table entry per prefix value).
pub fn state_loader_gates(amps: &[f64], qubits: &[usize]) -> Vec<Gate> {
    let m = qubits.len();
    assert_eq!(amps.len(), 1 << m, "amplitude table must have 2^m entries");
    // weights[t][p] = Σ amps² over indices whose bits t.. equal p.
    let mut weights = vec![amps.iter().map(|a| a * a).collect::<Vec<f64>>()];
    for t in 0..m {
        let prev = &weights[t];
        weights.push((0..prev.len() / 2).map(|p| prev[2 * p] + prev[2 * p + 1]).collect());
    }
    (0..m)
        .rev()
        .map(|t| {
            let level = &weights[t];
            let angles = (0..1usize << (m - t - 1))
                .map(|c| {
                    let (w0, w1) = (level[2 * c], level[2 * c + 1]);
                    if w0 + w1 == 0.0 {
                        0.0
                    } else {
                        2.0 * w1.sqrt().atan2(w0.sqrt())
                    }
                })
                .collect();
            Gate::UniformlyControlledRy {
                controls: qubits[t + 1..].to_vec(),
                target: qubits[t],
                angles,
            }
        })
        .collect()
}

/// Coefficient registers coeff_i (only those with a_i > 0), in dimension order.
pub(crate) fn coeff_registers(c: &mut Circuit, plan: &LcuPlan) -> Result<Vec<usize>> {
    let mut qubits = Vec::new();
    for (i, d) in plan.dims.iter().enumerate() {
        if d.coeff_qubits > 0 {
            qubits.extend(c.add_register(&format!("coeff_{i}"), RegisterRole::CoeffAncilla(i), d.coeff_qubits)?.qubits());
        }
    }
    Ok(qubits)
}

/// Gates of A and of C on the given joint ancilla qubits; with no qubits,
/// C degenerates to a global phase (returned separately).
pub(crate) fn loader_parts(magnitudes: &[f64], phases: &[f64], qubits: &[usize]) -> (Vec<Gate>, Vec<Gate>, f64) {
    let amps: Vec<f64> = magnitudes.iter().map(|m| m.sqrt()).collect();
    let a = state_loader_gates(&amps, qubits);
    if qubits.is_empty() {
        return (a, vec![], phases[0]);
    }
    let c = vec![Gate::DiagonalPhase {
        qubits: qubits.to_vec(),
        phases: phases.to_vec(),
    }];
    (a, c, 0.0)
}

/// A (prepare √(|c_k|/𝒩)) and C (phases e^{iγ_k}) on the joint coefficient register.
pub fn build_coefficient_loader(plan: &LcuPlan) -> Result<(Circuit, Circuit)> {
    let total: f64 = plan.magnitudes.iter().sum();
    if total == 0.0 {
        return invalid("all coefficient magnitudes are zero");
    }
    if (total - 1.0).abs() > 1e-12 {
        return invalid(format!("coefficient magnitudes sum to {total}, expected 1"));
    }
    let mut a = Circuit::new();
    let qubits = coeff_registers(&mut a, plan)?;
    let mut c = a.clone();
    let (ga, gc, phase) = loader_parts(&plan.magnitudes, &plan.phases, &qubits);
    a.extend(ga)?;
    c.extend(gc)?;
    c.add_global_phase(phase);
    Ok((a, c))
}
