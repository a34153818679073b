use std::f64::consts::PI;

use crate::circuit::{Circuit, Gate, RegisterRole};
use crate::error::{invalid, Result};

use super::ceil_log2;

/// π·m/(2^n − 1) with m reduced exactly modulo 2(2^n − 1).
fn grid_angle(m: i128, n: usize) -> f64 {
    let top = (1i128 << n) - 1;
    let r = m.rem_euclid(2 * top);
    PI * r as f64 / top as f64
}

/// Σ_k |k⟩⟨k| ⊗ e^{iπ(k + lower)H^F}: one controlled phase per (ancilla
/// bit i, main qubit j), then the prefix U^{lower} when lower ≠ 0.
pub fn fourier_select_gates(ctrl: &[usize], main: &[usize], lower: i64) -> Vec<Gate> {
    let n = main.len();
    let mut gates = Vec::with_capacity(ctrl.len() * n + n);
    for (i, &c) in ctrl.iter().enumerate() {
        for (j, &t) in main.iter().enumerate() {
            gates.push(Gate::ControlledPhase {
                theta: grid_angle(1i128 << (i + j), n),
                control: c,
                target: t,
            });
        }
    }
    if lower != 0 {
        for (j, &t) in main.iter().enumerate() {
            gates.push(Gate::PhaseShift {
                theta: grid_angle(lower as i128 * (1i128 << j), n),
                target: t,
            });
        }
    }
    gates
}

/// B^F for the index range lower..lower+len on an n-qubit main register.
pub fn build_fourier_b_range(n: usize, lower: i64, len: usize) -> Result<Circuit> {
    if n == 0 {
        return invalid("main register needs at least one qubit");
    }
    if len == 0 {
        return invalid("empty index range");
    }
    let a = ceil_log2(len);
    let mut c = Circuit::new();
    let ctrl = if a > 0 {
        c.add_register("coeff", RegisterRole::CoeffAncilla(0), a)?.qubits()
    } else {
        vec![]
    };
    let main = c.add_register("main", RegisterRole::Main(0), n)?.qubits();
    c.extend(fourier_select_gates(&ctrl, &main, lower))?;
    Ok(c)
}

/// B^F = U^{−d} Σ_k |k⟩⟨k| ⊗ U^k with U = e^{iπH^F}, k ∈ [0, 2d].
pub fn build_fourier_b(n: usize, d: usize) -> Result<Circuit> {
    build_fourier_b_range(n, -(d as i64), 2 * d + 1)
}
