use crate::circuit::{Circuit, Gate, RegisterRole};
use crate::error::{invalid, Result};

use super::chebyshev::QubitizedWalk;

/// The operator U whose controlled powers are wanted, and how to build them.
#[derive(Debug, Clone, Copy)]
pub enum PowerBase<'a> {
    /// Any circuit: bit i controls 2^i copies of controlled-U.
    Plain(&'a Circuit),
    /// A circuit of uncontrolled phase shifts only: U^{2^i} is the same
    /// circuit with angles scaled by 2^i, one controlled phase per gate.
    PhaseDiagonal(&'a Circuit),
    /// The qubitized walk, with the A_V and B_V control elisions.
    Walk(&'a QubitizedWalk),
}

/// Σ_k |k⟩⟨k| ⊗ U^k on a new a-qubit register "coeff" (little-endian k)
/// followed by the base registers.
pub fn build_controlled_powers(base: PowerBase<'_>, a: usize) -> Result<Circuit> {
    if a == 0 {
        return invalid("controlled powers need at least one ancilla");
    }
    let mut c = Circuit::new();
    let ctrl = c.add_register("coeff", RegisterRole::CoeffAncilla(0), a)?.qubits();
    match base {
        PowerBase::Walk(w) => {
            let be = if w.be_qubits() > 0 {
                c.add_register("be", RegisterRole::BeAncilla(0), w.be_qubits())?.qubits()
            } else {
                vec![]
            };
            let main = c.add_register("main", RegisterRole::Main(0), w.main_qubits())?.qubits();
            c.extend(w.controlled_powers(&ctrl, &be, &main))?;
        }
        PowerBase::Plain(u) | PowerBase::PhaseDiagonal(u) => {
            for r in u.registers() {
                c.add_register(&r.name, r.role, r.width)?;
            }
            let map: Vec<usize> = (a..a + u.num_qubits()).collect();
            if let PowerBase::PhaseDiagonal(_) = base {
                for (i, &q) in ctrl.iter().enumerate() {
                    let scale = (1u64 << i) as f64;
                    for g in u.gates() {
                        let Gate::PhaseShift { theta, target } = *g else {
                            return invalid("phase-diagonal base may only hold PhaseShift gates");
                        };
                        c.push(Gate::ControlledPhase {
                            theta: theta * scale,
                            control: q,
                            target: map[target],
                        })?;
                    }
                    if u.global_phase() != 0.0 {
                        c.push(Gate::PhaseShift {
                            theta: u.global_phase() * scale,
                            target: q,
                        })?;
                    }
                }
            } else {
                for (i, &q) in ctrl.iter().enumerate() {
                    for _ in 0..1usize << i {
                        c.extend(u.controlled_gates(q, &map))?;
                    }
                }
            }
        }
    }
    Ok(c)
}
