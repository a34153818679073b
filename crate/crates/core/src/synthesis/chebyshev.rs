//! Qubitized block-encoding of H^C = Σ_j (2^j/(2^n−1)) X_j Z_j X_j.

use std::f64::consts::PI;

use crate::circuit::{Circuit, Control, Gate, RegisterRole};
use crate::error::{invalid, Result};

use super::ceil_log2;
use super::loader::state_loader_gates;

/// U_V = R · A_V† · B_V · A_V on b = ⌈log₂ n⌉ block-encoding ancillas
/// and n main qubits. ⟨0|U_V|0⟩ = H^C and ⟨0|U_V^k|0⟩ = T_k(H^C).
#[derive(Debug, Clone, PartialEq)]
pub struct QubitizedWalk {
    n: usize,
    b: usize,
    amps: Vec<f64>,
}

impl QubitizedWalk {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("main register needs at least one qubit");
        }
        let b = ceil_log2(n);
        let top = ((1u64 << n) - 1) as f64;
        let amps = (0..1usize << b)
            .map(|j| if j < n { ((1u64 << j) as f64 / top).sqrt() } else { 0.0 })
            .collect();
        Ok(Self { n, b, amps })
    }

    pub fn main_qubits(&self) -> usize {
        self.n
    }

    pub fn be_qubits(&self) -> usize {
        self.b
    }

    /// A_V: |0⟩ → Σ_j √(2^j/(2^n−1)) |j⟩.
    pub fn prepare(&self, be: &[usize]) -> Vec<Gate> {
        state_loader_gates(&self.amps, be)
    }

    pub fn unprepare(&self, be: &[usize]) -> Vec<Gate> {
        self.prepare(be).iter().rev().map(Gate::inverse).collect()
    }

    /// B_V = Σ_j |j⟩⟨j| ⊗ X_j Z_j X_j, optionally with one more control.
    pub fn select(&self, be: &[usize], main: &[usize], ctrl: Option<usize>) -> Vec<Gate> {
        let mut gates = Vec::with_capacity(3 * self.n);
        for (j, &t) in main.iter().enumerate() {
            let mut controls: Vec<Control> = be
                .iter()
                .enumerate()
                .map(|(bit, &q)| Control { qubit: q, open: (j >> bit) & 1 == 0 })
                .collect();
            controls.extend(ctrl.map(Control::closed));
            gates.push(Gate::PauliX { target: t });
            gates.push(if controls.is_empty() {
                Gate::PauliZ { target: t }
            } else {
                Gate::MultiControlledZ { controls, target: t }
            });
            gates.push(Gate::PauliX { target: t });
        }
        gates
    }

    /// R = 2|0⟩⟨0| − I up to a global −1: X · MCZ(open rest) · X on be[0].
    /// The caller adds the global phase π.
    fn reflect_up_to_sign(&self, be: &[usize]) -> Vec<Gate> {
        let Some((&first, rest)) = be.split_first() else {
            return vec![];
        };
        let controls: Vec<Control> = rest.iter().map(|&q| Control::open(q)).collect();
        vec![
            Gate::PauliX { target: first },
            if controls.is_empty() {
                Gate::PauliZ { target: first }
            } else {
                Gate::MultiControlledZ { controls, target: first }
            },
            Gate::PauliX { target: first },
        ]
    }

    /// Controlled R, exact: Z on the control, then −1 unless all ancillas are 0.
    pub fn controlled_reflect(&self, be: &[usize], ctrl: usize) -> Vec<Gate> {
        if be.is_empty() {
            return vec![];
        }
        vec![
            Gate::PauliZ { target: ctrl },
            Gate::MultiControlledZ {
                controls: be.iter().map(|&q| Control::open(q)).collect(),
                target: ctrl,
            },
        ]
    }

    /// U_V gates plus the global phase it carries.
    pub fn walk(&self, be: &[usize], main: &[usize]) -> (Vec<Gate>, f64) {
        let mut g = self.prepare(be);
        g.extend(self.select(be, main, None));
        g.extend(self.unprepare(be));
        g.extend(self.reflect_up_to_sign(be));
        (g, if be.is_empty() { 0.0 } else { PI })
    }

    /// Σ_k |k⟩⟨k| ⊗ U_V^k over `ctrl` with the control elisions: A_V and
    /// A_V† are never controlled, and inside each U_V² pair only R is.
    pub fn controlled_powers(&self, ctrl: &[usize], be: &[usize], main: &[usize]) -> Vec<Gate> {
        let mut g = Vec::new();
        for (i, &q) in ctrl.iter().enumerate() {
            if i == 0 {
                g.extend(self.prepare(be));
                g.extend(self.select(be, main, Some(q)));
                g.extend(self.unprepare(be));
                g.extend(self.controlled_reflect(be, q));
                continue;
            }
            for _ in 0..2 * (1usize << (i - 1)) {
                g.extend(self.prepare(be));
                g.extend(self.select(be, main, None));
                g.extend(self.unprepare(be));
                g.extend(self.controlled_reflect(be, q));
            }
        }
        g
    }

    /// Standalone circuit: registers "be" (if b > 0) and "main".
    pub fn to_circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new();
        let be = if self.b > 0 {
            c.add_register("be", RegisterRole::BeAncilla(0), self.b)?.qubits()
        } else {
            vec![]
        };
        let main = c.add_register("main", RegisterRole::Main(0), self.n)?.qubits();
        let (g, phase) = self.walk(&be, &main);
        c.extend(g)?;
        c.add_global_phase(phase);
        Ok(c)
    }
}

/// The qubitized walk operator U_V for an n-qubit main register.
pub fn build_chebyshev_uv(n: usize) -> Result<Circuit> {
    QubitizedWalk::new(n)?.to_circuit()
}
