//! Plain-text listing, one gate per line, qubits shown as register[index].

use std::fmt;

use super::{Circuit, Gate};

impl Circuit {
    fn label(&self, q: usize) -> String {
        self.registers()
            .iter()
            .find(|r| r.contains(q))
            .map(|r| format!("{}[{}]", r.name, q - r.offset))
            .unwrap_or_else(|| format!("?{q}"))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.registers() {
            writeln!(f, "# {} {:?} width {}", r.name, r.role, r.width)?;
        }
        if self.global_phase() != 0.0 {
            writeln!(f, "# global phase {:.6}", self.global_phase())?;
        }
        let l = |q: usize| self.label(q);
        for g in self.gates() {
            match g {
                Gate::PhaseShift { theta, target } => writeln!(f, "P({theta:.6}) {}", l(*target))?,
                Gate::ControlledPhase { theta, control, target } => {
                    writeln!(f, "CP({theta:.6}) {} -> {}", l(*control), l(*target))?
                }
                Gate::PauliX { target } => writeln!(f, "X {}", l(*target))?,
                Gate::PauliZ { target } => writeln!(f, "Z {}", l(*target))?,
                Gate::Hadamard { target } => writeln!(f, "H {}", l(*target))?,
                Gate::Cx { control, target } => writeln!(f, "CX {} -> {}", l(*control), l(*target))?,
                Gate::MultiControlledZ { controls, target } => {
                    let cs: Vec<String> = controls
                        .iter()
                        .map(|c| format!("{}{}", if c.open { "!" } else { "" }, l(c.qubit)))
                        .collect();
                    writeln!(f, "MCZ [{}] -> {}", cs.join(" "), l(*target))?
                }
                Gate::UniformlyControlledRy { controls, target, angles } => {
                    let cs: Vec<String> = controls.iter().map(|&q| l(q)).collect();
                    writeln!(f, "UCRy[{}] [{}] -> {}", angles.len(), cs.join(" "), l(*target))?
                }
                Gate::DiagonalPhase { qubits, phases } => {
                    let qs: Vec<String> = qubits.iter().map(|&q| l(q)).collect();
                    writeln!(f, "Diag[{}] [{}]", phases.len(), qs.join(" "))?
                }
            }
        }
        Ok(())
    }
}
