//! Gate-level circuit IR.
//!
//! Qubits are addressed by global index; registers are contiguous slices of
//! that index space, declared in order. Multi-qubit tables (controls of a
//! uniformly controlled rotation, qubits of a diagonal) are indexed
//! little-endian over the listed qubits: entry Σ_t 2^t b_t where b_t is
//! the bit on the t-th listed qubit.

mod display;
mod json;
mod unitary;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use json::CircuitFile;
pub use unitary::{to_unitary, unitary_columns, MAX_UNITARY_QUBITS};

/// Widest gate table (controls or diagonal qubits) accepted.
pub const MAX_TABLE_QUBITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "dim", rename_all = "snake_case")]
pub enum RegisterRole {
    Main(usize),
    CoeffAncilla(usize),
    BeAncilla(usize),
}

impl RegisterRole {
    pub fn is_ancilla(self) -> bool {
        !matches!(self, RegisterRole::Main(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub role: RegisterRole,
    pub width: usize,
    /// Global index of qubit 0 of this register.
    #[serde(skip)]
    pub offset: usize,
}

impl Register {
    pub fn qubit(&self, i: usize) -> usize {
        assert!(i < self.width, "qubit {i} outside register {} of width {}", self.name, self.width);
        self.offset + i
    }

    pub fn qubits(&self) -> Vec<usize> {
        (self.offset..self.offset + self.width).collect()
    }

    pub fn contains(&self, q: usize) -> bool {
        (self.offset..self.offset + self.width).contains(&q)
    }
}

/// A control line; `open` controls fire on |0⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub open: bool,
}

impl Control {
    pub fn closed(qubit: usize) -> Self {
        Self { qubit, open: false }
    }

    pub fn open(qubit: usize) -> Self {
        Self { qubit, open: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// diag(1, e^{iθ})
    PhaseShift { theta: f64, target: usize },
    ControlledPhase { theta: f64, control: usize, target: usize },
    PauliX { target: usize },
    PauliZ { target: usize },
    Hadamard { target: usize },
    Cx { control: usize, target: usize },
    /// −1 on the target's |1⟩ when every control matches its polarity.
    MultiControlledZ { controls: Vec<Control>, target: usize },
    /// Ry(angles[c]) on the target, c the control value; Ry(θ) = exp(−iθY/2).
    UniformlyControlledRy { controls: Vec<usize>, target: usize, angles: Vec<f64> },
    /// diag(e^{iφ_x}) over the listed qubits.
    DiagonalPhase { qubits: Vec<usize>, phases: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateKind {
    PhaseShift,
    ControlledPhase,
    PauliX,
    PauliZ,
    Hadamard,
    CX,
    MultiControlledZ,
    UniformlyControlledRy,
    DiagonalPhase,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Gate {
    pub fn ry(theta: f64, target: usize) -> Self {
        Gate::UniformlyControlledRy {
            controls: vec![],
            target,
            angles: vec![theta],
        }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::PhaseShift { .. } => GateKind::PhaseShift,
            Gate::ControlledPhase { .. } => GateKind::ControlledPhase,
            Gate::PauliX { .. } => GateKind::PauliX,
            Gate::PauliZ { .. } => GateKind::PauliZ,
            Gate::Hadamard { .. } => GateKind::Hadamard,
            Gate::Cx { .. } => GateKind::CX,
            Gate::MultiControlledZ { .. } => GateKind::MultiControlledZ,
            Gate::UniformlyControlledRy { .. } => GateKind::UniformlyControlledRy,
            Gate::DiagonalPhase { .. } => GateKind::DiagonalPhase,
        }
    }

    /// Every qubit the gate touches, controls first, target last.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::PhaseShift { target, .. }
            | Gate::PauliX { target }
            | Gate::PauliZ { target }
            | Gate::Hadamard { target } => vec![*target],
            Gate::ControlledPhase { control, target, .. } | Gate::Cx { control, target } => {
                vec![*control, *target]
            }
            Gate::MultiControlledZ { controls, target } => {
                controls.iter().map(|c| c.qubit).chain([*target]).collect()
            }
            Gate::UniformlyControlledRy { controls, target, .. } => {
                controls.iter().copied().chain([*target]).collect()
            }
            Gate::DiagonalPhase { qubits, .. } => qubits.clone(),
        }
    }

    /// CX-equivalent cost under the fixed decomposition table.
    pub fn cx_cost(&self) -> usize {
        match self {
            Gate::PhaseShift { .. } | Gate::PauliX { .. } | Gate::PauliZ { .. } | Gate::Hadamard { .. } => 0,
            Gate::ControlledPhase { .. } => 2,
            Gate::Cx { .. } => 1,
            Gate::MultiControlledZ { controls, .. } => match controls.len() {
                0 => 0,
                1 => 1,
                2 => 6,
                b => 8 * b - 20,
            },
            Gate::UniformlyControlledRy { controls, .. } => match controls.len() {
                0 => 0,
                c => 1 << c,
            },
            Gate::DiagonalPhase { qubits, .. } => (1usize << qubits.len()) - 2,
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= num_qubits {
                return invalid(format!("{:?} references qubit {q}, circuit has {num_qubits}", self.kind()));
            }
            if qs[..i].contains(&q) {
                return invalid(format!("{:?} references qubit {q} twice", self.kind()));
            }
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Gate::PhaseShift { theta, .. } | Gate::ControlledPhase { theta, .. } if !theta.is_finite() => {
                invalid("non-finite phase angle")
            }
            Gate::UniformlyControlledRy { controls, angles, .. } => {
                if controls.len() > MAX_TABLE_QUBITS {
                    return invalid("too many rotation controls");
                }
                if angles.len() != 1 << controls.len() {
                    return invalid(format!(
                        "rotation table has {} angles for {} controls",
                        angles.len(),
                        controls.len()
                    ));
                }
                if !finite(angles) {
                    return invalid("non-finite rotation angle");
                }
                Ok(())
            }
            Gate::DiagonalPhase { qubits, phases } => {
                if qubits.is_empty() || qubits.len() > MAX_TABLE_QUBITS {
                    return invalid("diagonal phase needs 1..=24 qubits");
                }
                if phases.len() != 1 << qubits.len() {
                    return invalid(format!("phase table has {} entries for {} qubits", phases.len(), qubits.len()));
                }
                if !finite(phases) {
                    return invalid("non-finite phase in table");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn inverse(&self) -> Gate {
        match self.clone() {
            Gate::PhaseShift { theta, target } => Gate::PhaseShift { theta: -theta, target },
            Gate::ControlledPhase { theta, control, target } => Gate::ControlledPhase {
                theta: -theta,
                control,
                target,
            },
            Gate::UniformlyControlledRy { controls, target, angles } => Gate::UniformlyControlledRy {
                controls,
                target,
                angles: angles.into_iter().map(|a| -a).collect(),
            },
            Gate::DiagonalPhase { qubits, phases } => Gate::DiagonalPhase {
                qubits,
                phases: phases.into_iter().map(|p| -p).collect(),
            },
            g => g,
        }
    }

    /// The same gate with one more closed control on `ctrl`.
    pub fn controlled(&self, ctrl: usize) -> Vec<Gate> {
        let mcz = |mut controls: Vec<Control>, target| {
            controls.push(Control::closed(ctrl));
            Gate::MultiControlledZ { controls, target }
        };
        match self.clone() {
            Gate::PhaseShift { theta, target } => vec![Gate::ControlledPhase {
                theta,
                control: ctrl,
                target,
            }],
            Gate::ControlledPhase { theta, control, target } => vec![Gate::DiagonalPhase {
                qubits: vec![control, target, ctrl],
                phases: (0..8).map(|x| if x == 7 { theta } else { 0.0 }).collect(),
            }],
            Gate::PauliZ { target } => vec![mcz(vec![], target)],
            Gate::PauliX { target } => vec![
                Gate::Hadamard { target },
                mcz(vec![], target),
                Gate::Hadamard { target },
            ],
            Gate::Cx { control, target } => vec![
                Gate::Hadamard { target },
                mcz(vec![Control::closed(control)], target),
                Gate::Hadamard { target },
            ],
            // H = Ry(π/4)·Z·Ry(−π/4)
            Gate::Hadamard { target } => vec![
                Gate::ry(-FRAC_PI_4, target),
                mcz(vec![], target),
                Gate::ry(FRAC_PI_4, target),
            ],
            Gate::MultiControlledZ { controls, target } => vec![mcz(controls, target)],
            Gate::UniformlyControlledRy { mut controls, target, angles } => {
                let n = angles.len();
                controls.push(ctrl);
                let mut table = vec![0.0; n];
                table.extend(angles);
                vec![Gate::UniformlyControlledRy {
                    controls,
                    target,
                    angles: table,
                }]
            }
            Gate::DiagonalPhase { mut qubits, phases } => {
                let n = phases.len();
                qubits.push(ctrl);
                let mut table = vec![0.0; n];
                table.extend(phases);
                vec![Gate::DiagonalPhase { qubits, phases: table }]
            }
        }
    }

    /// Relabel qubits through `map` (old global index → new global index).
    pub fn remap(&self, map: &[usize]) -> Gate {
        let m = |q: usize| map[q];
        match self.clone() {
            Gate::PhaseShift { theta, target } => Gate::PhaseShift { theta, target: m(target) },
            Gate::ControlledPhase { theta, control, target } => Gate::ControlledPhase {
                theta,
                control: m(control),
                target: m(target),
            },
            Gate::PauliX { target } => Gate::PauliX { target: m(target) },
            Gate::PauliZ { target } => Gate::PauliZ { target: m(target) },
            Gate::Hadamard { target } => Gate::Hadamard { target: m(target) },
            Gate::Cx { control, target } => Gate::Cx {
                control: m(control),
                target: m(target),
            },
            Gate::MultiControlledZ { controls, target } => Gate::MultiControlledZ {
                controls: controls
                    .into_iter()
                    .map(|c| Control { qubit: m(c.qubit), ..c })
                    .collect(),
                target: m(target),
            },
            Gate::UniformlyControlledRy { controls, target, angles } => Gate::UniformlyControlledRy {
                controls: controls.into_iter().map(m).collect(),
                target: m(target),
                angles,
            },
            Gate::DiagonalPhase { qubits, phases } => Gate::DiagonalPhase {
                qubits: qubits.into_iter().map(m).collect(),
                phases,
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    registers: Vec<Register>,
    gates: Vec<Gate>,
    global_phase: f64,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_register(&mut self, name: &str, role: RegisterRole, width: usize) -> Result<Register> {
        if width == 0 {
            return invalid(format!("register {name} has zero width"));
        }
        if name.is_empty() {
            return invalid("register name is empty");
        }
        if self.registers.iter().any(|r| r.name == name) {
            return invalid(format!("duplicate register name {name}"));
        }
        let reg = Register {
            name: name.to_owned(),
            role,
            width,
            offset: self.num_qubits(),
        };
        self.registers.push(reg.clone());
        Ok(reg)
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn register_by_role(&self, role: RegisterRole) -> Option<&Register> {
        self.registers.iter().find(|r| r.role == role)
    }

    pub fn num_qubits(&self) -> usize {
        self.registers.iter().map(|r| r.width).sum()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_global_phase(&mut self, theta: f64) {
        self.global_phase += theta;
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits())?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Append `other`, mapping its qubit q onto `map[q]` of this circuit.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<()> {
        if map.len() != other.num_qubits() {
            return invalid("qubit map length differs from the appended circuit's width");
        }
        for g in &other.gates {
            self.push(g.remap(map))?;
        }
        self.global_phase += other.global_phase;
        Ok(())
    }

    /// Gates in reverse order, each inverted; global phase negated.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            registers: self.registers.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            global_phase: -self.global_phase,
        }
    }

    /// Gate list of this circuit controlled on `ctrl` (a qubit outside it,
    /// after `map` is applied); the global phase becomes a phase shift.
    pub fn controlled_gates(&self, ctrl: usize, map: &[usize]) -> Vec<Gate> {
        let mut out: Vec<Gate> = self
            .gates
            .iter()
            .flat_map(|g| g.remap(map).controlled(ctrl))
            .collect();
        if self.global_phase != 0.0 {
            out.push(Gate::PhaseShift {
                theta: self.global_phase,
                target: ctrl,
            });
        }
        out
    }

    pub fn count_gates(&self) -> GateCounts {
        count_gates(self)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub by_kind: BTreeMap<GateKind, usize>,
    pub cx_equivalent: usize,
}

impl GateCounts {
    pub fn get(&self, kind: GateKind) -> usize {
        self.by_kind.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.by_kind.values().sum()
    }
}

pub fn count_gates(c: &Circuit) -> GateCounts {
    let mut counts = GateCounts::default();
    for g in c.gates() {
        *counts.by_kind.entry(g.kind()).or_default() += 1;
        counts.cx_equivalent += g.cx_cost();
    }
    counts
}
