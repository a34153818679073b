//! Circuit JSON: {registers, global_phase, gates: [{kind, qubits, params}]}
//! with qubits written as [register name, index] pairs.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Circuit, Control, Gate, GateKind, Register};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircuitFile {
    pub registers: Vec<Register>,
    #[serde(default)]
    pub global_phase: f64,
    pub gates: Vec<GateRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: GateKind,
    pub qubits: Vec<(String, usize)>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
}

impl From<&Circuit> for CircuitFile {
    fn from(c: &Circuit) -> Self {
        let name = |q: usize| {
            let r = c.registers().iter().find(|r| r.contains(q)).expect("validated qubit");
            (r.name.clone(), q - r.offset)
        };
        let gates = c
            .gates()
            .iter()
            .map(|g| {
                let params = match g {
                    Gate::PhaseShift { theta, .. } | Gate::ControlledPhase { theta, .. } => json!({ "theta": theta }),
                    Gate::MultiControlledZ { controls, .. } => {
                        json!({ "open": controls.iter().map(|c| c.open).collect::<Vec<_>>() })
                    }
                    Gate::UniformlyControlledRy { angles, .. } => json!({ "angles": angles }),
                    Gate::DiagonalPhase { phases, .. } => json!({ "phases": phases }),
                    _ => Value::Null,
                };
                GateRecord {
                    kind: g.kind(),
                    qubits: g.qubits().into_iter().map(name).collect(),
                    params,
                }
            })
            .collect();
        CircuitFile {
            registers: c.registers().to_vec(),
            global_phase: c.global_phase(),
            gates,
        }
    }
}

fn floats(params: &Value, key: &str) -> Result<Vec<f64>> {
    params
        .get(key)
        .and_then(Value::as_array)
        .and_then(|a| a.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
        .map_or_else(|| invalid(format!("gate params missing numeric array `{key}`")), Ok)
}

impl TryFrom<CircuitFile> for Circuit {
    type Error = crate::Error;

    fn try_from(f: CircuitFile) -> Result<Self> {
        let mut c = Circuit::new();
        for r in &f.registers {
            c.add_register(&r.name, r.role, r.width)?;
        }
        c.add_global_phase(f.global_phase);
        for rec in f.gates {
            let qs = rec
                .qubits
                .iter()
                .map(|(name, i)| match c.register(name) {
                    Some(r) if *i < r.width => Ok(r.offset + i),
                    _ => invalid(format!("unknown qubit {name}[{i}]")),
                })
                .collect::<Result<Vec<usize>>>()?;
            let arity = |n: usize| {
                if qs.len() == n {
                    Ok(())
                } else {
                    invalid(format!("{:?} expects {n} qubits, got {}", rec.kind, qs.len()))
                }
            };
            let theta = || {
                rec.params
                    .get("theta")
                    .and_then(Value::as_f64)
                    .map_or_else(|| invalid("gate params missing `theta`"), Ok)
            };
            let gate = match rec.kind {
                GateKind::PhaseShift => {
                    arity(1)?;
                    Gate::PhaseShift { theta: theta()?, target: qs[0] }
                }
                GateKind::ControlledPhase => {
                    arity(2)?;
                    Gate::ControlledPhase { theta: theta()?, control: qs[0], target: qs[1] }
                }
                GateKind::PauliX => {
                    arity(1)?;
                    Gate::PauliX { target: qs[0] }
                }
                GateKind::PauliZ => {
                    arity(1)?;
                    Gate::PauliZ { target: qs[0] }
                }
                GateKind::Hadamard => {
                    arity(1)?;
                    Gate::Hadamard { target: qs[0] }
                }
                GateKind::CX => {
                    arity(2)?;
                    Gate::Cx { control: qs[0], target: qs[1] }
                }
                GateKind::MultiControlledZ => {
                    let open: Vec<bool> = rec
                        .params
                        .get("open")
                        .and_then(Value::as_array)
                        .and_then(|a| a.iter().map(Value::as_bool).collect())
                        .map_or_else(|| invalid("gate params missing `open`"), Ok)?;
                    arity(open.len() + 1)?;
                    let (target, ctl) = qs.split_last().expect("arity checked");
                    Gate::MultiControlledZ {
                        controls: ctl.iter().zip(open).map(|(&qubit, open)| Control { qubit, open }).collect(),
                        target: *target,
                    }
                }
                GateKind::UniformlyControlledRy => {
                    let (target, ctl) = qs.split_last().map_or_else(|| invalid("rotation without target"), Ok)?;
                    Gate::UniformlyControlledRy {
                        controls: ctl.to_vec(),
                        target: *target,
                        angles: floats(&rec.params, "angles")?,
                    }
                }
                GateKind::DiagonalPhase => Gate::DiagonalPhase {
                    qubits: qs.clone(),
                    phases: floats(&rec.params, "phases")?,
                },
            };
            c.push(gate)?;
        }
        Ok(c)
    }
}

impl Circuit {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&CircuitFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: CircuitFile = serde_json::from_str(text)?;
        f.try_into()
    }
}
