//! Dense statevector execution of [`Circuit`]s.
//!
//! Amplitude index = Σ_q 2^q b_q over global qubit indices. Kernels update
//! only the strided pairs or diagonal entries a gate touches and run in
//! parallel over amplitude stripes.

mod outcome;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

pub use outcome::{postselect_zero_ancillas, sample_shots, MainLayout, PreparationOutcome};

pub const DEFAULT_QUBIT_CAP: usize = 26;

/// Parallel work is split into stripes of at least this many amplitudes.
const STRIPE: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.par_iter().with_min_len(STRIPE).map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) {
        match gate {
            Gate::PhaseShift { theta, target } => {
                let e = Complex64::from_polar(1.0, *theta);
                let m = 1usize << target;
                self.diagonal(|i| (i & m != 0).then_some(e));
            }
            Gate::ControlledPhase { theta, control, target } => {
                let e = Complex64::from_polar(1.0, *theta);
                let m = (1usize << control) | (1usize << target);
                self.diagonal(|i| (i & m == m).then_some(e));
            }
            Gate::PauliZ { target } => {
                let m = 1usize << target;
                self.diagonal(|i| (i & m != 0).then_some(Complex64::new(-1.0, 0.0)));
            }
            Gate::MultiControlledZ { controls, target } => {
                let mut mask = 1usize << target;
                let mut want = mask;
                for c in controls {
                    mask |= 1 << c.qubit;
                    if !c.open {
                        want |= 1 << c.qubit;
                    }
                }
                self.diagonal(|i| (i & mask == want).then_some(Complex64::new(-1.0, 0.0)));
            }
            Gate::DiagonalPhase { qubits, phases } => {
                let table: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
                self.diagonal(|i| Some(table[gather_bits(i, qubits)]));
            }
            Gate::PauliX { target } => self.pairs(*target, |_, a, b| std::mem::swap(a, b)),
            Gate::Hadamard { target } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                self.pairs(*target, |_, a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * h;
                    *b = (x - y) * h;
                });
            }
            Gate::Cx { control, target } => {
                let m = 1usize << control;
                self.pairs(*target, |i, a, b| {
                    if i & m != 0 {
                        std::mem::swap(a, b);
                    }
                });
            }
            Gate::UniformlyControlledRy { controls, target, angles } => {
                let cs: Vec<(f64, f64)> = angles.iter().map(|t| (0.5 * t).sin_cos()).collect();
                self.pairs(*target, |i, a, b| {
                    let (s, c) = cs[gather_bits(i, controls)];
                    let (x, y) = (*a, *b);
                    *a = x * c - y * s;
                    *b = x * s + y * c;
                });
            }
        }
    }

    fn diagonal(&mut self, f: impl Fn(usize) -> Option<Complex64> + Sync) {
        self.amps
            .par_iter_mut()
            .with_min_len(STRIPE)
            .enumerate()
            .for_each(|(i, a)| {
                if let Some(e) = f(i) {
                    *a *= e;
                }
            });
    }

    /// `f(i, lo, hi)` for every pair (i, i | 2^target) with bit `target` of i clear.
    fn pairs(&mut self, target: usize, f: impl Fn(usize, &mut Complex64, &mut Complex64) + Sync) {
        let half = 1usize << target;
        self.amps
            .par_chunks_mut(2 * half)
            .with_min_len((STRIPE / (2 * half)).max(1))
            .enumerate()
            .for_each(|(chunk, block)| {
                let base = chunk * 2 * half;
                let (lo, hi) = block.split_at_mut(half);
                for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    f(base + j, a, b);
                }
            });
    }

    fn scale(&mut self, z: Complex64) {
        self.amps.par_iter_mut().with_min_len(STRIPE).for_each(|a| *a *= z);
    }
}

/// Little-endian value of the listed qubits' bits in `i`.
fn gather_bits(i: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (t, &q)| acc | (((i >> q) & 1) << t))
}

#[derive(Debug, Clone, Copy)]
pub struct Simulator {
    qubit_cap: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Self {
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }
}

impl Simulator {
    pub fn with_qubit_cap(qubit_cap: usize) -> Self {
        Self { qubit_cap }
    }

    pub fn qubit_cap(&self) -> usize {
        self.qubit_cap
    }

    /// Run from |0…0⟩, calling `observe(k, state)` after gate k.
    pub fn run_observed(&self, c: &Circuit, mut observe: impl FnMut(usize, &StateVector)) -> Result<StateVector> {
        let q = c.num_qubits();
        if q > self.qubit_cap {
            return Err(Error::ResourceLimit {
                what: "statevector qubits",
                requested: q,
                limit: self.qubit_cap,
            });
        }
        let mut sv = StateVector::zero(q);
        for (k, g) in c.gates().iter().enumerate() {
            sv.apply(g);
            observe(k, &sv);
        }
        if c.global_phase() != 0.0 {
            sv.scale(Complex64::from_polar(1.0, c.global_phase()));
        }
        Ok(sv)
    }

    pub fn run(&self, c: &Circuit) -> Result<StateVector> {
        self.run_observed(c, |_, _| {})
    }
}

/// Run with the default qubit cap.
pub fn run(c: &Circuit) -> Result<StateVector> {
    Simulator::default().run(c)
}
