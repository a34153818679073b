use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::StateVector;
use crate::circuit::{Circuit, RegisterRole};
use crate::error::{invalid, Error, Result};
use crate::grid::unravel;

/// Where the main registers sit and which qubits are ancillas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainLayout {
    /// (offset, width) of the main register of each dimension, in dimension order.
    mains: Vec<(usize, usize)>,
    ancillas: Vec<usize>,
}

impl MainLayout {
    pub fn new(mains: Vec<(usize, usize)>, ancillas: Vec<usize>) -> Self {
        Self { mains, ancillas }
    }

    /// Main registers by `RegisterRole::Main(dim)`, everything else ancilla.
    pub fn from_circuit(c: &Circuit) -> Result<Self> {
        let mut mains: Vec<(usize, usize, usize)> = Vec::new();
        let mut ancillas = Vec::new();
        for r in c.registers() {
            match r.role {
                RegisterRole::Main(d) => mains.push((d, r.offset, r.width)),
                _ => ancillas.extend(r.qubits()),
            }
        }
        mains.sort_unstable();
        if mains.iter().enumerate().any(|(i, m)| m.0 != i) {
            return invalid("main registers must cover dimensions 0..D exactly once");
        }
        Ok(Self {
            mains: mains.into_iter().map(|(_, o, w)| (o, w)).collect(),
            ancillas,
        })
    }

    pub fn main_qubits(&self) -> Vec<usize> {
        self.mains.iter().map(|&(_, w)| w).collect()
    }

    pub fn ancillas(&self) -> &[usize] {
        &self.ancillas
    }
}

/// Post-selected main-register state.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparationOutcome {
    qubits: Vec<usize>,
    amplitudes: Vec<Complex64>,
    p_success: f64,
}

impl PreparationOutcome {
    /// Build from unnormalized amplitudes; normalizes and records p_success.
    pub fn from_block(qubits: Vec<usize>, mut block: Vec<Complex64>) -> Result<Self> {
        let expected = 1usize << qubits.iter().sum::<usize>();
        if block.len() != expected {
            return invalid(format!("block has {} amplitudes, registers need {expected}", block.len()));
        }
        let p: f64 = block.iter().map(|a| a.norm_sqr()).sum();
        if p.is_nan() || p < 1e-300 {
            return Err(Error::DegeneratePostselection(p));
        }
        let s = 1.0 / p.sqrt();
        block.iter_mut().for_each(|a| *a *= s);
        Ok(Self {
            qubits,
            amplitudes: block,
            p_success: p,
        })
    }

    /// Main-register widths n_i.
    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn shape(&self) -> Vec<usize> {
        self.qubits.iter().map(|&n| 1usize << n).collect()
    }

    /// Normalized amplitudes, row-major over the grid (dimension 0 slowest).
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn p_success(&self) -> f64 {
        self.p_success
    }
}

/// Project onto |0⟩ of every ancilla and renormalize.
pub fn postselect_zero_ancillas(sv: &StateVector, layout: &MainLayout) -> Result<PreparationOutcome> {
    let covered: usize = layout.mains.iter().map(|m| m.1).sum::<usize>() + layout.ancillas.len();
    if covered != sv.num_qubits() {
        return invalid(format!("layout covers {covered} qubits, state has {}", sv.num_qubits()));
    }
    let qubits = layout.main_qubits();
    let shape: Vec<usize> = qubits.iter().map(|&n| 1usize << n).collect();
    let total: usize = shape.iter().product();
    let amps = sv.amplitudes();
    let block: Vec<Complex64> = (0..total)
        .into_par_iter()
        .with_min_len(1 << 12)
        .map(|flat| {
            let global = unravel(flat, &shape)
                .iter()
                .zip(&layout.mains)
                .fold(0usize, |acc, (&x, &(off, _))| acc | (x << off));
            amps[global]
        })
        .collect();
    PreparationOutcome::from_block(qubits, block)
}

/// Seeded multinomial draw of `shots` grid indices from |amplitude|².
pub fn sample_shots(outcome: &PreparationOutcome, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    if shots == 0 {
        return invalid("shot count must be positive");
    }
    let mut cdf = Vec::with_capacity(outcome.amplitudes.len());
    let mut acc = 0.0;
    for a in &outcome.amplitudes {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        *counts.entry(idx).or_insert(0) += 1;
    }
    Ok(counts)
}
