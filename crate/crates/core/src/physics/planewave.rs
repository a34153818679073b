//! One electron in a periodic cell of point charges, expanded in
//! ψ(r) = Σ_k c_k e^{iπk·r}, k ∈ [−N/2, N/2 − 1]³.

use std::f64::consts::PI;

use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::series::SeriesApprox;

/// Largest mode count per axis (N³ = 4096 dense unknowns).
pub const MAX_MODES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nucleus {
    #[serde(rename = "R")]
    pub position: [f64; 3],
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveProblem {
    /// Modes per axis.
    #[serde(rename = "N")]
    pub n_modes: usize,
    pub nuclei: Vec<Nucleus>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub energy: f64,
    /// Row-major over (k_x, k_y, k_z), slot 0 ↔ k = −N/2; unit L2 norm.
    pub coeffs: Vec<Complex64>,
}

impl PlaneWaveProblem {
    pub fn new(n_modes: usize, nuclei: Vec<Nucleus>) -> Result<Self> {
        let p = Self { n_modes, nuclei };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_modes;
        if n == 0 || n % 2 == 1 {
            return invalid(format!("mode count N = {n} must be even and positive"));
        }
        if n > MAX_MODES {
            return Err(Error::ResourceLimit {
                what: "plane-wave modes per axis",
                requested: n,
                limit: MAX_MODES,
            });
        }
        for nuc in &self.nuclei {
            if nuc.position.iter().any(|x| !(0.0..=1.0).contains(x)) || !nuc.w.is_finite() {
                return invalid(format!("nucleus {nuc:?} must sit in [0,1]³ with finite weight"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n_modes.pow(3)
    }

    /// Wave vectors in storage order.
    pub fn modes(&self) -> Vec<[i64; 3]> {
        let n = self.n_modes as i64;
        let lo = -n / 2;
        let mut out = Vec::with_capacity(self.dim());
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    out.push([lo + x, lo + y, lo + z]);
                }
            }
        }
        out
    }

    fn kinetic(k: &[i64; 3]) -> f64 {
        let k2: i64 = k.iter().map(|v| v * v).sum();
        0.5 * PI * PI * k2 as f64
    }

    /// (4/π)/‖k−k'‖², zero on the diagonal.
    fn coulomb(k: &[i64; 3], kp: &[i64; 3]) -> f64 {
        let d2: i64 = k.iter().zip(kp).map(|(a, b)| (a - b) * (a - b)).sum();
        if d2 == 0 { 0.0 } else { 4.0 / (PI * d2 as f64) }
    }

    /// H_{k,k'} = −T_k δ_{kk'} − (4/π) Σ_ℓ w_ℓ e^{iπ(k'−k)·R_ℓ}/‖k−k'‖²,
    /// dense row-major.
    pub fn hamiltonian(&self) -> Result<Vec<Complex64>> {
        self.validate()?;
        let modes = self.modes();
        let m = modes.len();
        let mut h = vec![Complex64::new(0.0, 0.0); m * m];
        h.par_chunks_mut(m).enumerate().for_each(|(a, row)| {
            let k = &modes[a];
            for (b, slot) in row.iter_mut().enumerate() {
                let kp = &modes[b];
                let v = Self::coulomb(k, kp);
                let mut u = Complex64::new(0.0, 0.0);
                if v != 0.0 {
                    for nuc in &self.nuclei {
                        let phase: f64 = (0..3).map(|i| (kp[i] - k[i]) as f64 * nuc.position[i]).sum();
                        u += Complex64::from_polar(nuc.w * v, PI * phase);
                    }
                }
                *slot = -u;
            }
            row[a] -= Self::kinetic(k);
        });
        Ok(h)
    }
}

/// Fix the phase so the largest-magnitude entry is real and positive.
fn canonical_phase(v: &mut [Complex64]) {
    let Some(big) = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) else {
        return;
    };
    if big.norm() > 0.0 {
        let rot = big.conj() / big.norm();
        v.iter_mut().for_each(|z| *z *= rot);
    }
}

/// Lowest `n_states` eigenpairs, energies ascending.
///
/// With a single nucleus H = Φ†H₀Φ with Φ = diag(e^{iπk·R}) and H₀ real,
/// so the real symmetric H₀ is diagonalized instead.
pub fn solve_coulomb_planewaves(p: &PlaneWaveProblem, n_states: usize) -> Result<Vec<Eigenstate>> {
    p.validate()?;
    let m = p.dim();
    if n_states == 0 || n_states > m {
        return invalid(format!("n_states = {n_states} outside 1..={m}"));
    }
    let modes = p.modes();
    let mut states = if let [nuc] = p.nuclei.as_slice() {
        let h0 = Mat::<f64>::from_fn(m, m, |a, b| {
            let diag = if a == b { PlaneWaveProblem::kinetic(&modes[a]) } else { 0.0 };
            -diag - nuc.w * PlaneWaveProblem::coulomb(&modes[a], &modes[b])
        });
        let eig = h0
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::NumericDomain(format!("eigensolver failed: {e:?}")))?;
        let (s, u) = (eig.S().column_vector(), eig.U());
        let phi: Vec<Complex64> = modes
            .iter()
            .map(|k| {
                let t: f64 = (0..3).map(|i| k[i] as f64 * nuc.position[i]).sum();
                Complex64::from_polar(1.0, -PI * t)
            })
            .collect();
        (0..m)
            .map(|j| Eigenstate {
                energy: s[j],
                coeffs: (0..m).map(|a| phi[a] * u[(a, j)]).collect(),
            })
            .collect::<Vec<_>>()
    } else {
        let h = p.hamiltonian()?;
        let hm = Mat::<Complex64>::from_fn(m, m, |a, b| h[a * m + b]);
        drop(h);
        let eig = hm
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::NumericDomain(format!("eigensolver failed: {e:?}")))?;
        let (s, u) = (eig.S().column_vector(), eig.U());
        (0..m)
            .map(|j| Eigenstate {
                energy: s[j].re,
                coeffs: (0..m).map(|a| u[(a, j)]).collect(),
            })
            .collect::<Vec<_>>()
    };
    states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    states.truncate(n_states);
    for st in &mut states {
        let norm = st.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        st.coeffs.iter_mut().for_each(|z| *z /= norm);
        canonical_phase(&mut st.coeffs);
    }
    Ok(states)
}

fn check_tensor(coeffs: &[Complex64], n_modes: usize) -> Result<()> {
    if n_modes == 0 || n_modes % 2 == 1 {
        return invalid(format!("mode count N = {n_modes} must be even and positive"));
    }
    if coeffs.len() != n_modes.pow(3) {
        return invalid(format!("{} coefficients for N = {n_modes}", coeffs.len()));
    }
    Ok(())
}

/// The coefficient tensor as a Fourier series over k ∈ [−N/2, N/2 − 1]³.
pub fn to_series(coeffs: &[Complex64], n_modes: usize) -> Result<SeriesApprox> {
    check_tensor(coeffs, n_modes)?;
    let lo = -(n_modes as i64) / 2;
    SeriesApprox::fourier_range(vec![lo; 3], vec![n_modes; 3], coeffs.to_vec())
}

/// ψ(r) = Σ_k c_k e^{iπk·r} by direct summation.
pub fn planewave_state(coeffs: &[Complex64], n_modes: usize, points: &[[f64; 3]]) -> Result<Vec<Complex64>> {
    check_tensor(coeffs, n_modes)?;
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return invalid("evaluation points must be finite");
    }
    let lo = -(n_modes as i64) / 2;
    Ok(points
        .par_iter()
        .map(|r| {
            // e^{iπkr} per axis, then the triple sum.
            let tab: Vec<Vec<Complex64>> = r
                .iter()
                .map(|&x| (0..n_modes).map(|j| Complex64::from_polar(1.0, PI * (lo + j as i64) as f64 * x)).collect())
                .collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, ex) in tab[0].iter().enumerate() {
                for (b, ey) in tab[1].iter().enumerate() {
                    let row = &coeffs[(a * n_modes + b) * n_modes..(a * n_modes + b + 1) * n_modes];
                    let s: Complex64 = row.iter().zip(&tab[2]).map(|(c, ez)| c * ez).sum();
                    acc += ex * ey * s;
                }
            }
            acc
        })
        .collect())
}
