use std::path::{Path, PathBuf};

use lcu_prep::grid::{Convention, GridSpec};
use lcu_prep::physics::{self, Nucleus, PlaneWaveProblem};
use lcu_prep::series::{
    chebyshev_interpolate, fourier_interpolate, gaussian_fourier_coeffs, mirror_extend, Basis, DomainKind, SeriesApprox,
    TargetFunction,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Problems with the configuration itself (exit code 2).
#[derive(Debug, Error)]
#[error("invalid config: {0}")]
pub struct ConfigError(pub String);

fn bad<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(ConfigError(msg.into()).into())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub target: TargetSpec,
    pub basis: Basis,
    /// One degree per dimension.
    pub degrees: Vec<usize>,
    /// Extra degree sets for the `approx` convergence table; each entry is
    /// applied to every dimension.
    #[serde(default)]
    pub degree_sweep: Vec<usize>,
    pub qubits: Vec<usize>,
    #[serde(default)]
    pub preprocessing: Option<Preprocessing>,
    #[serde(default)]
    pub simulation: SimulationSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
    /// Dense sampling resolution for sup-norm errors (default 2001 per axis
    /// up to 2-D, 101 beyond).
    #[serde(default)]
    pub dense_points: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    File { file: PathBuf },
    Builtin(Builtin),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case", deny_unknown_fields)]
pub enum Builtin {
    Ricker {
        #[serde(default = "default_sigma")]
        sigma: f64,
    },
    StudentT {
        #[serde(default = "default_mu")]
        mu: [f64; 2],
        #[serde(default = "default_student_sigma")]
        sigma: [[f64; 2]; 2],
    },
    Gaussian {
        #[serde(default = "default_mu")]
        mu: [f64; 2],
        sigma_x: f64,
        sigma_y: f64,
        #[serde(default)]
        rho: f64,
    },
    Constant {
        dims: usize,
        #[serde(default = "one")]
        value: f64,
    },
    Coulomb {
        #[serde(rename = "N")]
        n_modes: usize,
        nuclei: Vec<Nucleus>,
        /// 0 = ground state.
        #[serde(default)]
        state: usize,
    },
}

fn default_sigma() -> f64 {
    0.5
}
fn default_mu() -> [f64; 2] {
    [0.5, 0.5]
}
fn default_student_sigma() -> [[f64; 2]; 2] {
    [[0.05, 0.0], [0.0, 0.05]]
}
fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preprocessing {
    /// Chebyshev interpolation of the target as given.
    Interpolate,
    MirrorExtend,
    CharacteristicFunction,
    DirectCoefficients,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default)]
    pub qubit_cap: Option<usize>,
    #[serde(default)]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
}

fn yes() -> bool {
    true
}

impl Default for SimulationSpec {
    fn default() -> Self {
        Self { enabled: true, qubit_cap: None, shots: 0, seed: 0 }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// Counts CSV read by `analyze` (default: `<out>/counts.csv`).
    #[serde(default)]
    pub counts: Option<PathBuf>,
}

/// A parsed configuration plus where it came from.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: ExperimentConfig,
    pub base_dir: PathBuf,
    pub hash: String,
}

impl Loaded {
    pub fn from_path(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        let config: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        // Hash the canonical re-serialization so formatting does not matter.
        let canon = serde_json::to_vec(&config)?;
        let hash = hex::encode(Sha256::digest(&canon));
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let loaded = Self { config, base_dir, hash };
        loaded.validate()?;
        Ok(loaded)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() { p.to_path_buf() } else { self.base_dir.join(p) }
    }

    fn validate(&self) -> anyhow::Result<()> {
        let c = &self.config;
        if c.degrees.is_empty() || c.degrees.len() != c.qubits.len() {
            return bad(format!("{} degrees for {} grid dimensions", c.degrees.len(), c.qubits.len()));
        }
        if let TargetSpec::File { file } = &c.target {
            let p = self.resolve(file);
            if !p.is_file() {
                return bad(format!("coefficient file {} does not exist", p.display()));
            }
        }
        let pre = self.preprocessing();
        match (c.basis, pre) {
            (Basis::Chebyshev, Preprocessing::Interpolate | Preprocessing::DirectCoefficients) => {}
            (Basis::Fourier, Preprocessing::MirrorExtend | Preprocessing::CharacteristicFunction | Preprocessing::DirectCoefficients) => {}
            (b, p) => return bad(format!("preprocessing {p:?} does not apply to the {b:?} basis")),
        }
        match (&c.target, pre) {
            (TargetSpec::Builtin(Builtin::Gaussian { .. }), Preprocessing::CharacteristicFunction) => {}
            (_, Preprocessing::CharacteristicFunction) => {
                return bad("characteristic_function preprocessing needs the gaussian builtin");
            }
            (TargetSpec::File { .. } | TargetSpec::Builtin(Builtin::Coulomb { .. }), p) if p != Preprocessing::DirectCoefficients => {
                return bad("coefficient files and coulomb targets need direct_coefficients preprocessing");
            }
            (TargetSpec::Builtin(b), Preprocessing::DirectCoefficients) if !matches!(b, Builtin::Coulomb { .. }) => {
                return bad("direct_coefficients needs a coefficient file or the coulomb builtin");
            }
            _ => {}
        }
        Ok(())
    }

    pub fn preprocessing(&self) -> Preprocessing {
        let c = &self.config;
        c.preprocessing.unwrap_or(match (&c.target, c.basis) {
            (TargetSpec::File { .. } | TargetSpec::Builtin(Builtin::Coulomb { .. }), _) => Preprocessing::DirectCoefficients,
            (TargetSpec::Builtin(Builtin::Gaussian { .. }), Basis::Fourier) => Preprocessing::CharacteristicFunction,
            (_, Basis::Fourier) => Preprocessing::MirrorExtend,
            (_, Basis::Chebyshev) => Preprocessing::Interpolate,
        })
    }

    pub fn grid(&self) -> anyhow::Result<GridSpec> {
        let conv = match self.config.basis {
            Basis::Fourier => Convention::FourierUnit,
            Basis::Chebyshev => Convention::ChebyshevSym,
        };
        Ok(GridSpec::new(self.config.qubits.clone(), conv)?)
    }

    /// The target as a function, when there is one.
    pub fn target_function(&self) -> anyhow::Result<Option<TargetFunction>> {
        let TargetSpec::Builtin(b) = &self.config.target else {
            return Ok(None);
        };
        Ok(Some(match b {
            Builtin::Ricker { sigma } => physics::ricker2d(*sigma)?,
            Builtin::StudentT { mu, sigma } => physics::student_t2d(*mu, *sigma)?,
            Builtin::Gaussian { mu, sigma_x, sigma_y, rho } => {
                physics::gaussian2d(*mu, physics::covariance(*sigma_x, *sigma_y, *rho))?
            }
            Builtin::Constant { dims, value } => {
                let domain = match self.config.basis {
                    Basis::Fourier => DomainKind::UnitCube,
                    Basis::Chebyshev => DomainKind::Symmetric,
                };
                let v = *value;
                TargetFunction::real(*dims, domain, move |_| v)
            }
            Builtin::Coulomb { .. } => return Ok(None),
        }))
    }

    /// Series coefficients at the given per-dimension degrees.
    pub fn series(&self, degrees: &[usize]) -> anyhow::Result<SeriesApprox> {
        let c = &self.config;
        let s = match (&c.target, self.preprocessing()) {
            (TargetSpec::File { file }, _) => {
                let text = std::fs::read_to_string(self.resolve(file))?;
                SeriesApprox::from_json(&text)?
            }
            (TargetSpec::Builtin(Builtin::Coulomb { n_modes, nuclei, state }), _) => {
                let p = PlaneWaveProblem::new(*n_modes, nuclei.clone())?;
                let states = physics::solve_coulomb_planewaves(&p, state + 1)?;
                log::info!("coulomb state {state}: E = {}", states[*state].energy);
                physics::to_series(&states[*state].coeffs, *n_modes)?
            }
            (TargetSpec::Builtin(Builtin::Gaussian { mu, sigma_x, sigma_y, rho }), Preprocessing::CharacteristicFunction) => {
                let Some(&d) = degrees.first().filter(|&&d| degrees.iter().all(|&e| e == d)) else {
                    return bad("characteristic_function needs equal degrees in every dimension");
                };
                let cov = physics::covariance(*sigma_x, *sigma_y, *rho);
                gaussian_fourier_coeffs(mu, &[cov[0][0], cov[0][1], cov[1][0], cov[1][1]], d)?
            }
            (TargetSpec::Builtin(_), pre) => {
                let f = self.target_function()?.expect("builtin with a function");
                match pre {
                    Preprocessing::MirrorExtend => fourier_interpolate(&mirror_extend(&f), degrees)?,
                    Preprocessing::Interpolate => chebyshev_interpolate(&f, degrees)?,
                    _ => unreachable!("rejected by validate"),
                }
            }
        };
        if s.basis() != c.basis {
            return bad(format!("coefficients are {:?} but the config says {:?}", s.basis(), c.basis));
        }
        if s.dims() != c.qubits.len() {
            return bad(format!("{}-D coefficients for a {}-D grid", s.dims(), c.qubits.len()));
        }
        Ok(s)
    }

    pub fn dense_points(&self) -> usize {
        self.config
            .dense_points
            .unwrap_or(if self.config.qubits.len() <= 2 { 2001 } else { 101 })
    }
}
