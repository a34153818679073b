//! Truncated Fourier and Chebyshev expansions of multivariate functions.
//!
//! Fourier: f_d(x) = Σ_k c_k e^{iπ k·x}, period 2 in every variable.
//! Chebyshev: f_d(x) = Σ_k c_k Π_i T_{k_i}(x_i) on [−1, 1]^D.
//!
//! Coefficient tensors are dense, row-major (dimension 0 slowest). A
//! Fourier axis stores indices lo..=hi with storage slot 0 ↔ k = lo; the
//! usual symmetric range is lo = −d, hi = d.

mod gaussian;
mod json;
mod transform;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::unravel;

pub use gaussian::gaussian_fourier_coeffs;
pub use json::SeriesFile;
pub use transform::{chebyshev_interpolate, fourier_interpolate, mode_product};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Fourier,
    Chebyshev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    /// [0, 1]^D
    UnitCube,
    /// [−1, 1]^D
    Symmetric,
}

impl DomainKind {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            DomainKind::UnitCube => (0.0, 1.0),
            DomainKind::Symmetric => (-1.0, 1.0),
        }
    }
}

type EvalFn = dyn Fn(&[f64]) -> Complex64 + Send + Sync;

/// A complex function of D real variables.
#[derive(Clone)]
pub struct TargetFunction {
    arity: usize,
    domain: DomainKind,
    f: Arc<EvalFn>,
}

impl fmt::Debug for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TargetFunction")
            .field("arity", &self.arity)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl TargetFunction {
    pub fn new<F>(arity: usize, domain: DomainKind, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        assert!(arity > 0, "target function needs at least one variable");
        Self {
            arity,
            domain,
            f: Arc::new(f),
        }
    }

    pub fn real<F>(arity: usize, domain: DomainKind, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(arity, domain, move |x| Complex64::new(f(x), 0.0))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> DomainKind {
        self.domain
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.arity);
        (self.f)(x)
    }
}

/// Even, period-2 extension of a function given on [0, 1]^D.
pub fn mirror_extend(f: &TargetFunction) -> TargetFunction {
    let inner = f.clone();
    TargetFunction::new(f.arity(), DomainKind::Symmetric, move |x| {
        let folded: Vec<f64> = x.iter().map(|&v| fold_period2(v)).collect();
        inner.eval(&folded)
    })
}

/// Reduce into [−1, 1] modulo 2, then take the absolute value.
fn fold_period2(v: f64) -> f64 {
    let r = v - 2.0 * (v / 2.0).round();
    r.abs().min(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesApprox {
    basis: Basis,
    lower: Vec<i64>,
    shape: Vec<usize>,
    coeffs: Vec<Complex64>,
    norm: f64,
}

impl SeriesApprox {
    /// Symmetric Fourier (k ∈ [−d, d]) or Chebyshev (k ∈ [0, d]) series.
    pub fn new(basis: Basis, degrees: &[usize], coeffs: Vec<Complex64>) -> Result<Self> {
        let (lower, shape) = match basis {
            Basis::Fourier => (
                degrees.iter().map(|&d| -(d as i64)).collect(),
                degrees.iter().map(|&d| 2 * d + 1).collect(),
            ),
            Basis::Chebyshev => (vec![0; degrees.len()], degrees.iter().map(|&d| d + 1).collect()),
        };
        Self::build(basis, lower, shape, coeffs)
    }

    /// Fourier series over an explicit index range lo_i..lo_i+len_i per axis.
    pub fn fourier_range(lower: Vec<i64>, lens: Vec<usize>, coeffs: Vec<Complex64>) -> Result<Self> {
        Self::build(Basis::Fourier, lower, lens, coeffs)
    }

    fn build(basis: Basis, lower: Vec<i64>, shape: Vec<usize>, coeffs: Vec<Complex64>) -> Result<Self> {
        if shape.is_empty() {
            return invalid("series needs at least one dimension");
        }
        if shape.contains(&0) {
            return invalid("empty coefficient axis");
        }
        let expected: usize = shape.iter().product();
        if coeffs.len() != expected {
            return invalid(format!(
                "coefficient tensor has {} entries, shape {:?} needs {expected}",
                coeffs.len(),
                shape
            ));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NumericDomain("non-finite series coefficient".into()));
        }
        let norm = coeffs.iter().map(|c| c.norm()).sum();
        Ok(Self {
            basis,
            lower,
            shape,
            coeffs,
            norm,
        })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dims(&self) -> usize {
        self.shape.len()
    }

    /// Coefficient count per axis, K_i.
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Lowest index per axis.
    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    /// Highest |k| per axis.
    pub fn degrees(&self) -> Vec<usize> {
        self.lower
            .iter()
            .zip(&self.shape)
            .map(|(&lo, &len)| lo.unsigned_abs().max((lo + len as i64 - 1).unsigned_abs()) as usize)
            .collect()
    }

    /// True for a Fourier axis set that is not of the form [−d, d].
    pub fn is_asymmetric(&self) -> bool {
        self.basis == Basis::Fourier
            && self
                .lower
                .iter()
                .zip(&self.shape)
                .any(|(&lo, &len)| lo + len as i64 - 1 != -lo)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// 𝒩 = Σ|c_k|.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Coefficient at the (signed) multi-index `k`.
    pub fn coeff(&self, k: &[i64]) -> Option<Complex64> {
        if k.len() != self.dims() {
            return None;
        }
        let mut flat = 0usize;
        for ((&ki, &lo), &len) in k.iter().zip(&self.lower).zip(&self.shape) {
            let s = ki - lo;
            if s < 0 || s as usize >= len {
                return None;
            }
            flat = flat * len + s as usize;
        }
        Some(self.coeffs[flat])
    }

    /// Signed multi-index of the flat storage slot.
    pub fn index_of(&self, flat: usize) -> Vec<i64> {
        unravel(flat, &self.shape)
            .into_iter()
            .zip(&self.lower)
            .map(|(s, &lo)| s as i64 + lo)
            .collect()
    }

    /// Basis functions along axis `axis` evaluated at `x`, one per stored index.
    fn axis_basis(&self, axis: usize, x: f64) -> Vec<Complex64> {
        let len = self.shape[axis];
        match self.basis {
            Basis::Fourier => {
                let lo = self.lower[axis];
                (0..len)
                    .map(|s| Complex64::from_polar(1.0, std::f64::consts::PI * (lo + s as i64) as f64 * x))
                    .collect()
            }
            Basis::Chebyshev => chebyshev_t_all(len, x).into_iter().map(Complex64::from).collect(),
        }
    }

    /// Per-axis basis matrices (len K_i × points) for grid evaluation.
    fn basis_matrix(&self, axis: usize, xs: &[f64]) -> Vec<Complex64> {
        let k = self.shape[axis];
        let mut m = vec![Complex64::new(0.0, 0.0); k * xs.len()];
        for (g, &x) in xs.iter().enumerate() {
            for (s, v) in self.axis_basis(axis, x).into_iter().enumerate() {
                m[g * k + s] = v;
            }
        }
        m
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dims() {
            return invalid(format!("point has {} coordinates, series has {}", p.len(), self.dims()));
        }
        for &x in p {
            if !x.is_finite() || !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&x) {
                return invalid(format!("point coordinate {x} outside [-1, 1]"));
            }
        }
        Ok(())
    }

    fn eval_unchecked(&self, p: &[f64]) -> Complex64 {
        let mut data = self.coeffs.clone();
        let mut len = data.len();
        // Contract the fastest axis first.
        for axis in (0..self.dims()).rev() {
            let b = self.axis_basis(axis, p[axis]);
            let k = self.shape[axis];
            len /= k;
            for o in 0..len {
                let row = &data[o * k..(o + 1) * k];
                let v = row.iter().zip(&b).map(|(c, e)| c * e).sum();
                data[o] = v;
            }
        }
        data[0]
    }
}

/// T_0(x)..T_{len-1}(x) by the three-term recurrence.
pub fn chebyshev_t_all(len: usize, x: f64) -> Vec<f64> {
    let mut t = Vec::with_capacity(len);
    for k in 0..len {
        let v = match k {
            0 => 1.0,
            1 => x,
            _ => 2.0 * x * t[k - 1] - t[k - 2],
        };
        t.push(v);
    }
    t
}

/// Roots of T_N, x_m = cos(π(2m+1)/(2N)), in decreasing order.
pub fn chebyshev_nodes(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return invalid("Chebyshev node count must be positive");
    }
    Ok((0..n)
        .map(|m| (std::f64::consts::PI * (2 * m + 1) as f64 / (2 * n) as f64).cos())
        .collect())
}

/// Series values at arbitrary points in [−1, 1]^D.
pub fn evaluate_series(s: &SeriesApprox, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    for p in points {
        s.check_point(p)?;
    }
    Ok(points.par_iter().map(|p| s.eval_unchecked(p)).collect())
}

/// Series values on the tensor grid `axes[0] × axes[1] × …`, row-major.
///
/// Separable: one mode product per axis, so the cost is far below
/// (#points × #coefficients).
pub fn evaluate_on_grid(s: &SeriesApprox, axes: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    if axes.len() != s.dims() {
        return invalid(format!("{} grid axes for a {}-D series", axes.len(), s.dims()));
    }
    for xs in axes {
        for &x in xs {
            if !x.is_finite() || !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&x) {
                return invalid(format!("grid coordinate {x} outside [-1, 1]"));
            }
        }
    }
    let mut data = s.coeffs.clone();
    let mut shape = s.shape.clone();
    for (axis, xs) in axes.iter().enumerate() {
        let m = s.basis_matrix(axis, xs);
        data = mode_product(&data, &shape, axis, &m, xs.len());
        shape[axis] = xs.len();
    }
    Ok(data)
}
