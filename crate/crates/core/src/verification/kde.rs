//! Gaussian kernel density estimates and leave-one-out bandwidth choice.
//!
//! Data are kept as weights on the tensor product of each axis's distinct
//! coordinates whenever that product is small. Shots measured on a grid
//! always are, and then every kernel sum is a separable mode product,
//! exact and far cheaper than the pairwise sum.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classical_fidelity, density_moments, Moments};
use crate::error::{invalid, Error, Result};
use crate::grid::unravel;

/// Largest tensor of distinct coordinates kept as exact bins.
const EXACT_BIN_LIMIT: usize = 1 << 22;
/// Above this many off-lattice points the pairwise sums are replaced by
/// a binned approximation.
pub const DIRECT_LOO_LIMIT: usize = 5000;
/// Bins per axis (upper bound) of the approximate path.
const APPROX_BINS: usize = 512;
/// Kernel tails beyond this many bandwidths are below the smallest subnormal.
const KERNEL_CUTOFF: f64 = 38.5;

#[derive(Debug, Clone, PartialEq)]
pub enum KdeData {
    /// Weights on coords[0] × coords[1] × …, row-major; coordinates sorted.
    Binned {
        coords: Vec<Vec<f64>>,
        weights: Vec<f64>,
        exact: bool,
    },
    /// Raw points, handled pairwise.
    Points(Vec<Vec<f64>>),
}

fn distinct_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn position(sorted: &[f64], x: f64) -> usize {
    sorted.partition_point(|&c| c < x)
}

impl KdeData {
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = points.first() else {
            return invalid("KDE needs data");
        };
        let dims = first.len();
        if dims == 0 || points.iter().any(|p| p.len() != dims) {
            return invalid("KDE points must share a positive dimension");
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return invalid("KDE points must be finite");
        }
        let coords: Vec<Vec<f64>> = (0..dims)
            .map(|d| distinct_sorted(points.iter().map(|p| p[d]).collect()))
            .collect();
        let cells = coords.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
        if cells.is_some_and(|c| c <= EXACT_BIN_LIMIT) {
            return Ok(Self::bin(points, coords, true));
        }
        if points.len() <= DIRECT_LOO_LIMIT {
            return Ok(KdeData::Points(points.to_vec()));
        }
        let per_axis = ((EXACT_BIN_LIMIT as f64).powf(1.0 / dims as f64) as usize).clamp(2, APPROX_BINS);
        let centers: Vec<Vec<f64>> = coords
            .iter()
            .map(|c| {
                let (lo, hi) = (c[0], c[c.len() - 1]);
                (0..per_axis).map(|i| lo + (hi - lo) * i as f64 / (per_axis - 1) as f64).collect()
            })
            .collect();
        log::info!("KDE: {} off-lattice points binned onto {per_axis}^{dims} cells", points.len());
        Ok(Self::bin(points, centers, false))
    }

    /// Nearest-coordinate binning (exact when every coordinate is present).
    fn bin(points: &[Vec<f64>], coords: Vec<Vec<f64>>, exact: bool) -> Self {
        let shape: Vec<usize> = coords.iter().map(Vec::len).collect();
        let mut weights = vec![0.0; shape.iter().product()];
        for p in points {
            let mut flat = 0;
            for ((&x, c), &len) in p.iter().zip(&coords).zip(&shape) {
                let i = if exact {
                    position(c, x)
                } else {
                    let step = (c[len - 1] - c[0]) / (len - 1) as f64;
                    if step > 0.0 { (((x - c[0]) / step).round() as usize).min(len - 1) } else { 0 }
                };
                flat = flat * len + i;
            }
            weights[flat] += 1.0;
        }
        KdeData::Binned { coords, weights, exact }
    }

    /// Shot counts keyed by row-major flat index over `axes`.
    pub fn from_grid_counts(axes: &[Vec<f64>], counts: &BTreeMap<usize, u64>) -> Result<Self> {
        if axes.is_empty() || axes.iter().any(|a| a.is_empty()) {
            return invalid("count grid needs nonempty axes");
        }
        if axes.iter().any(|a| a.windows(2).any(|w| w[0] >= w[1])) {
            return invalid("count grid axes must be strictly increasing");
        }
        let len: usize = axes.iter().map(Vec::len).product();
        let mut weights = vec![0.0; len];
        for (&k, &n) in counts {
            if k >= len {
                return invalid(format!("count index {k} outside a grid of {len} points"));
            }
            weights[k] += n as f64;
        }
        Ok(KdeData::Binned {
            coords: axes.to_vec(),
            weights,
            exact: true,
        })
    }

    pub fn dims(&self) -> usize {
        match self {
            KdeData::Binned { coords, .. } => coords.len(),
            KdeData::Points(p) => p[0].len(),
        }
    }

    /// Number of data points N.
    pub fn total(&self) -> f64 {
        match self {
            KdeData::Binned { weights, .. } => weights.iter().sum(),
            KdeData::Points(p) => p.len() as f64,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, KdeData::Binned { exact: false, .. })
    }

    /// The same data marginalized onto one axis.
    pub fn marginal(&self, axis: usize) -> Result<KdeData> {
        if axis >= self.dims() {
            return invalid(format!("axis {axis} of {}-D data", self.dims()));
        }
        Ok(match self {
            KdeData::Binned { coords, weights, exact } => {
                let shape: Vec<usize> = coords.iter().map(Vec::len).collect();
                let mut w = vec![0.0; shape[axis]];
                for (flat, &v) in weights.iter().enumerate() {
                    w[unravel(flat, &shape)[axis]] += v;
                }
                KdeData::Binned {
                    coords: vec![coords[axis].clone()],
                    weights: w,
                    exact: *exact,
                }
            }
            KdeData::Points(p) => KdeData::from_points(&p.iter().map(|x| vec![x[axis]]).collect::<Vec<_>>())?,
        })
    }
}

/// Normal density with standard deviation h.
fn phi(z: f64, h: f64) -> f64 {
    (-0.5 * (z / h).powi(2)).exp() / ((2.0 * PI).sqrt() * h)
}

/// out[…, g, …] = Σ_c φ_h(rows[g] − cols[c]) · data[…, c, …] along `axis`,
/// skipping the negligible far tails (cols sorted). With `off_diagonal`
/// (rows == cols) the c = g term is left out.
fn kernel_product(
    data: &[f64],
    shape: &[usize],
    axis: usize,
    rows: &[f64],
    cols: &[f64],
    h: f64,
    off_diagonal: bool,
) -> Vec<f64> {
    let k = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let new_len = rows.len();
    let bands: Vec<(usize, Vec<f64>)> = rows
        .iter()
        .enumerate()
        .map(|(g, &r)| {
            let lo = position(cols, r - KERNEL_CUTOFF * h);
            let hi = cols.partition_point(|&c| c <= r + KERNEL_CUTOFF * h).max(lo);
            let w = (lo..hi)
                .map(|c| if off_diagonal && c == g { 0.0 } else { phi(r - cols[c], h) })
                .collect();
            (lo, w)
        })
        .collect();
    let mut out = vec![0.0; outer * new_len * inner];
    out.par_chunks_mut(inner).enumerate().for_each(|(idx, dst)| {
        let (o, g) = (idx / new_len, idx % new_len);
        let (lo, w) = &bands[g];
        for (s, &wt) in w.iter().enumerate() {
            let base = (o * k + lo + s) * inner;
            for (d, v) in dst.iter_mut().zip(&data[base..base + inner]) {
                *d += wt * v;
            }
        }
    });
    out
}

fn check_bandwidth(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return invalid(format!("bandwidth {h} must be positive"));
    }
    Ok(())
}

/// Unnormalized Σ_i K_h(x − x_i) on the tensor grid `axes`.
fn kernel_sum(data: &KdeData, h: f64, axes: &[Vec<f64>]) -> Vec<f64> {
    match data {
        KdeData::Binned { coords, weights, .. } => {
            let mut shape: Vec<usize> = coords.iter().map(Vec::len).collect();
            let mut cur = weights.clone();
            for (axis, (rows, cols)) in axes.iter().zip(coords).enumerate() {
                cur = kernel_product(&cur, &shape, axis, rows, cols, h, false);
                shape[axis] = rows.len();
            }
            cur
        }
        KdeData::Points(points) => {
            let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
            // Per-axis kernel tables, len_d × N.
            let tables: Vec<Vec<f64>> = axes
                .iter()
                .enumerate()
                .map(|(d, xs)| xs.iter().flat_map(|&x| points.iter().map(move |p| phi(x - p[d], h))).collect())
                .collect();
            let n = points.len();
            (0..shape.iter().product::<usize>())
                .into_par_iter()
                .map(|flat| {
                    let idx = unravel(flat, &shape);
                    (0..n)
                        .map(|i| idx.iter().enumerate().map(|(d, &g)| tables[d][g * n + i]).product::<f64>())
                        .sum()
                })
                .collect()
        }
    }
}

/// Gaussian KDE with bandwidth h on the tensor grid `axes`, rescaled so the
/// grid values sum to 1.
pub fn kde_estimate(data: &KdeData, h: f64, axes: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_bandwidth(h)?;
    if axes.len() != data.dims() {
        return invalid(format!("{}-D evaluation grid for {}-D data", axes.len(), data.dims()));
    }
    if axes.iter().any(|a| a.windows(2).any(|w| w[0] > w[1])) {
        return invalid("evaluation axes must be sorted");
    }
    if data.total() < 2.0 {
        return invalid("KDE needs at least two points");
    }
    let mut est = kernel_sum(data, h, axes);
    let total: f64 = est.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::NumericDomain(format!("KDE vanishes on the grid at h = {h:e}")));
    }
    est.iter_mut().for_each(|v| *v /= total);
    Ok(est)
}

/// Σ over cells u' ≠ u of W[u'] K_h(u − u'), written as the sum over
/// nonempty axis subsets S of (off-diagonal kernel on S) ⊗ (diagonal
/// elsewhere). Every term is nonnegative, so nothing cancels when the
/// self term dominates.
fn off_self_sum(coords: &[Vec<f64>], weights: &[f64], h: f64) -> Vec<f64> {
    let shape: Vec<usize> = coords.iter().map(Vec::len).collect();
    let dims = coords.len();
    let d0 = phi(0.0, h);
    let mut total = vec![0.0; weights.len()];
    for subset in 1usize..1 << dims {
        let mut cur = weights.to_vec();
        for (axis, c) in coords.iter().enumerate() {
            if (subset >> axis) & 1 == 1 {
                cur = kernel_product(&cur, &shape, axis, c, c, h, true);
            } else {
                cur.iter_mut().for_each(|v| *v *= d0);
            }
        }
        total.iter_mut().zip(&cur).for_each(|(t, v)| *t += v);
    }
    total
}

/// Leave-one-out mean log-density q(h).
fn loo_score(data: &KdeData, h: f64) -> f64 {
    let n = data.total();
    let dims = data.dims() as i32;
    let self_term = phi(0.0, h).powi(dims);
    match data {
        KdeData::Binned { coords, weights, .. } => {
            let others = off_self_sum(coords, weights, h);
            let mut q = 0.0;
            for (&w, &o) in weights.iter().zip(&others) {
                if w > 0.0 {
                    let loo = ((w - 1.0) * self_term + o) / (n - 1.0);
                    q += w * if loo > 0.0 { loo.ln() } else { f64::NEG_INFINITY };
                }
            }
            q / n
        }
        KdeData::Points(points) => {
            let q: f64 = points
                .par_iter()
                .enumerate()
                .map(|(i, p)| {
                    let s: f64 = points
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, o)| p.iter().zip(o).map(|(a, b)| phi(a - b, h)).product::<f64>())
                        .sum();
                    let loo = s / (n - 1.0);
                    if loo > 0.0 { loo.ln() } else { f64::NEG_INFINITY }
                })
                .sum();
            q / n
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthScan {
    pub h_grid: Vec<f64>,
    pub q: Vec<f64>,
    /// argmax of q; `None` when every q is −∞.
    pub h_opt: Option<f64>,
    /// The maximum sits at either end of the grid.
    pub at_boundary: bool,
    pub degenerate: bool,
}

/// Leave-one-out cross-validation over a sorted bandwidth grid.
pub fn kde_cv_bandwidth(data: &KdeData, h_grid: &[f64]) -> Result<BandwidthScan> {
    if data.total() < 10.0 {
        return invalid("bandwidth cross-validation needs at least 10 points");
    }
    if h_grid.is_empty() {
        return invalid("empty bandwidth grid");
    }
    for &h in h_grid {
        check_bandwidth(h)?;
    }
    if h_grid.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("bandwidth grid must be strictly increasing");
    }
    let q: Vec<f64> = h_grid.par_iter().map(|&h| loo_score(data, h)).collect();
    let best = q
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i);
    let degenerate = best.is_none();
    if degenerate {
        log::warn!("every leave-one-out score is -inf on the bandwidth grid");
    }
    Ok(BandwidthScan {
        h_grid: h_grid.to_vec(),
        at_boundary: best.is_some_and(|i| i == 0 || i + 1 == h_grid.len()),
        h_opt: best.map(|i| h_grid[i]),
        q,
        degenerate,
    })
}

/// 48 geometrically spaced bandwidths from 0.002 to 0.5.
pub fn default_h_grid() -> Vec<f64> {
    let (lo, hi, n) = (0.002f64, 0.5f64, 48);
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalFit {
    pub kde: BandwidthScan,
    pub fidelity: f64,
}

/// Shot data compared against a nonnegative target on the same grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotAnalysis {
    pub shots: u64,
    pub kde: BandwidthScan,
    /// F between the target and √(KDE).
    pub fidelity: f64,
    /// Per-axis marginal fits (2-D data only).
    pub marginals: Vec<MarginalFit>,
    pub moments_target: Option<Moments>,
    pub moments_estimate: Option<Moments>,
    /// √(KDE) at ĥ, row-major over the grid, summing to 1.
    #[serde(skip)]
    pub estimate: Vec<f64>,
}

fn sqrt_normalized(k: &[f64]) -> Vec<f64> {
    let s: Vec<f64> = k.iter().map(|v| v.sqrt()).collect();
    let t: f64 = s.iter().sum();
    s.into_iter().map(|v| v / t).collect()
}

fn fit(data: &KdeData, axes: &[Vec<f64>], target: &[f64], h_grid: &[f64]) -> Result<(BandwidthScan, Vec<f64>, f64)> {
    let scan = kde_cv_bandwidth(data, h_grid)?;
    let h = scan
        .h_opt
        .ok_or_else(|| Error::NumericDomain("no finite leave-one-out score".into()))?;
    let est = sqrt_normalized(&kde_estimate(data, h, axes)?);
    let f = classical_fidelity(target, &est)?;
    Ok((scan, est, f))
}

/// Grid counts → leave-one-out ĥ → KDE k → f̂ = √k, compared with the
/// target magnitude |f_d| by fidelity (and moments in 2-D).
pub fn analyze_grid_counts(
    axes: &[Vec<f64>],
    counts: &BTreeMap<usize, u64>,
    target_abs: &[f64],
    h_grid: &[f64],
) -> Result<ShotAnalysis> {
    let len: usize = axes.iter().map(Vec::len).product();
    if target_abs.len() != len {
        return invalid(format!("target has {} values, grid has {len}", target_abs.len()));
    }
    let data = KdeData::from_grid_counts(axes, counts)?;
    let (kde, estimate, fidelity) = fit(&data, axes, target_abs, h_grid)?;
    let mut marginals = Vec::new();
    let (mut moments_target, mut moments_estimate) = (None, None);
    if axes.len() == 2 {
        let ny = axes[1].len();
        let tx: Vec<f64> = target_abs.chunks(ny).map(|r| r.iter().sum()).collect();
        let ty: Vec<f64> = (0..ny).map(|j| target_abs.iter().skip(j).step_by(ny).sum()).collect();
        for (axis, t) in [tx, ty].iter().enumerate() {
            let (scan, _, f) = fit(&data.marginal(axis)?, &axes[axis..=axis], t, h_grid)?;
            marginals.push(MarginalFit { kde: scan, fidelity: f });
        }
        moments_target = Some(density_moments(target_abs, &axes[0], &axes[1])?);
        moments_estimate = Some(density_moments(&estimate, &axes[0], &axes[1])?);
    }
    Ok(ShotAnalysis {
        shots: counts.values().sum(),
        kde,
        fidelity,
        marginals,
        moments_target,
        moments_estimate,
        estimate,
    })
}
