#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use lcu_prep::grid::{Convention, GridSpec};
use lcu_prep::series::{
    chebyshev_interpolate, chebyshev_nodes, chebyshev_t_all, evaluate_on_grid, evaluate_series,
    fourier_interpolate, gaussian_fourier_coeffs, mirror_extend, Basis, DomainKind, SeriesApprox, TargetFunction,
};
use lcu_prep::verification::{dense_sup_error, rescaled_max_error, target_on_grid};
use lcu_prep::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

/// c_k = (2 − δ_k0)/(N) Σ_m f(x_m) T_k(x_m) over the N = d+1 roots.
fn cheb_oracle_1d(f: impl Fn(f64) -> f64, d: usize) -> Vec<f64> {
    let n = d + 1;
    let xs: Vec<f64> = (0..n).map(|m| (PI * (2 * m + 1) as f64 / (2 * n) as f64).cos()).collect();
    (0..n)
        .map(|k| {
            let s: f64 = xs.iter().map(|&x| f(x) * (k as f64 * x.acos()).cos()).sum();
            s * 2.0 / n as f64 * if k == 0 { 0.5 } else { 1.0 }
        })
        .collect()
}

/// Direct DFT over x_m = 2m/(2d+1), slot k + d.
fn fourier_oracle_2d(f: impl Fn(f64, f64) -> Complex64, d: usize) -> Vec<Complex64> {
    let m = 2 * d + 1;
    let di = d as i64;
    let mut out = Vec::new();
    for k in -di..=di {
        for l in -di..=di {
            let mut s = Complex64::new(0.0, 0.0);
            for a in 0..m {
                for b in 0..m {
                    let (x, y) = (2.0 * a as f64 / m as f64, 2.0 * b as f64 / m as f64);
                    s += f(x, y) * Complex64::from_polar(1.0, -PI * (k as f64 * x + l as f64 * y));
                }
            }
            out.push(s / (m * m) as f64);
        }
    }
    out
}

#[test]
fn ricker_slice_matches_cosine_sum() {
    let r = ricker(0.5);
    let f1 = TargetFunction::new(1, DomainKind::Symmetric, move |x| r.eval(&[x[0], 0.0]));
    let s = chebyshev_interpolate(&f1, &[7]).unwrap();
    let want = cheb_oracle_1d(|x| f1.eval(&[x]).re, 7);
    for (c, w) in s.coeffs().iter().zip(&want) {
        assert!((c - w).norm() < 1e-12);
    }
}

#[test]
fn transforms_match_direct_sums() {
    let g = |x: f64, y: f64| (2.0 * x + 0.3).sin() * (-(y - 0.2).powi(2)).exp() + x * y;
    for d in [0usize, 1, 2, 5, 8, 16, 31, 32] {
        let f1 = TargetFunction::real(1, DomainKind::Symmetric, move |p| g(p[0], 0.4));
        let s = chebyshev_interpolate(&f1, &[d]).unwrap();
        let want = cheb_oracle_1d(|x| g(x, 0.4), d);
        let err = s.coeffs().iter().zip(&want).map(|(c, w)| (c - w).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "cheb d={d}: {err:e}");
    }
    for d in [0usize, 1, 3, 6, 12] {
        let f2 = TargetFunction::real(2, DomainKind::Symmetric, move |p| g(p[0], p[1]));
        let s = chebyshev_interpolate(&f2, &[d, d + 1]).unwrap();
        // Tensor oracle: 1-D oracle in y for each x-node row, then in x.
        let (nx, ny) = (d + 1, d + 2);
        let xs = chebyshev_nodes(nx).unwrap();
        let rows: Vec<Vec<f64>> = xs
            .iter()
            .map(|&x| cheb_oracle_1d(|y| g(x, y), d + 1))
            .collect();
        for k in 0..nx {
            for l in 0..ny {
                let s_kl: f64 = xs
                    .iter()
                    .zip(&rows)
                    .map(|(&x, r)| r[l] * (k as f64 * x.acos()).cos())
                    .sum::<f64>()
                    * 2.0
                    / nx as f64
                    * if k == 0 { 0.5 } else { 1.0 };
                assert!((s.coeffs()[k * ny + l] - s_kl).norm() < 1e-12);
            }
        }
    }
    for d in [0usize, 1, 4, 9, 16] {
        let h = |x: f64, y: f64| Complex64::new((PI * x).cos() * y.sin(), (PI * y).sin() + 0.1 * x);
        let f = TargetFunction::new(2, DomainKind::Symmetric, move |p| h(p[0], p[1]));
        let s = fourier_interpolate(&f, &[d, d]).unwrap();
        let want = fourier_oracle_2d(h, d);
        let err = s.coeffs().iter().zip(&want).map(|(c, w)| (c - w).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "fourier d={d}: {err:e}");
    }
}

#[test]
fn student_t_mirror_coefficients_match_dft() {
    let f = mirror_extend(&student_t());
    let s = fourier_interpolate(&f, &[3, 3]).unwrap();
    let want = fourier_oracle_2d(|x, y| f.eval(&[x, y]), 3);
    for (c, w) in s.coeffs().iter().zip(&want) {
        assert!((c - w).norm() < 1e-12);
    }
}

/// Composite Simpson on [x0, x0 + len] × [y0, y0 + len], `m` (even) panels per axis.
fn simpson2(f: impl Fn(f64, f64) -> Complex64, (x0, y0, len): (f64, f64, f64), m: usize) -> Complex64 {
    let h = len / m as f64;
    let w = |i: usize| if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..=m {
        for j in 0..=m {
            s += f(x0 + i as f64 * h, y0 + j as f64 * h) * (w(i) * w(j));
        }
    }
    s * (h * h / 9.0)
}

#[test]
fn gaussian_coefficient_matches_quadrature() {
    let (mx, my, sx, sy) = (0.5, 0.5, 0.22, 0.18);
    let s = gaussian_fourier_coeffs(&[mx, my], &[sx * sx, 0.0, 0.0, sy * sy], 2).unwrap();
    let dens = |x: f64, y: f64| {
        (-0.5 * (((x - mx) / sx).powi(2) + ((y - my) / sy).powi(2))).exp() / (2.0 * PI * sx * sy)
    };
    // The closed form is the transform over the whole plane; the box
    // spans ±8σ so the truncation is far below the tolerance.
    let bx = (mx - 8.0 * sx, my - 8.0 * sx, 16.0 * sx);
    for (k, l) in [(1i64, 0i64), (0, 1), (1, -2)] {
        let q = simpson2(
            |x, y| Complex64::from_polar(dens(x, y) / 4.0, -PI * (k as f64 * x + l as f64 * y)),
            bx,
            1200,
        );
        let c = s.coeff(&[k, l]).unwrap();
        assert!((c - q).norm() < 1e-6, "({k},{l}): {c} vs {q}");
    }
    assert_eq!(s.coeff(&[0, 0]).unwrap(), Complex64::new(0.25, 0.0));
    for k in -2..=2 {
        for l in -2..=2 {
            let (a, b) = (s.coeff(&[k, l]).unwrap(), s.coeff(&[-k, -l]).unwrap());
            assert!((a - b.conj()).norm() < 1e-15);
        }
    }
}

#[test]
fn ricker_series_on_grid_matches_naive_sum() {
    let s = chebyshev_interpolate(&ricker(0.5), &[7, 7]).unwrap();
    let g = GridSpec::uniform(2, 4, Convention::ChebyshevSym).unwrap();
    let fast = evaluate_on_grid(&s, &g.axes()).unwrap();
    for (i, v) in fast.iter().enumerate() {
        let p = g.point(i);
        let (tx, ty) = (chebyshev_t_all(8, p[0]), chebyshev_t_all(8, p[1]));
        let mut naive = Complex64::new(0.0, 0.0);
        for k in 0..8 {
            for l in 0..8 {
                naive += s.coeffs()[k * 8 + l] * tx[k] * ty[l];
            }
        }
        assert!((v - naive).norm() < 1e-12);
        assert!((evaluate_series(&s, &[p]).unwrap()[0] - naive).norm() < 1e-12);
    }
}

fn smooth_targets() -> Vec<TargetFunction> {
    vec![
        ricker(0.5),
        TargetFunction::new(2, DomainKind::Symmetric, |p| Complex64::from_polar(1.0 + p[0] * p[1], 2.0 * p[0] - p[1])),
        TargetFunction::real(2, DomainKind::Symmetric, |p| 1.0 / (1.2 - p[0]) + (p[1] * 3.0).cos()),
    ]
}

#[test]
fn chebyshev_interpolates_at_roots() {
    for f in smooth_targets() {
        for d in [0usize, 1, 4, 9, 16] {
            let s = chebyshev_interpolate(&f, &[d, 16 - d]).unwrap();
            let (xs, ys) = (chebyshev_nodes(d + 1).unwrap(), chebyshev_nodes(17 - d).unwrap());
            let pts: Vec<Vec<f64>> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| vec![x, y])).collect();
            let vals = evaluate_series(&s, &pts).unwrap();
            for (p, v) in pts.iter().zip(vals) {
                assert!((v - f.eval(p)).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn fourier_interpolates_at_nodes() {
    let periodic = [
        mirror_extend(&student_t()),
        TargetFunction::new(2, DomainKind::Symmetric, |p| {
            Complex64::from_polar((PI * p[0]).cos().exp(), (PI * p[1]).sin())
        }),
    ];
    for f in &periodic {
        for d in [0usize, 2, 7, 16] {
            let s = fourier_interpolate(f, &[d, d]).unwrap();
            let m = 2 * d + 1;
            // Nodes 2j/m fold into [−1, 1] by periodicity.
            let node = |j: usize| {
                let x = 2.0 * j as f64 / m as f64;
                if x > 1.0 { x - 2.0 } else { x }
            };
            for a in 0..m {
                for b in 0..m {
                    let p = vec![node(a), node(b)];
                    let v = evaluate_series(&s, std::slice::from_ref(&p)).unwrap()[0];
                    assert!((v - f.eval(&p)).norm() < 1e-10, "d={d}");
                }
            }
        }
    }
}

#[test]
fn fourier_coefficients_do_not_blow_up() {
    let f = mirror_extend(&student_t());
    let peak = f.eval(&[0.5, 0.5]).norm();
    for d in [4usize, 16, 32] {
        let s = fourier_interpolate(&f, &[d, d]).unwrap();
        let energy: f64 = s.coeffs().iter().map(|c| c.norm_sqr()).sum();
        assert!(energy <= peak * peak + 1e-9);
    }
}

fn grid_error(s: &SeriesApprox, f: &TargetFunction, g: &GridSpec) -> f64 {
    let approx: Vec<Complex64> = evaluate_on_grid(s, &g.axes()).unwrap();
    let norm = approx.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let amps: Vec<Complex64> = approx.iter().map(|v| v / norm).collect();
    rescaled_max_error(&amps, &target_on_grid(f, g).unwrap())
}

#[test]
fn ricker_convergence() {
    let f = ricker(0.5);
    let g = GridSpec::uniform(2, 4, Convention::ChebyshevSym).unwrap();
    let errs: Vec<f64> = [3usize, 7, 15, 31]
        .iter()
        .map(|&d| grid_error(&chebyshev_interpolate(&f, &[d, d]).unwrap(), &f, &g))
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] <= 1.1 * w[0], "{errs:?}");
    }
    let s15 = chebyshev_interpolate(&f, &[15, 15]).unwrap();
    let sup15 = dense_sup_error(&s15, &f, 2001).unwrap();
    assert!(errs[2] < 1e-5 && errs[2] <= sup15 * 1.05, "{} vs {sup15}", errs[2]);
    let s16 = chebyshev_interpolate(&f, &[16, 16]).unwrap();
    assert!(grid_error(&s16, &f, &g) < 1e-6);
    assert!(errs[3] < 1e-12);
}

#[test]
fn student_t_convergence_is_first_order() {
    let f = student_t();
    let m = mirror_extend(&f);
    let g = GridSpec::uniform(2, 4, Convention::FourierUnit).unwrap();
    let errs: Vec<f64> = [8usize, 16, 32]
        .iter()
        .map(|&d| grid_error(&fourier_interpolate(&m, &[d, d]).unwrap(), &f, &g))
        .collect();
    // Frozen from the independent run: 0.0484, 0.0198, 0.0103.
    for (e, want) in errs.iter().zip([0.04842, 0.01982, 0.01026]) {
        assert!((e - want).abs() < 2e-4, "{errs:?}");
    }
    for w in errs.windows(2) {
        let r = w[0] / w[1];
        assert!((1.5..=3.0).contains(&r), "{errs:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_is_coefficient_l1(re in proptest::collection::vec(-3.0f64..3.0, 9), im in proptest::collection::vec(-3.0f64..3.0, 9)) {
        let c: Vec<Complex64> = re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)).collect();
        let want: f64 = c.iter().map(|z| z.norm()).sum();
        let s = SeriesApprox::new(Basis::Fourier, &[1, 1], c).unwrap();
        prop_assert!((s.norm() - want).abs() <= 1e-12 * want.max(1.0));
    }

    #[test]
    fn evaluation_paths_agree(seed in 0u64..1000, x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let mut r = rng(seed);
        for basis in [Basis::Fourier, Basis::Chebyshev] {
            let s = random_series(&mut r, basis, &[3, 2]);
            let a = evaluate_series(&s, &[vec![x, y]]).unwrap()[0];
            let b = evaluate_on_grid(&s, &[vec![x], vec![y]]).unwrap()[0];
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}
