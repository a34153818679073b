//! Acceptance run: one PASS/FAIL line per criterion, sub-checks indented
//! underneath. Exits non-zero if any criterion fails.

#![allow(clippy::needless_range_loop)]

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::*;
use lcu_prep::circuit::{to_unitary, Circuit, Gate, GateKind, RegisterRole};
use lcu_prep::grid::{grid_points, Convention, GridSpec};
use lcu_prep::physics::{solve_coulomb_planewaves, planewave_state, to_series, Nucleus, PlaneWaveProblem};
use lcu_prep::series::{
    chebyshev_interpolate, chebyshev_t_all, evaluate_on_grid, evaluate_series, fourier_interpolate, mirror_extend,
    Basis, SeriesApprox, TargetFunction,
};
use lcu_prep::simulator::{postselect_zero_ancillas, run, sample_shots, MainLayout, Simulator};
use lcu_prep::synthesis::{
    assemble_lcu, assemble_state_prep, build_chebyshev_uv, build_controlled_powers, build_fourier_b,
    build_fourier_b_range, ceil_log2, PowerBase, QubitizedWalk,
};
use lcu_prep::verification::*;
use lcu_prep::Complex64;
use nalgebra::DMatrix;
use rand::Rng;

struct Criterion {
    lines: Vec<String>,
    ok: bool,
}

impl Criterion {
    fn new() -> Self {
        Self { lines: Vec::new(), ok: true }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.ok &= ok;
        self.lines.push(format!("    {} {}", if ok { "ok  " } else { "FAIL" }, what.into()));
    }
}

fn report(id: usize, name: &str, f: impl FnOnce(&mut Criterion)) -> bool {
    let t = Instant::now();
    let mut c = Criterion::new();
    f(&mut c);
    println!("{} criterion {id}: {name} ({:.1}s)", if c.ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
    for l in &c.lines {
        println!("{l}");
    }
    c.ok
}

fn normalized(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / n).collect()
}

fn criterion1(c: &mut Criterion) {
    let n = 5;
    let a = ceil_log2(5);
    let u = to_unitary(&build_fourier_b_range(n, 0, 5).unwrap()).unwrap();
    let xs = grid_points(Convention::FourierUnit, n).unwrap();
    let mut dev = 0.0f64;
    for k in 0..5 {
        for x in 0..32usize {
            for y in 0..32usize {
                let want = if x == y { Complex64::from_polar(1.0, PI * k as f64 * xs[x]) } else { Complex64::new(0.0, 0.0) };
                dev = dev.max((u[(k | (x << a), k | (y << a))] - want).norm());
            }
        }
    }
    c.check(dev < 1e-10, format!("Fourier branch diagonals e^(iπk x_j), k=0..4: max dev {dev:.2e}"));

    let xs = grid_points(Convention::ChebyshevSym, n).unwrap();
    let uv = to_unitary(&build_chebyshev_uv(n).unwrap()).unwrap();
    let b = ceil_log2(n);
    let mut p = DMatrix::<Complex64>::identity(uv.nrows(), uv.ncols());
    let mut dev = 0.0f64;
    for k in 0..5 {
        for x in 0..32usize {
            for y in 0..32usize {
                let want = if x == y { chebyshev_t_all(k + 1, xs[x])[k] } else { 0.0 };
                dev = dev.max((p[(x << b, y << b)] - want).norm());
            }
        }
        p = &uv * p;
    }
    c.check(dev < 1e-10, format!("Chebyshev walk blocks T_k(x_j), k=0..4: max dev {dev:.2e}"));
}

fn end_to_end(c: &mut Criterion, label: &str, s: &SeriesApprox, g: &GridSpec) {
    let circ = assemble_state_prep(s, g).unwrap();
    let q = circ.num_qubits();
    let out = postselect_zero_ancillas(&run(&circ).unwrap(), &MainLayout::from_circuit(&circ).unwrap()).unwrap();
    let want = normalized(&evaluate_on_grid(s, &g.axes()).unwrap());
    let d = phase_aligned_distance(out.amplitudes(), &want);
    let p = success_probability_analytic(s, g).unwrap();
    let dp = (out.p_success() - p).abs();
    c.check(
        d < 1e-10 && dp < 1e-10,
        format!("{label} ({q} qubits): amplitude dev {d:.2e}, p_success {:.6} vs analytic {p:.6} (dev {dp:.1e})", out.p_success()),
    );
}

fn criterion2(c: &mut Criterion) {
    let g = GridSpec::uniform(2, 4, Convention::ChebyshevSym).unwrap();
    for d in [3, 7, 15] {
        let s = chebyshev_interpolate(&ricker(0.5), &[d, d]).unwrap();
        end_to_end(c, &format!("Ricker Chebyshev d={d}, n=4"), &s, &g);
    }
    let g = GridSpec::uniform(2, 4, Convention::FourierUnit).unwrap();
    for d in [3, 7] {
        let s = fourier_interpolate(&mirror_extend(&student_t()), &[d, d]).unwrap();
        end_to_end(c, &format!("Student's t Fourier d={d}, n=4"), &s, &g);
    }
}

fn criterion3(c: &mut Criterion) {
    let f = student_t();
    let s = fourier_interpolate(&mirror_extend(&f), &[63, 63]).unwrap();
    let p = asymptotic_success_probability(&f, s.norm()).unwrap();
    c.check((p.value - 0.0752).abs() <= 1e-3, format!("Student's t p* = {:.5} (target 0.0752 ± 1e-3), quadrature rel change {:.1e}", p.value, p.rel_change));
    let f = ricker(0.5);
    let s = chebyshev_interpolate(&f, &[30, 30]).unwrap();
    let p = asymptotic_success_probability(&f, s.norm()).unwrap();
    c.check((p.value - 0.08).abs() <= 1e-2, format!("Ricker p* = {:.5} (target 0.08 ± 0.01), quadrature rel change {:.1e}", p.value, p.rel_change));
}

fn criterion4(c: &mut Criterion) {
    let t = Instant::now();
    let prob = PlaneWaveProblem::new(8, vec![Nucleus { position: [0.5; 3], w: 1.0 }]).unwrap();
    let states = solve_coulomb_planewaves(&prob, 2).unwrap();
    let solve_s = t.elapsed().as_secs_f64();
    let g7 = GridSpec::uniform(3, 7, Convention::FourierUnit).unwrap();
    for (i, (name, want)) in [("ground", 0.7047), ("excited", 0.2392)].into_iter().enumerate() {
        let p = success_probability_analytic(&to_series(&states[i].coeffs, 8).unwrap(), &g7).unwrap();
        c.check(
            (p - want).abs() <= 1e-3,
            format!("{name} (E = {:.4}) p_success at n=7: {p:.4} (target {want} ± 1e-3)", states[i].energy),
        );
    }
    c.check(solve_s < 60.0, format!("eigensolve N=8 in {solve_s:.1}s"));

    let mut r = rng(8);
    let mut counts = Vec::new();
    let mut all = true;
    for (n, a, want) in [(4, 3, 21), (5, 3, 24), (6, 3, 27), (7, 3, 30), (7, 4, 33)] {
        let modes = 1usize << a;
        let s = to_series(&random_coeffs(&mut r, modes.pow(3)), modes).unwrap();
        let q = assemble_state_prep(&s, &GridSpec::uniform(3, n, Convention::FourierUnit).unwrap()).unwrap().num_qubits();
        all &= q == want;
        counts.push(format!("(n={n},a={a})→{q}"));
    }
    c.check(all, format!("plane-wave register totals: {}", counts.join(", ")));

    let t = Instant::now();
    let g4 = GridSpec::uniform(3, 4, Convention::FourierUnit).unwrap();
    let circ = assemble_state_prep(&to_series(&states[0].coeffs, 8).unwrap(), &g4).unwrap();
    let out = postselect_zero_ancillas(&run(&circ).unwrap(), &MainLayout::from_circuit(&circ).unwrap()).unwrap();
    let pts = cube_points(&grid_points(Convention::FourierUnit, 4).unwrap());
    let want = normalized(&planewave_state(&states[0].coeffs, 8, &pts).unwrap());
    let d = phase_aligned_distance(out.amplitudes(), &want);
    c.check(
        d < 1e-10,
        format!("ground state at n=4 ({} qubits) vs direct plane-wave sum: dev {d:.2e} ({:.1}s)", circ.num_qubits(), t.elapsed().as_secs_f64()),
    );
}

fn criterion5(c: &mut Criterion) {
    let n = 9;
    let g = GridSpec::uniform(2, n, Convention::FourierUnit).unwrap();
    let axis = grid_points(Convention::FourierUnit, n).unwrap();
    let axes = vec![axis.clone(), axis.clone()];
    let settings = [("uncorrelated", 0.0, 0.139, [0.5, 0.5, 0.0413, 0.0299, 0.0]), ("correlated", 0.4, 0.134, [0.5, 0.5, 0.0415, 0.0321, 0.353])];
    for (i, (name, rho, p_want, m_want)) in settings.into_iter().enumerate() {
        let s = demo_gaussian(rho);
        let p = success_probability_analytic(&s, &g).unwrap();
        c.check((p - p_want).abs() <= 2e-3, format!("{name}: analytic p_success {p:.4} (target {p_want} ± 2e-3)"));

        let vals = evaluate_on_grid(&s, &axes).unwrap();
        let target_abs: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
        let m = density_moments(&target_abs, &axis, &axis).unwrap();
        let got = [m.mu_x, m.mu_y, m.var_x, m.var_y, m.rho];
        let worst = got.iter().zip(m_want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
        c.check(
            worst <= 5e-3,
            format!("{name}: moments of |f_d| μ=({:.4},{:.4}) σ²=({:.4},{:.4}) ρ={:.4}, worst dev {worst:.1e}", got[0], got[1], got[2], got[3], got[4]),
        );

        let t = Instant::now();
        let circ = assemble_state_prep(&s, &g).unwrap();
        let out = postselect_zero_ancillas(&run(&circ).unwrap(), &MainLayout::from_circuit(&circ).unwrap()).unwrap();
        if i == 0 {
            let d = phase_aligned_distance(out.amplitudes(), &normalized(&vals));
            let dp = (out.p_success() - p).abs();
            c.check(
                circ.num_qubits() == 24 && d < 1e-10 && dp < 1e-10,
                format!(
                    "{name}: factorized circuit, {} qubits, amplitude dev {d:.2e}, p_success dev {dp:.1e} ({:.1}s)",
                    circ.num_qubits(),
                    t.elapsed().as_secs_f64()
                ),
            );
        }

        let counts = sample_shots(&out, 20_000, 7 + i as u64).unwrap();
        let a = analyze_grid_counts(&axes, &counts, &target_abs, &default_h_grid()).unwrap();
        c.check(
            a.fidelity >= 0.95,
            format!("{name}: 20000 shots, CV bandwidth {:?}, KDE fidelity F = {:.4} (need ≥ 0.95)", a.kde.h_opt, a.fidelity),
        );
    }
}

fn mcz_cost(b: usize) -> usize {
    match b {
        0 => 0,
        1 => 1,
        2 => 6,
        b => 8 * b - 20,
    }
}

fn criterion6(c: &mut Criterion) {
    let mut r = rng(2024);

    let mut dev = 0.0f64;
    for basis in [Basis::Fourier, Basis::Chebyshev] {
        let conv = if basis == Basis::Fourier { Convention::FourierUnit } else { Convention::ChebyshevSym };
        for n in 1..=4 {
            let xs = grid_points(conv, n).unwrap();
            let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
            for d in 0..=7 {
                let s = random_series(&mut r, basis, &[d]);
                let blk = top_left_block(&assemble_lcu(&s, &GridSpec::new(vec![n], conv).unwrap()).unwrap());
                let f = evaluate_series(&s, &pts).unwrap();
                for x in 0..xs.len() {
                    for y in 0..xs.len() {
                        let want = if x == y { f[x] / s.norm() } else { Complex64::new(0.0, 0.0) };
                        dev = dev.max((blk[x][y] - want).norm());
                    }
                }
            }
        }
    }
    c.check(dev < 1e-10, format!("LCU block identity, both bases, n≤4, d≤7: max dev {dev:.2e}"));

    let mut dev = 0.0f64;
    for n in 1..=4 {
        let xs = grid_points(Convention::ChebyshevSym, n).unwrap();
        let b = ceil_log2(n);
        let u = to_unitary(&build_chebyshev_uv(n).unwrap()).unwrap();
        let mut p = DMatrix::<Complex64>::identity(u.nrows(), u.ncols());
        for k in 0..=8 {
            for x in 0..1usize << n {
                for y in 0..1usize << n {
                    let want = if x == y { chebyshev_t_all(k + 1, xs[x])[k] } else { 0.0 };
                    dev = dev.max((p[(x << b, y << b)] - want).norm());
                }
            }
            p = &u * p;
        }
    }
    c.check(dev < 1e-10, format!("qubitization power law, n≤4, k≤8: max dev {dev:.2e}"));

    let mut dev = 0.0f64;
    for a in 1..=2 {
        for n in 1..=3 {
            let w = QubitizedWalk::new(n).unwrap();
            let fast = build_controlled_powers(PowerBase::Walk(&w), a).unwrap();
            let slow = build_controlled_powers(PowerBase::Plain(&w.to_circuit().unwrap()), a).unwrap();
            let (uf, us) = (to_unitary(&fast).unwrap(), to_unitary(&slow).unwrap());
            dev = dev.max(phase_aligned_distance(uf.as_slice(), us.as_slice()));

            let mut ph = Circuit::new();
            ph.add_register("main", RegisterRole::Main(0), n).unwrap();
            for j in 0..n {
                ph.push(Gate::PhaseShift { theta: PI * (1 << j) as f64 / ((1 << n) - 1) as f64, target: j }).unwrap();
            }
            let uf = to_unitary(&build_controlled_powers(PowerBase::PhaseDiagonal(&ph), a).unwrap()).unwrap();
            let us = to_unitary(&build_controlled_powers(PowerBase::Plain(&ph), a).unwrap()).unwrap();
            dev = dev.max(phase_aligned_distance(uf.as_slice(), us.as_slice()));
        }
    }
    c.check(dev < 1e-12, format!("control elision (walk and phase diagonal), a≤2, n≤3: max dev {dev:.2e}"));

    let mut drift = 0.0f64;
    for _ in 0..40 {
        let q = r.random_range(2..9);
        let mut circ = Circuit::new();
        circ.add_register("main_0", RegisterRole::Main(0), q).unwrap();
        for _ in 0..r.random_range(1..60) {
            let t = r.random_range(0..q);
            let o = (t + r.random_range(1..q)) % q;
            let gate = match r.random_range(0..7) {
                0 => Gate::Hadamard { target: t },
                1 => Gate::ry(r.random_range(-3.0..3.0), t),
                2 => Gate::Cx { control: o, target: t },
                3 => Gate::ControlledPhase { theta: r.random_range(-3.0..3.0), control: o, target: t },
                4 => Gate::UniformlyControlledRy { controls: vec![o], target: t, angles: vec![0.4, -2.1] },
                5 => Gate::DiagonalPhase { qubits: vec![t, o], phases: vec![0.1, 1.0, -0.5, 2.5] },
                _ => Gate::PhaseShift { theta: 0.9, target: t },
            };
            circ.push(gate).unwrap();
        }
        Simulator::default().run_observed(&circ, |_, sv| drift = drift.max((sv.norm_sqr() - 1.0).abs())).unwrap();
    }
    c.check(drift < 1e-12, format!("norm preservation after every gate, 40 random circuits: max drift {drift:.1e}"));

    let mut bad = 0;
    for n in 1..=6 {
        let w = QubitizedWalk::new(n).unwrap();
        let b = ceil_log2(n);
        for d in 0..=15 {
            let k = build_fourier_b(n, d).unwrap().count_gates();
            let a = ceil_log2(2 * d + 1);
            bad += usize::from(k.get(GateKind::ControlledPhase) != a * n || k.cx_equivalent != 2 * a * n);
            if d == 0 {
                continue;
            }
            let a = ceil_log2(d + 1);
            let k = build_controlled_powers(PowerBase::Walk(&w), a).unwrap().count_gates();
            let blocks = (1usize << a) - 1;
            let mcz = if n >= 2 { blocks * (n + 1) } else { 1 };
            let tree_cx = if b == 0 { 0 } else { (1usize << b) - 2 };
            let cx = if b == 0 {
                n * mcz_cost(1)
            } else {
                n * mcz_cost(b + 1) + (blocks - 1) * n * mcz_cost(b) + blocks * mcz_cost(b) + blocks * 2 * tree_cx
            };
            bad += usize::from(k.get(GateKind::MultiControlledZ) != mcz || k.cx_equivalent != cx);
        }
    }
    c.check(bad == 0, format!("gate-count formulas exact for n≤6, d≤15: {bad} mismatches"));

    let rk = ricker(0.5);
    let mut dev = 0.0f64;
    for d in [0usize, 1, 4, 9, 16] {
        let s = chebyshev_interpolate(&rk, &[d, d]).unwrap();
        let roots: Vec<f64> = (0..=d).map(|m| (PI * (m as f64 + 0.5) / (d + 1) as f64).cos()).collect();
        for &x in &roots {
            for &y in &roots {
                let p = vec![x, y];
                dev = dev.max((evaluate_series(&s, std::slice::from_ref(&p)).unwrap()[0] - rk.eval(&p)).norm());
            }
        }
    }
    let f: TargetFunction = mirror_extend(&student_t());
    for d in [0usize, 2, 7, 16] {
        let s = fourier_interpolate(&f, &[d, d]).unwrap();
        let m = 2 * d + 1;
        let node = |j: usize| {
            let x = 2.0 * j as f64 / m as f64;
            if x > 1.0 { x - 2.0 } else { x }
        };
        for a in 0..m {
            for b in 0..m {
                let p = vec![node(a), node(b)];
                dev = dev.max((evaluate_series(&s, std::slice::from_ref(&p)).unwrap()[0] - f.eval(&p)).norm());
            }
        }
    }
    c.check(dev < 1e-10, format!("interpolation-node exactness, d≤16, both bases: max dev {dev:.2e}"));
}

fn main() {
    let t = Instant::now();
    let results = [
        report(1, "basis block-encodings at n=5", criterion1),
        report(2, "end-to-end state preparation at machine precision", criterion2),
        report(3, "asymptotic success probabilities", criterion3),
        report(4, "Coulomb plane-wave states", criterion4),
        report(5, "Gaussian experiment, noiseless analogue", criterion5),
        report(6, "property suites", criterion6),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} of {} criteria passed ({:.1}s)", results.len() - failed, results.len(), t.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
