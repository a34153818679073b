use lcu_prep::grid::GridSpec;
use lcu_prep::series::{evaluate_on_grid, SeriesApprox, TargetFunction};
use lcu_prep::simulator::{postselect_zero_ancillas, sample_shots, MainLayout, PreparationOutcome, Simulator};
use lcu_prep::synthesis::{assemble_state_prep, resource_report};
use lcu_prep::verification::{
    analyze_grid_counts, asymptotic_success_probability, classical_fidelity, default_h_grid, dense_sup_error,
    rescaled_max_error, success_probability_analytic, target_on_grid,
};
use lcu_prep::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::config::{ConfigError, Loaded};
use crate::output::{read_counts, write_amplitudes, write_counts, write_grid_table, OutDir};

pub struct Ctx {
    pub loaded: Loaded,
    pub out: OutDir,
    pub seed: u64,
    pub qubit_cap: Option<usize>,
}

/// Reference values on the grid: the target if it is a function, else the
/// series itself (coefficient files, plane-wave states).
fn reference(f: Option<&TargetFunction>, s: &SeriesApprox, g: &GridSpec) -> anyhow::Result<Vec<Complex64>> {
    Ok(match f {
        Some(f) => target_on_grid(f, g)?,
        None => evaluate_on_grid(s, &g.axes())?,
    })
}

fn normalized(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / n).collect()
}

fn p_star(f: Option<&TargetFunction>, s: &SeriesApprox) -> anyhow::Result<Option<f64>> {
    let Some(f) = f else { return Ok(None) };
    let p = asymptotic_success_probability(f, s.norm())?;
    if !p.converged {
        log::warn!("p* quadrature not converged (relative change {:.2e})", p.rel_change);
    }
    Ok(Some(p.value))
}

#[derive(Serialize)]
struct ConvergenceRow {
    degree: usize,
    coefficients: usize,
    norm: f64,
    max_dense_error: Option<f64>,
    max_grid_error: Option<f64>,
}

pub fn approx(ctx: &Ctx) -> anyhow::Result<()> {
    let l = &ctx.loaded;
    let cfg = &l.config;
    let g = l.grid()?;
    let f = l.target_function()?;
    let s = l.series(&cfg.degrees)?;
    ctx.out.write_text("coefficients.json", &(s.to_json()? + "\n"))?;

    let sweep: Vec<Vec<usize>> = if cfg.degree_sweep.is_empty() {
        vec![cfg.degrees.clone()]
    } else {
        cfg.degree_sweep.iter().map(|&d| vec![d; cfg.degrees.len()]).collect()
    };
    let mut rows = Vec::new();
    for degrees in sweep {
        let sd = l.series(&degrees)?;
        let (dense, grid) = match &f {
            Some(f) => {
                let approx = normalized(&evaluate_on_grid(&sd, &g.axes())?);
                (Some(dense_sup_error(&sd, f, l.dense_points())?), Some(rescaled_max_error(&approx, &target_on_grid(f, &g)?)))
            }
            None => (None, None),
        };
        log::info!("degrees {degrees:?}: dense error {dense:?}");
        rows.push(ConvergenceRow {
            degree: *degrees.iter().max().unwrap_or(&0),
            coefficients: sd.coeffs().len(),
            norm: sd.norm(),
            max_dense_error: dense,
            max_grid_error: grid,
        });
    }
    let mut w = ctx.out.csv("convergence.csv")?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    ctx.out.write_json(
        "approx_report.json",
        &json!({
            "config_hash": l.hash,
            "degrees": s.degrees(),
            "norm": s.norm(),
            "convergence": rows,
        }),
    )?;
    Ok(())
}

pub fn synth(ctx: &Ctx) -> anyhow::Result<()> {
    let l = &ctx.loaded;
    let g = l.grid()?;
    let s = l.series(&l.config.degrees)?;
    let c = assemble_state_prep(&s, &g)?;
    ctx.out.write_text("circuit.json", &(c.to_json()? + "\n"))?;
    let rep = resource_report(&c);
    println!("{} qubits ({} main, {} coefficient, {} block-encoding), {} CX-equivalent",
        rep.total_qubits, rep.main_qubits, rep.coeff_qubits, rep.be_qubits, rep.gates.cx_equivalent);
    ctx.out.write_json("resources.json", &json!({ "config_hash": l.hash, "resources": rep }))?;
    Ok(())
}

fn simulate_outcome(ctx: &Ctx, s: &SeriesApprox, g: &GridSpec) -> anyhow::Result<PreparationOutcome> {
    let sim = &ctx.loaded.config.simulation;
    if !sim.enabled {
        return Err(ConfigError("simulation is disabled in the config".into()).into());
    }
    let c = assemble_state_prep(s, g)?;
    let cap = ctx.qubit_cap.or(sim.qubit_cap);
    let simulator = cap.map(Simulator::with_qubit_cap).unwrap_or_default();
    log::info!("simulating {} qubits, {} gates", c.num_qubits(), c.gates().len());
    let sv = simulator.run(&c)?;
    Ok(postselect_zero_ancillas(&sv, &MainLayout::from_circuit(&c)?)?)
}

pub fn simulate(ctx: &Ctx) -> anyhow::Result<()> {
    let l = &ctx.loaded;
    let g = l.grid()?;
    let f = l.target_function()?;
    let s = l.series(&l.config.degrees)?;
    let out = simulate_outcome(ctx, &s, &g)?;
    write_amplitudes(&ctx.out, "amplitudes.csv", &g, out.amplitudes())?;

    let refv = reference(f.as_ref(), &s, &g)?;
    let ref_prob: Vec<f64> = refv.iter().map(|v| v.norm_sqr()).collect();
    let report = json!({
        "config_hash": l.hash,
        "qubits": assemble_state_prep(&s, &g)?.num_qubits(),
        "p_success": out.p_success(),
        "p_success_analytic": success_probability_analytic(&s, &g)?,
        "p_star": p_star(f.as_ref(), &s)?,
        "max_grid_error": rescaled_max_error(out.amplitudes(), &refv),
        "fidelity": classical_fidelity(&out.probabilities(), &ref_prob)?,
        "reference": if f.is_some() { "target" } else { "series" },
    });
    println!("p_success = {:.6}", out.p_success());
    ctx.out.write_json("simulate_report.json", &report)?;
    Ok(())
}

pub fn sample(ctx: &Ctx) -> anyhow::Result<()> {
    let l = &ctx.loaded;
    let g = l.grid()?;
    let s = l.series(&l.config.degrees)?;
    let shots = l.config.simulation.shots;
    if shots == 0 {
        return Err(ConfigError("simulation.shots must be positive for sampling".into()).into());
    }
    let out = simulate_outcome(ctx, &s, &g)?;
    let counts = sample_shots(&out, shots, ctx.seed)?;
    write_counts(&ctx.out, "counts.csv", &g, &counts)?;
    ctx.out.write_json(
        "sample_report.json",
        &json!({
            "config_hash": l.hash,
            "seed": ctx.seed,
            "shots": shots,
            "distinct_outcomes": counts.len(),
            "p_success": out.p_success(),
        }),
    )?;
    Ok(())
}

pub fn analyze(ctx: &Ctx) -> anyhow::Result<()> {
    let l = &ctx.loaded;
    let g = l.grid()?;
    let f = l.target_function()?;
    let s = l.series(&l.config.degrees)?;
    let path = match &l.config.outputs.counts {
        Some(p) => l.resolve(p),
        None => ctx.out.path("counts.csv"),
    };
    let counts = read_counts(&path, &g)?;
    let axes = g.axes();
    let fd = evaluate_on_grid(&s, &axes)?;
    // Shots are compared with the positive target |f_d|.
    let target_abs: Vec<f64> = fd.iter().map(|v| v.norm()).collect();
    let a = analyze_grid_counts(&axes, &counts, &target_abs, &default_h_grid())?;

    let max_grid_error = match &f {
        Some(f) => Some(rescaled_max_error(&normalized(&fd), &target_on_grid(f, &g)?)),
        None => None,
    };
    let t: f64 = target_abs.iter().sum();
    let target_norm: Vec<f64> = target_abs.iter().map(|v| v / t).collect();
    write_grid_table(&ctx.out, "kde.csv", &g, &[("target", &target_norm), ("estimate", &a.estimate)])?;
    let mut w = ctx.out.csv("cv_scan.csv")?;
    w.write_record(["h", "q"])?;
    for (h, q) in a.kde.h_grid.iter().zip(&a.kde.q) {
        w.write_record([h.to_string(), q.to_string()])?;
    }
    w.flush()?;

    println!("shots = {}, h_opt = {:?}, F = {:.4}", a.shots, a.kde.h_opt, a.fidelity);
    ctx.out.write_json(
        "analysis_report.json",
        &json!({
            "config_hash": l.hash,
            "p_success": success_probability_analytic(&s, &g)?,
            "p_star": p_star(f.as_ref(), &s)?,
            "max_grid_error": max_grid_error,
            "fidelity": a.fidelity,
            "moments": { "target": a.moments_target, "estimate": a.moments_estimate },
            "kde": a.kde,
            "marginals": a.marginals,
            "shots": a.shots,
        }),
    )?;
    Ok(())
}
