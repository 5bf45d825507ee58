use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qproc_core::iontrap::{simulate_process, DurationMode, IonTrapParams, SimulationOptions};
use qproc_core::metrics::{chsh_violation_check, compute_all_metrics, GateMetrics, OptimizerConfig};
use qproc_core::tomography::{
    controlled_phase, estimate_liouvillian, markovianity_residual, product_input_design, transfer_operators_of_unitary,
    TomographySettings, TransferOperators,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Durations, Mode, RunConfig};
use crate::output::{
    egrid, egrid_hermiticity_deviation, write_complex_csv, write_json, write_leakage_csv, write_sweep_csv, SweepRow,
    EGRID_HERMITICITY_TOL,
};

/// Generator mismatch between the `t` and `2t` snapshots above which the
/// process is reported as non-Markovian.
pub const MARKOVIANITY_THRESHOLD: f64 = 1e-3;

pub fn run(mode: Mode, config: &RunConfig) -> Result<()> {
    config.validate_for(mode)?;
    let out = &config.output_dir;
    fs::create_dir_all(out).with_context(|| format!("creating output directory {}", out.display()))?;
    match mode {
        Mode::Ideal => cmd_ideal(config),
        Mode::Simulate => cmd_simulate(config),
        Mode::Sweep => cmd_sweep(config),
        Mode::Metrics => cmd_metrics(config),
        Mode::Liouvillian => cmd_liouvillian(config),
    }
}

fn optimizer(config: &RunConfig) -> OptimizerConfig {
    OptimizerConfig { seed: config.seed, ..OptimizerConfig::default() }
}

fn simulation_options(config: &RunConfig) -> SimulationOptions {
    SimulationOptions {
        durations: match config.durations {
            Durations::Analytic => DurationMode::Analytic,
            Durations::Calibrated => DurationMode::Calibrated,
        },
        tomography: TomographySettings { shots: config.shots, seed: config.seed, clip_to_psd: false },
    }
}

fn out_path(config: &RunConfig, name: &str) -> PathBuf {
    config.output_dir.join(name)
}

/// Writes `egrid.csv` after checking the grid's Hermiticity.
fn emit_grid(config: &RunConfig, r: &TransferOperators) -> Result<()> {
    let grid = egrid(r);
    let dev = egrid_hermiticity_deviation(&grid);
    if dev > EGRID_HERMITICITY_TOL {
        eprintln!("warning: E-grid Hermiticity deviation {dev:.3e}");
    }
    write_complex_csv(&out_path(config, "egrid.csv"), "n", &grid)
}

fn emit_process(config: &RunConfig, r: &TransferOperators) -> Result<GateMetrics> {
    emit_grid(config, r)?;
    write_json(&out_path(config, "transfer_operators.json"), r)?;
    let metrics = compute_all_metrics(r, &controlled_phase(), &optimizer(config))?;
    write_json(&out_path(config, "metrics.json"), &metrics)?;
    print_metrics(&metrics);
    Ok(metrics)
}

fn print_metrics(m: &GateMetrics) {
    println!("fidelity                {:.10}", m.fidelity);
    println!("purity                  {:.10}", m.purity);
    println!(
        "quantum degree          {:.10}{}",
        m.quantum_degree,
        if chsh_violation_check(m.quantum_degree) { " (violates CHSH)" } else { "" }
    );
    println!("entanglement capability {:.10}", m.entanglement_capability);
    println!("max leakage             {:.3e}", m.max_leakage);
    if !m.optimizer_converged {
        eprintln!("warning: optimizer did not converge; reporting best values found");
    }
}

pub fn cmd_ideal(config: &RunConfig) -> Result<()> {
    let r = transfer_operators_of_unitary(&controlled_phase())?;
    emit_process(config, &r)?;
    Ok(())
}

pub fn cmd_simulate(config: &RunConfig) -> Result<()> {
    let design = product_input_design();
    let sim = simulate_process(&config.iontrap, &design, &simulation_options(config))?;
    emit_process(config, &sim.transfer)?;
    write_leakage_csv(&out_path(config, "leakage.csv"), design.labels(), &sim.leakage)?;
    let ideal = transfer_operators_of_unitary(&controlled_phase())?;
    println!("max entry deviation from ideal {:.6e}", sim.transfer.max_abs_diff(&ideal));
    Ok(())
}

fn sweep_point(config: &RunConfig, omega: f64, eta: f64) -> Result<SweepRow> {
    let params =
        IonTrapParams { omega1: omega, omega2: omega, eta_cm: eta, eta_r: eta, ..config.iontrap.clone() };
    let sim = simulate_process(&params, &product_input_design(), &simulation_options(config))?;
    let m = compute_all_metrics(&sim.transfer, &controlled_phase(), &optimizer(config))?;
    Ok(SweepRow {
        omega_over_nu: omega,
        eta,
        fidelity: m.fidelity,
        purity: m.purity,
        quantum_degree: m.quantum_degree,
        entanglement_capability: m.entanglement_capability,
        max_leakage: m.max_leakage,
    })
}

pub fn cmd_sweep(config: &RunConfig) -> Result<()> {
    let points: Vec<(f64, f64)> = config
        .sweep_etas()
        .into_iter()
        .flat_map(|eta| config.sweep.omega_values.iter().map(move |&w| (w, eta)))
        .collect();
    let rows = points.par_iter().map(|&(w, eta)| sweep_point(config, w, eta)).collect::<Result<Vec<_>>>()?;
    write_sweep_csv(&out_path(config, "sweep.csv"), &rows)?;
    println!("wrote {} sweep points", rows.len());
    Ok(())
}

fn read_transfer_operators(path: &Path) -> Result<TransferOperators> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing transfer operators in {}", path.display()))
}

pub fn cmd_metrics(config: &RunConfig) -> Result<()> {
    let path = config.transfer_operators.as_deref().expect("validated");
    let r = read_transfer_operators(path)?;
    emit_grid(config, &r)?;
    let metrics = compute_all_metrics(&r, &controlled_phase(), &optimizer(config))?;
    write_json(&out_path(config, "metrics.json"), &metrics)?;
    print_metrics(&metrics);
    Ok(())
}

#[derive(Serialize)]
struct LiouvillianSummary {
    time: f64,
    reconstruction_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    markovianity_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    markovian: Option<bool>,
}

pub fn cmd_liouvillian(config: &RunConfig) -> Result<()> {
    let path = config.transfer_operators.as_deref().expect("validated");
    let t = config.time.expect("validated");
    let est = estimate_liouvillian(&read_transfer_operators(path)?, t)
        .with_context(|| format!("estimating the generator of {}", path.display()))?;
    write_complex_csv(&out_path(config, "liouvillian.csv"), "row", &est.generator)?;
    let mut summary =
        LiouvillianSummary { time: t, reconstruction_residual: est.reconstruction_residual, markovianity_residual: None, markovian: None };
    if let Some(path_2t) = config.transfer_operators_2t.as_deref() {
        let later = estimate_liouvillian(&read_transfer_operators(path_2t)?, 2.0 * t)
            .with_context(|| format!("estimating the generator of {}", path_2t.display()))?;
        let residual = markovianity_residual(&est, &later);
        let markovian = residual <= MARKOVIANITY_THRESHOLD;
        println!("markovianity residual {residual:.6e}");
        if !markovian {
            println!("non-Markovian: generators at t and 2t differ by more than {MARKOVIANITY_THRESHOLD:e}");
        }
        summary.markovianity_residual = Some(residual);
        summary.markovian = Some(markovian);
    }
    write_json(&out_path(config, "liouvillian.json"), &summary)?;
    if !summary.reconstruction_residual.is_finite() {
        bail!("generator reconstruction produced non-finite values");
    }
    println!("reconstruction residual {:.6e}", summary.reconstruction_residual);
    Ok(())
}
