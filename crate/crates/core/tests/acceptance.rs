//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use qproc_core::iontrap::{simulate_process, IonTrapParams, SimulationOptions};
use qproc_core::linalg::{kron, matrix_exp, ComplexMatrix, C64};
use qproc_core::metrics::*;
use qproc_core::random::{ginibre, haar_unitary, random_density, random_hermitian, random_kraus, rng_from_seed};
use qproc_core::tomography::*;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_secs: f64) -> bool {
    elapsed.as_secs_f64() < limit_secs
}

fn exact_recovery(r: &TransferOperators, design: &InputDesign) -> TransferOperators {
    let m = build_m_matrix(design).unwrap();
    characterize(&design_outputs(r, design).unwrap(), &m, TomographySettings::default()).unwrap()
}

fn random_channel(seed: u64, kraus: usize) -> TransferOperators {
    let mut rng = rng_from_seed(seed);
    TransferOperators::from_kraus(&random_kraus(&mut rng, 4, kraus)).unwrap()
}

fn pipeline_exactness() -> Outcome {
    let start = Instant::now();
    let ideal = transfer_operators_of_unitary(&controlled_phase()).unwrap();
    let err = exact_recovery(&ideal, &product_input_design()).max_abs_diff(&ideal);
    let t = start.elapsed();
    outcome(err < 1e-10 && within(t, 1.0), format!("max error {err:.2e}, {t:.2?}"))
}

fn prediction_property() -> Outcome {
    let start = Instant::now();
    let design = product_input_design();
    let mut worst = 0.0f64;
    for c in 0..10 {
        let r = random_channel(1000 + c, 1 + (c as usize % 4));
        let recovered = exact_recovery(&r, &design);
        let mut rng = rng_from_seed(2000 + c);
        for k in 0..100 {
            let rho = random_density(&mut rng, 4, 2 + k % 3);
            let predicted = apply_process(&recovered, &rho).unwrap();
            let truth = apply_to_operator(&r, rho.matrix()).unwrap();
            worst = worst.max((predicted.matrix() - &truth).frobenius_norm());
        }
    }
    let t = start.elapsed();
    outcome(worst < 1e-9 && within(t, 10.0), format!("worst Frobenius error {worst:.2e}, {t:.2?}"))
}

fn analytic_metric_values() -> Outcome {
    let u = controlled_phase();
    let opt = OptimizerConfig::default();
    let ideal = compute_all_metrics(&transfer_operators_of_unitary(&u).unwrap(), &u, &opt).unwrap();
    let depol = compute_all_metrics(&TransferOperators::fully_depolarizing(), &u, &opt).unwrap();
    let mix = TransferOperators::convex_mix(
        0.8,
        &transfer_operators_of_unitary(&u).unwrap(),
        &TransferOperators::fully_depolarizing(),
    )
    .unwrap();
    let f_mix = gate_fidelity(&mix, &u).unwrap();
    let ideal_err = [
        ideal.fidelity - 1.0,
        ideal.purity - 1.0,
        ideal.quantum_degree - 1.0,
        ideal.entanglement_capability + 0.5,
    ]
    .iter()
    .fold(0.0f64, |a, x| a.max(x.abs()));
    let depol_err = [depol.fidelity, depol.purity, depol.quantum_degree, depol.entanglement_capability]
        .iter()
        .fold(0.0f64, |a, x| a.max((x - 0.25).abs()));
    let mix_err = (f_mix - 0.85).abs();
    outcome(
        ideal_err < 1e-6 && depol_err < 1e-6 && mix_err < 1e-9,
        format!("ideal {ideal_err:.1e}, depolarizing {depol_err:.1e}, mix F {f_mix:.12} (err {mix_err:.1e})"),
    )
}

fn formula_vs_oracle() -> Outcome {
    let start = Instant::now();
    let samples = 100_000;
    let rows: Vec<(f64, f64)> = (0..10u64)
        .into_par_iter()
        .map(|c| {
            let r = random_channel(3000 + c, 2);
            let u = haar_unitary(&mut rng_from_seed(4000 + c), 4);
            let (fm, fs) = gate_fidelity_montecarlo(&r, &u, samples, 5000 + c).unwrap();
            let (pm, ps) = gate_purity_montecarlo(&r, samples, 6000 + c).unwrap();
            let f = gate_fidelity(&r, &u).unwrap();
            let p = gate_purity(&r).unwrap();
            ((f - fm).abs() / fs, (p - pm).abs() / ps)
        })
        .collect();
    let worst_f = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let worst_p = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let t = start.elapsed();
    outcome(
        worst_f < 3.0 && worst_p < 3.0 && within(t, 60.0),
        format!("worst |formula - MC| / stderr: F {worst_f:.2}, P {worst_p:.2}, {t:.2?}"),
    )
}

fn chsh_constant() -> Outcome {
    let err = (CHSH_THRESHOLD - 0.780_330_085_9).abs();
    outcome(err < 5e-11, format!("(2+3√2)/8 = {CHSH_THRESHOLD:.10}"))
}

fn sideband_params(omega: f64, n_max: usize) -> IonTrapParams {
    IonTrapParams { n_max, ..IonTrapParams::sideband(omega, 0.5) }
}

fn simulate(p: &IonTrapParams) -> TransferOperators {
    simulate_process(p, &product_input_design(), &SimulationOptions::default()).unwrap().transfer
}

fn resolved_sideband_limit() -> Outcome {
    let start = Instant::now();
    let u = controlled_phase();
    let r = simulate(&sideband_params(0.01, 5));
    let dev = r.max_abs_diff(&transfer_operators_of_unitary(&u).unwrap());
    let f = gate_fidelity(&r, &u).unwrap();
    let t = start.elapsed();
    outcome(dev < 1e-2 && f > 0.99 && within(t, 120.0), format!("max entry deviation {dev:.3e} (limit 1e-2), F {f:.6} (limit 0.99), {t:.2?}"))
}

fn rabi_frequency_trend() -> Outcome {
    let u = controlled_phase();
    let ideal = transfer_operators_of_unitary(&u).unwrap();
    let opt = OptimizerConfig::default();
    let omegas = [0.05, 0.1, 0.2, 0.5];
    let runs: Vec<(GateMetrics, f64)> = omegas
        .iter()
        .map(|&w| {
            let r = simulate(&IonTrapParams::sideband(w, 0.5));
            (compute_all_metrics(&r, &u, &opt).unwrap(), r.max_abs_diff(&ideal))
        })
        .collect();
    let pairs = runs.windows(2);
    let monotone = pairs.clone().all(|w| {
        let (a, b) = (&w[0].0, &w[1].0);
        b.fidelity <= a.fidelity && b.purity <= a.purity && b.quantum_degree <= a.quantum_degree
            && b.entanglement_capability >= a.entanglement_capability
    });
    let (dev_01, dev_05) = (runs[1].1, runs[3].1);
    let fmt = |f: fn(&GateMetrics) -> f64| runs.iter().map(|r| format!("{:.4}", f(&r.0))).collect::<Vec<_>>().join("/");
    outcome(
        monotone && 2.0 * dev_01 <= dev_05,
        format!(
            "F {} P {} Q {} E {}; deviation 0.1ν {dev_01:.3} vs 0.5ν {dev_05:.3}",
            fmt(|m| m.fidelity),
            fmt(|m| m.purity),
            fmt(|m| m.quantum_degree),
            fmt(|m| m.entanglement_capability)
        ),
    )
}

fn truncation_robustness() -> Outcome {
    let diff = simulate(&sideband_params(0.01, 5)).max_abs_diff(&simulate(&sideband_params(0.01, 7)));
    outcome(diff < 1e-6, format!("max entry change n_max 5 → 7: {diff:.2e}"))
}

/// Lindblad generator on row-major `vec(ρ)`.
fn lindblad(h: &ComplexMatrix, jumps: &[ComplexMatrix]) -> ComplexMatrix {
    let id = ComplexMatrix::identity(4);
    let mut l = (&kron(h, &id) - &kron(&id, &h.transpose())).scale(C64::new(0.0, -1.0));
    for j in jumps {
        let jdj = j.adjoint().matmul(j);
        l = &l + &(&kron(j, &j.conj()) - &(&kron(&jdj, &id) + &kron(&id, &jdj.transpose())).scale_real(0.5));
    }
    l
}

fn liouvillian_recovery() -> Outcome {
    let mut rng = rng_from_seed(7000);
    let h = random_hermitian(&mut rng, 4).scale_real(0.2);
    let jumps: Vec<ComplexMatrix> = (0..2).map(|_| ginibre(&mut rng, 4, 4).scale_real(0.25)).collect();
    let l = lindblad(&h, &jumps);
    let t = 0.6;
    let snap = |time: f64| transfer_operators_from_superoperator(&matrix_exp(&l.scale_real(time)).unwrap()).unwrap();
    let a = estimate_liouvillian(&snap(t), t).unwrap();
    let b = estimate_liouvillian(&snap(2.0 * t), 2.0 * t).unwrap();
    let residual = markovianity_residual(&a, &b);
    let zero = estimate_liouvillian(&TransferOperators::identity_process(), t).unwrap().generator.max_abs();
    outcome(residual < 1e-6 && zero < 1e-12, format!("generator mismatch t vs 2t {residual:.2e}, identity generator {zero:.1e}"))
}

fn shot_noise_scaling() -> Outcome {
    let r = random_channel(8000, 2);
    let design = product_input_design();
    let m = build_m_matrix(&design).unwrap();
    let outputs = design_outputs(&r, &design).unwrap();
    let shots = [100u64, 1_000, 10_000];
    let errors: Vec<f64> = shots
        .iter()
        .map(|&n| {
            let total: f64 = (0..20u64)
                .into_par_iter()
                .map(|seed| {
                    let s = TomographySettings { shots: n, seed, clip_to_psd: false };
                    characterize(&outputs, &m, s).unwrap().rms_diff(&r)
                })
                .sum();
            total / 20.0
        })
        .collect();
    let xs: Vec<f64> = shots.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    outcome(
        (slope + 0.5).abs() <= 0.1,
        format!("log-log slope {slope:.3} (errors {:.2e} / {:.2e} / {:.2e})", errors[0], errors[1], errors[2]),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("pipeline exactness", pipeline_exactness),
        ("prediction property", prediction_property),
        ("analytic metric values", analytic_metric_values),
        ("formula vs Monte-Carlo oracle", formula_vs_oracle),
        ("CHSH threshold constant", chsh_constant),
        ("resolved-sideband limit", resolved_sideband_limit),
        ("Rabi-frequency trend", rabi_frequency_trend),
        ("truncation robustness", truncation_robustness),
        ("Liouvillian recovery", liouvillian_recovery),
        ("shot-noise scaling", shot_noise_scaling),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !result.pass {
            failures += 1;
        }
        println!("criterion {:>2} {}: {} ({})", k + 1, if result.pass { "PASS" } else { "FAIL" }, name, result.detail);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
