use std::f64::consts::PI;

use qproc_core::iontrap::{simulate_process, IonTrapParams, SimulationOptions};
use qproc_core::linalg::StateVector;
use qproc_core::metrics::*;
use qproc_core::random::{haar_unitary, random_kraus, rng_from_seed};
use qproc_core::tomography::*;
use rand::Rng;

fn random_channel(seed: u64) -> TransferOperators {
    let mut rng = rng_from_seed(seed);
    TransferOperators::from_kraus(&random_kraus(&mut rng, 4, 2)).unwrap()
}

fn quick() -> OptimizerConfig {
    OptimizerConfig { restarts: 8, ..OptimizerConfig::default() }
}

fn product_grid() -> Vec<ProductStateParams> {
    let theta = grid_axis(PI, 9, true);
    let phi = grid_axis(2.0 * PI, 9, false);
    let mut out = Vec::new();
    for &t1 in &theta {
        for &p1 in &phi {
            for &t2 in &theta {
                for &p2 in &phi {
                    out.push(ProductStateParams { theta1: t1, phi1: p1, theta2: t2, phi2: p2 });
                }
            }
        }
    }
    out
}

/// Maximally entangled states `(U ⊗ I)|Φ+>` on a 9^3 grid of Euler angles;
/// `(U1 ⊗ U2)|Φ+> = (U1 U2ᵀ ⊗ I)|Φ+>` so this covers the whole set.
fn entangled_grid() -> Vec<StateVector> {
    let full = grid_axis(2.0 * PI, 9, false);
    let half = grid_axis(PI, 9, true);
    let mut out = Vec::new();
    for &a in &full {
        for &b in &half {
            for &c in &full {
                out.push(max_entangled_state(&MaxEntangledParams { alpha1: a, beta1: b, gamma1: c, ..Default::default() }));
            }
        }
    }
    out
}

fn channels() -> Vec<(&'static str, TransferOperators)> {
    let sim = simulate_process(
        &IonTrapParams { n_max: 5, ..IonTrapParams::sideband(0.2, 0.5) },
        &product_input_design(),
        &SimulationOptions::default(),
    )
    .unwrap();
    vec![
        ("ideal", transfer_operators_of_unitary(&controlled_phase()).unwrap()),
        ("random", random_channel(21)),
        ("ion trap", sim.transfer),
    ]
}

#[test]
fn grid_oracle_bounds_quantum_degree_and_entanglement_capability() {
    let inputs = product_grid();
    let entangled = entangled_grid();
    for (name, r) in channels() {
        let outputs: Vec<_> = inputs.iter().map(|p| product_output(&r, p).unwrap()).collect();
        let mut grid_max = f64::NEG_INFINITY;
        let mut grid_min = f64::INFINITY;
        for out in &outputs {
            for me in &entangled {
                grid_max = grid_max.max(out.sandwich(me.amplitudes(), me.amplitudes()).re);
            }
            grid_min = grid_min.min(min_partial_transpose_eigenvalue(out).unwrap());
        }
        let q = quantum_degree(&r, &OptimizerConfig::default()).unwrap();
        let e = entanglement_capability(&r, &OptimizerConfig::default()).unwrap();
        assert!(grid_max <= q.value + 1e-6, "{name}: grid {grid_max} > Q {}", q.value);
        assert!(grid_min >= e.value - 1e-6, "{name}: grid {grid_min} < E {}", e.value);
        assert!(q.value <= 1.0 + 1e-12 && e.value >= -0.5 - 1e-12);
    }
}

#[test]
fn reported_optima_are_attained_by_their_arguments() {
    for (name, r) in channels() {
        let q = quantum_degree(&r, &quick()).unwrap();
        let out = product_output(&r, &q.input).unwrap();
        let me = max_entangled_state(&q.entangled);
        assert!((out.sandwich(me.amplitudes(), me.amplitudes()).re - q.value).abs() < 1e-10, "{name}");
        let e = entanglement_capability(&r, &quick()).unwrap();
        let at = min_partial_transpose_eigenvalue(&product_output(&r, &e.input).unwrap()).unwrap();
        assert!((at - e.value).abs() < 1e-10, "{name}");
    }
}

#[test]
fn negative_capability_certifies_an_entangled_output() {
    let r = transfer_operators_of_unitary(&controlled_phase()).unwrap();
    let e = entanglement_capability(&r, &quick()).unwrap();
    assert!(e.value < 0.0);
    let out = qproc_core::linalg::DensityMatrix::new(product_output(&r, &e.input).unwrap()).unwrap();
    let pt = qproc_core::linalg::partial_transpose(&out, &[2, 2], 0).unwrap();
    let (values, _) = qproc_core::linalg::eig_hermitian(&pt).unwrap();
    assert!(values[0] < -0.4);
}

#[test]
fn more_restarts_never_lower_quantum_degree() {
    let r = random_channel(22);
    let mut last = f64::NEG_INFINITY;
    for restarts in [1, 4, 16] {
        let q = quantum_degree(&r, &OptimizerConfig { restarts, ..OptimizerConfig::default() }).unwrap();
        assert!(q.value >= last);
        last = q.value;
    }
}

#[test]
fn optimizers_are_deterministic() {
    let r = random_channel(23);
    let opt = quick();
    assert_eq!(quantum_degree(&r, &opt).unwrap(), quantum_degree(&r, &opt).unwrap());
    assert_eq!(entanglement_capability(&r, &opt).unwrap(), entanglement_capability(&r, &opt).unwrap());
}

#[test]
fn fidelity_is_linear_in_the_process() {
    let mut rng = rng_from_seed(24);
    let u = haar_unitary(&mut rng, 4);
    for k in 0..10 {
        let (a, b) = (random_channel(100 + k), random_channel(200 + k));
        let p: f64 = rng.random();
        let mix = TransferOperators::convex_mix(p, &a, &b).unwrap();
        let lhs = gate_fidelity(&mix, &u).unwrap();
        let rhs = p * gate_fidelity(&a, &u).unwrap() + (1.0 - p) * gate_fidelity(&b, &u).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}

#[test]
fn closed_forms_match_haar_averages() {
    let mut rng = rng_from_seed(25);
    for k in 0..3 {
        let u = haar_unitary(&mut rng, 4);
        let r = random_channel(300 + k);
        let (m, s) = gate_fidelity_montecarlo(&r, &u, 30_000, 400 + k).unwrap();
        let f = gate_fidelity(&r, &u).unwrap();
        assert!((f - m).abs() < 3.0 * s, "F {f} vs {m} ± {s}");
        let (m, s) = gate_purity_montecarlo(&r, 30_000, 500 + k).unwrap();
        let p = gate_purity(&r).unwrap();
        assert!((p - m).abs() < 3.0 * s, "P {p} vs {m} ± {s}");
    }
}

#[test]
fn identity_channel_reference_values() {
    let r = TransferOperators::identity_process();
    let q = quantum_degree(&r, &quick()).unwrap();
    assert!((q.value - 0.5).abs() < 1e-6);
    assert!(!chsh_violation_check(q.value));
    let e = entanglement_capability(&r, &quick()).unwrap();
    assert!(e.value.abs() < 1e-6);
}
