use proptest::prelude::*;
use qproc_core::linalg::{StateVector, C64};
use qproc_core::random::{haar_unitary, random_density, random_kraus, rng_from_seed};
use qproc_core::tomography::*;

fn random_channel(seed: u64, kraus: usize) -> TransferOperators {
    let mut rng = rng_from_seed(seed);
    TransferOperators::from_kraus(&random_kraus(&mut rng, 4, kraus)).unwrap()
}

fn exact_round_trip(r: &TransferOperators, design: &InputDesign) -> TransferOperators {
    let m = build_m_matrix(design).unwrap();
    let outputs = design_outputs(r, design).unwrap();
    characterize(&outputs, &m, TomographySettings::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn both_designs_recover_random_channels(seed in any::<u64>(), kraus in 1usize..5) {
        let r = random_channel(seed, kraus);
        for design in [product_input_design(), reference_input_design()] {
            let back = exact_round_trip(&r, &design);
            prop_assert!(back.max_abs_diff(&r) < 1e-10);
        }
    }

    #[test]
    fn designs_agree_with_each_other(seed in any::<u64>()) {
        let r = random_channel(seed, 3);
        let a = exact_round_trip(&r, &product_input_design());
        let b = exact_round_trip(&r, &reference_input_design());
        prop_assert!(a.max_abs_diff(&b) < 1e-9);
    }

    #[test]
    fn pauli_coefficients_round_trip(seed in any::<u64>(), rank in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let rho = random_density(&mut rng, 4, rank);
        let back = reconstruct_from_coefficients(&wootters_coefficients(&rho).unwrap());
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn recovered_operators_predict_unseen_inputs(seed in any::<u64>()) {
        let r = random_channel(seed, 2);
        let recovered = exact_round_trip(&r, &product_input_design());
        let mut rng = rng_from_seed(seed ^ 0xABCD);
        for _ in 0..10 {
            let rho = random_density(&mut rng, 4, 3);
            let predicted = apply_process(&recovered, &rho).unwrap();
            let truth = apply_to_operator(&r, rho.matrix()).unwrap();
            prop_assert!((predicted.matrix() - &truth).frobenius_norm() < 1e-9);
        }
    }
}

#[test]
fn ideal_gate_pipeline_is_exact() {
    let u = controlled_phase();
    let r = transfer_operators_of_unitary(&u).unwrap();
    let back = exact_round_trip(&r, &product_input_design());
    assert!(back.max_abs_diff(&r) < 1e-10);
    // the uniform product input becomes a maximally entangled output
    let plus = StateVector::normalized(vec![C64::new(1.0, 0.0); 4]).unwrap();
    let out = apply_process(&back, &plus.projector()).unwrap();
    let expect = StateVector::normalized([1.0, 1.0, 1.0, -1.0].iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap();
    assert!(out.matrix().max_abs_diff(expect.projector().matrix()) < 1e-10);
}

#[test]
fn unitary_channel_validates_cleanly() {
    let mut rng = rng_from_seed(99);
    let r = transfer_operators_of_unitary(&haar_unitary(&mut rng, 4)).unwrap();
    let report = validate_transfer_operators(&r, &product_input_design()).unwrap();
    assert!(report.max_trace_deviation < 1e-12);
    assert!(report.max_hermiticity_deviation < 1e-12);
    assert!(report.min_output_eigenvalue > -1e-12);
    assert!(report.max_leakage() < 1e-12);
}

#[test]
fn shot_noise_shrinks_with_more_shots() {
    let r = random_channel(5, 2);
    let design = product_input_design();
    let m = build_m_matrix(&design).unwrap();
    let outputs = design_outputs(&r, &design).unwrap();
    let err = |shots: u64| -> f64 {
        (0..8)
            .map(|seed| {
                let s = TomographySettings { shots, seed, clip_to_psd: false };
                characterize(&outputs, &m, s).unwrap().rms_diff(&r)
            })
            .sum::<f64>()
            / 8.0
    };
    let (coarse, fine) = (err(100), err(10_000));
    // 100x the shots should cut the error by about 10x
    assert!(coarse / fine > 5.0 && coarse / fine < 20.0, "{coarse} {fine}");
}

#[test]
fn transfer_operators_survive_json() {
    let r = random_channel(7, 2);
    let text = serde_json::to_string(&r).unwrap();
    let back: TransferOperators = serde_json::from_str(&text).unwrap();
    assert_eq!(back.out_dim(), r.out_dim());
    assert!(back.max_abs_diff(&r) < 1e-15);
}
