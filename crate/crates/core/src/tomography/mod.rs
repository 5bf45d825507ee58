//! Process tomography for two qubits.
//!
//! A process is characterized by sixteen transfer operators `R_{i'i}`. They are
//! recovered from the tomographically reconstructed outputs of sixteen input
//! states by inverting the 16x16 design matrix `M`. Throughout, operators are
//! flattened with `q = 4 i' + i` (zero-based).

mod design;
mod liouvillian;
mod pauli;
mod transfer;

pub use design::{
    build_m_matrix, product_input_design, reference_input_design, single_qubit_inputs, InputDesign, MMatrix,
    DESIGN_CONDITION_MAX,
};
pub use liouvillian::{
    estimate_liouvillian, markovianity_residual, superoperator_matrix, transfer_operators_from_superoperator,
    LiouvillianEstimate,
};
pub use pauli::{
    coefficients_of, reconstruct_from_coefficients, simulate_pauli_measurements, wootters_coefficients,
    PauliBasis, PauliCoefficients,
};
pub use transfer::{
    apply_process, apply_to_operator, design_outputs, recover_transfer_operators, transfer_operators_of_unitary,
    validate_transfer_operators, OperatorJson, TransferOperators, TransferOperatorsJson, ValidationReport,
};

use crate::error::Result;
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::random::sub_seed;

/// Dimension of the two-qubit input space.
pub const BASIS_DIM: usize = 4;
/// Number of transfer operators and design inputs.
pub const N_OPERATORS: usize = BASIS_DIM * BASIS_DIM;

/// Flat position of `R_{i'i}`.
pub fn q_index(i_prime: usize, i: usize) -> usize {
    BASIS_DIM * i_prime + i
}

/// The controlled-phase gate `|ε1 ε2> -> (-1)^{ε1 ε2} |ε1 ε2>`.
pub fn controlled_phase() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 1.0, -1.0])
}

/// Settings for turning physical output states into transfer operators.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TomographySettings {
    /// Shots per Pauli observable; zero means exact expectation values.
    pub shots: u64,
    pub seed: u64,
    /// Clip negative eigenvalues of each reconstructed output before inversion.
    pub clip_to_psd: bool,
}

/// Measures every output in the Pauli basis, reconstructs it and inverts the
/// design matrix.
pub fn characterize(outputs: &[DensityMatrix], m: &MMatrix, settings: TomographySettings) -> Result<TransferOperators> {
    let estimates = outputs
        .iter()
        .enumerate()
        .map(|(k, rho)| {
            let lambdas = simulate_pauli_measurements(rho, settings.shots, sub_seed(settings.seed, k as u64))?;
            let est = reconstruct_from_coefficients(&lambdas);
            if settings.clip_to_psd && settings.shots > 0 {
                est.clip_to_psd()
            } else {
                Ok(est)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    recover_transfer_operators(&estimates, m)
}
