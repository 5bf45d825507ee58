//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are stored row-major. Multi-party indices follow the usual
//! tensor ordering with the first subsystem most significant, so for two
//! qubits the basis index is `i = 2 i1 + i2`.

mod decomp;
mod matrix;
mod state;

pub use decomp::{
    condition_number, eig_general, eig_hermitian, matrix_exp, matrix_exp_hermitian_generator,
    matrix_log_principal, spectral_map, Lu,
};
pub use matrix::{kron, kron_all, kron_vec, ComplexMatrix};
pub use num_complex::Complex64 as C64;
pub use state::{
    partial_trace, partial_trace_matrix, partial_transpose, partial_transpose_matrix, DensityMatrix,
    StateVector,
};

/// Numerical tolerances shared by the validators.
pub mod tol {
    pub const HERMITIAN: f64 = 1e-10;
    pub const UNITARY: f64 = 1e-9;
    pub const POSITIVITY_FLOOR: f64 = -1e-9;
    pub const NORMALIZATION: f64 = 1e-12;
    pub const LOG_BRANCH: f64 = 1e-9;
    pub const EIGVEC_CONDITION_MAX: f64 = 1e8;
}

/// Single-qubit Pauli matrices.
pub mod paulis {
    use super::ComplexMatrix;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]])
    }

    pub fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]])
    }

    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    /// `{1, σx, σy, σz}` indexed 0..4.
    pub fn by_index(k: usize) -> ComplexMatrix {
        match k {
            0 => identity(),
            1 => sigma_x(),
            2 => sigma_y(),
            3 => sigma_z(),
            _ => panic!("Pauli index {k} out of range"),
        }
    }

}
