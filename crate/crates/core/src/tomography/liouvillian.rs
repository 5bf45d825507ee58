use crate::error::{Error, Result};
use crate::linalg::{matrix_exp, matrix_log_principal, ComplexMatrix};

use super::transfer::TransferOperators;
use super::BASIS_DIM;

/// Superoperator of the process acting on row-major vectorized operators:
/// `vec(ρ)[4 j + j'] = <j|ρ|j'>`. The input `|i><i'|` sits in column
/// `4 i + i'` and is mapped to `R_{i'i}`.
pub fn superoperator_matrix(r: &TransferOperators) -> Result<ComplexMatrix> {
    if r.out_dim() != BASIS_DIM {
        return Err(Error::DimensionMismatch(format!(
            "superoperator needs a 4-dimensional output space, got {}",
            r.out_dim()
        )));
    }
    let n = BASIS_DIM * BASIS_DIM;
    let mut s = ComplexMatrix::zeros(n, n);
    for i in 0..BASIS_DIM {
        for ip in 0..BASIS_DIM {
            let col = BASIS_DIM * i + ip;
            for (row, &v) in r.get(ip, i).data().iter().enumerate() {
                s[(row, col)] = v;
            }
        }
    }
    Ok(s)
}

/// Inverse of [`superoperator_matrix`].
pub fn transfer_operators_from_superoperator(s: &ComplexMatrix) -> Result<TransferOperators> {
    let n = BASIS_DIM * BASIS_DIM;
    if s.rows() != n || s.cols() != n {
        return Err(Error::DimensionMismatch(format!("superoperator must be 16x16, got {}x{}", s.rows(), s.cols())));
    }
    TransferOperators::from_fn(|ip, i| {
        let col = BASIS_DIM * i + ip;
        ComplexMatrix::from_fn(BASIS_DIM, BASIS_DIM, |j, jp| s[(BASIS_DIM * j + jp, col)])
    })
}

#[derive(Clone, Debug)]
pub struct LiouvillianEstimate {
    /// 16x16 generator in the same vectorization as [`superoperator_matrix`].
    pub generator: ComplexMatrix,
    pub time: f64,
    /// `max |exp(L t) - S|` entrywise.
    pub reconstruction_residual: f64,
}

/// Generator `L = log(S) / t` of a process assumed to be `exp(L t)`.
pub fn estimate_liouvillian(r: &TransferOperators, t: f64) -> Result<LiouvillianEstimate> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("evolution time must be positive, got {t}")));
    }
    let s = superoperator_matrix(r)?;
    let log = matrix_log_principal(&s).map_err(|e| match e {
        Error::LogBranchFailure(msg) => Error::NonLoggableChannel(msg),
        Error::IllConditioned(c) => Error::NonLoggableChannel(format!("eigenvector condition number {c:e}")),
        Error::NoConvergence => Error::NonLoggableChannel("eigensolver did not converge".into()),
        other => other,
    })?;
    let generator = log.scale_real(1.0 / t);
    let reconstruction_residual = matrix_exp(&generator.scale_real(t))?.max_abs_diff(&s);
    Ok(LiouvillianEstimate { generator, time: t, reconstruction_residual })
}

/// `max |L_a - L_b|` entrywise; zero for a time-homogeneous Markovian process
/// sampled at two different times.
pub fn markovianity_residual(a: &LiouvillianEstimate, b: &LiouvillianEstimate) -> f64 {
    a.generator.max_abs_diff(&b.generator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::tomography::{apply_to_operator, controlled_phase, transfer_operators_of_unitary};

    /// Dephasing generator: coherences `|j><j'|` decay at rate `γ_{jj'}`.
    fn dephasing_generator() -> ComplexMatrix {
        let rates: [f64; 4] = [0.0, 0.7, 1.3, 2.1];
        ComplexMatrix::from_fn(16, 16, |a, b| {
            if a != b {
                return C64::new(0.0, 0.0);
            }
            let (j, jp) = (a / 4, a % 4);
            C64::new(-(rates[j] - rates[jp]).abs(), 0.0)
        })
    }

    #[test]
    fn superoperator_acts_on_vectorized_operators() {
        let mut rng = crate::random::rng_from_seed(21);
        let kraus = crate::random::random_kraus(&mut rng, 4, 2);
        let r = TransferOperators::from_kraus(&kraus).unwrap();
        let s = superoperator_matrix(&r).unwrap();
        let rho = crate::random::random_density(&mut rng, 4, 4);
        let direct = apply_to_operator(&r, rho.matrix()).unwrap();
        let via_s = s.apply(rho.matrix().data());
        for (a, b) in direct.data().iter().zip(&via_s) {
            assert!((a - b).norm() < 1e-14);
        }
        let back = transfer_operators_from_superoperator(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn identity_process_has_zero_generator() {
        let est = estimate_liouvillian(&TransferOperators::identity_process(), 0.7).unwrap();
        assert!(est.generator.max_abs() < 1e-14);
    }

    #[test]
    fn recovers_diagonal_damping() {
        let l0 = dephasing_generator();
        let t = 0.3;
        let s = matrix_exp(&l0.scale_real(t)).unwrap();
        let r = transfer_operators_from_superoperator(&s).unwrap();
        let est = estimate_liouvillian(&r, t).unwrap();
        assert!(est.generator.max_abs_diff(&l0) < 1e-7);
        assert!(est.reconstruction_residual < 1e-7);
    }

    #[test]
    fn controlled_phase_is_not_loggable() {
        // eigenvalue -1 of the superoperator lies on the branch cut
        let r = transfer_operators_of_unitary(&controlled_phase()).unwrap();
        assert!(matches!(estimate_liouvillian(&r, 1.0), Err(Error::NonLoggableChannel(_))));
    }

    #[test]
    fn rejects_nonpositive_time() {
        assert!(estimate_liouvillian(&TransferOperators::identity_process(), 0.0).is_err());
    }
}
