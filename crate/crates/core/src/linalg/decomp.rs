use nalgebra::{Schur, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use super::tol;
use crate::error::{Error, Result};

const EIG_MAX_ITER: usize = 10_000;

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as the columns of a unitary matrix.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.require_hermitian(tol::HERMITIAN)?;
    let eig = SymmetricEigen::try_new(m.to_nalgebra(), f64::EPSILON, EIG_MAX_ITER).ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Builds `V diag(f(lambda)) V^dagger` from a Hermitian eigendecomposition.
pub fn spectral_map(values: &[f64], vectors: &ComplexMatrix, f: impl Fn(f64) -> C64) -> ComplexMatrix {
    let n = values.len();
    let fv: Vec<C64> = values.iter().map(|&x| f(x)).collect();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, j)] * fv[j]);
    scaled.matmul(&vectors.adjoint())
}

/// Propagator `exp(-i h t)` of a time-independent Hermitian generator.
pub fn matrix_exp_hermitian_generator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let (values, vectors) = eig_hermitian(h)?;
    Ok(spectral_map(&values, &vectors, |x| C64::new(0.0, -x * t).exp()))
}

/// General matrix exponential by scaling and squaring of a Taylor series.
pub fn matrix_exp(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let norm1 = (0..n).map(|j| (0..n).map(|i| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m.scale_real(0.5f64.powi(squarings));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..=24 {
        term = term.matmul(&scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() < 1e-18 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    Ok(sum)
}

/// Eigenvalues and eigenvectors of a general (diagonalizable) complex matrix.
///
/// Eigenvectors are unit-normalized columns. The decomposition goes through a
/// complex Schur form followed by back substitution on the triangular factor.
pub fn eig_general(m: &ComplexMatrix) -> Result<(Vec<C64>, ComplexMatrix)> {
    let n = m.require_square()?;
    let schur = Schur::try_new(m.to_nalgebra(), f64::EPSILON, EIG_MAX_ITER).ok_or(Error::NoConvergence)?;
    let (q, t) = schur.unpack();
    let t = ComplexMatrix::from_nalgebra(&t);
    let q = ComplexMatrix::from_nalgebra(&q);
    let values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();

    let scale = t.max_abs().max(f64::MIN_POSITIVE);
    let degenerate = 1e-10 * scale;
    let floor = f64::EPSILON * scale;
    let mut y = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        y[(k, k)] = C64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let rhs: C64 = -((j + 1)..=k).map(|l| t[(j, l)] * y[(l, k)]).sum::<C64>();
            let mut d = t[(j, j)] - values[k];
            if d.norm() <= degenerate && rhs.norm() <= degenerate {
                // exact degeneracy: stay inside the eigenspace
                y[(j, k)] = C64::new(0.0, 0.0);
                continue;
            }
            if d.norm() < floor {
                d = C64::new(floor, 0.0);
            }
            y[(j, k)] = rhs / d;
        }
    }
    let mut v = q.matmul(&y);
    for k in 0..n {
        let norm = (0..n).map(|i| v[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            v[(i, k)] /= norm;
        }
    }
    Ok((values, v))
}

/// 2-norm condition number from the singular values.
pub fn condition_number(m: &ComplexMatrix) -> f64 {
    let sv = m.to_nalgebra().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Principal matrix logarithm of a diagonalizable matrix.
///
/// Fails with [`Error::LogBranchFailure`] when an eigenvalue lies on the closed
/// negative real axis (including zero) and with [`Error::IllConditioned`]
/// when the eigenvector matrix has condition number above `1e8`.
pub fn matrix_log_principal(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let (values, vectors) = eig_general(m)?;
    let scale = m.max_abs().max(1.0);
    for &lam in &values {
        if lam.norm() <= tol::LOG_BRANCH * scale {
            return Err(Error::LogBranchFailure(format!("eigenvalue {lam} is numerically zero")));
        }
        if lam.re < 0.0 && lam.im.abs() <= tol::LOG_BRANCH * lam.norm().max(1.0) {
            return Err(Error::LogBranchFailure(format!("eigenvalue {lam} lies on the negative real axis")));
        }
    }
    let cond = condition_number(&vectors);
    if cond > tol::EIGVEC_CONDITION_MAX {
        return Err(Error::IllConditioned(cond));
    }
    let inv = Lu::new(&vectors)?.inverse();
    let logs: Vec<C64> = values.iter().map(|z| z.ln()).collect();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, j)] * logs[j]);
    Ok(scaled.matmul(&inv))
}

/// LU factorization with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        let n = m.require_square()?;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = m.max_abs();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| lu[(a, col)].norm().total_cmp(&lu[(b, col)].norm()))
                .unwrap();
            if lu[(pivot, col)].norm() <= f64::EPSILON * scale * n as f64 || scale == 0.0 {
                return Err(Error::Singular);
            }
            if pivot != col {
                perm.swap(pivot, col);
                for j in 0..n {
                    let tmp = lu[(pivot, j)];
                    lu[(pivot, j)] = lu[(col, j)];
                    lu[(col, j)] = tmp;
                }
            }
            let p = lu[(col, col)];
            for r in (col + 1)..n {
                let f = lu[(r, col)] / p;
                lu[(r, col)] = f;
                for j in (col + 1)..n {
                    let u = lu[(col, j)];
                    lu[(r, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.perm.len();
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.perm.len();
        let mut inv = ComplexMatrix::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            e[j] = C64::new(1.0, 0.0);
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}
