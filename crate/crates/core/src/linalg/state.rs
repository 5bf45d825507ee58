use num_complex::Complex64 as C64;

use super::decomp::eig_hermitian;
use super::matrix::{kron_vec, ComplexMatrix};
use super::tol;
use crate::error::{Error, Result};

/// Normalized pure state in a finite basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized to within `1e-12`.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch("empty state vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::NotNormalized(n2));
        }
        let s = 1.0 / n2.sqrt();
        Self::new(amplitudes.into_iter().map(|z| z * s).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { amplitudes: kron_vec(&self.amplitudes, &other.amplitudes) }
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }

    pub(crate) fn from_raw(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }
}

/// Hermitian, positive semidefinite operator with trace at most one.
///
/// Estimates built from sampled data can fail positivity; those are created
/// with [`DensityMatrix::new_unchecked`] and can be inspected with
/// [`DensityMatrix::check`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self { matrix };
        rho.check()?;
        Ok(rho)
    }

    pub fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    /// Verifies Hermiticity, trace range and the positivity floor.
    pub fn check(&self) -> Result<()> {
        self.matrix.require_hermitian(tol::HERMITIAN)?;
        let tr = self.matrix.trace();
        if tr.im.abs() > tol::HERMITIAN || tr.re < -tol::HERMITIAN || tr.re > 1.0 + tol::HERMITIAN {
            return Err(Error::InvalidDensity(format!("trace {tr} outside [0, 1]")));
        }
        let min = self.min_eigenvalue()?;
        if min < tol::POSITIVITY_FLOOR {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr[rho^2]`
    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        let n = m.rows();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (m[(i, j)] * m[(j, i)]).re;
            }
        }
        acc
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(&self.matrix)?.0)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// `<psi|rho|psi>`
    pub fn expectation_in(&self, psi: &StateVector) -> f64 {
        self.matrix.sandwich(psi.amplitudes(), psi.amplitudes()).re
    }

    /// Clips negative eigenvalues to zero and restores the original trace.
    pub fn clip_to_psd(&self) -> Result<Self> {
        let tr = self.trace();
        let (vals, vecs) = eig_hermitian(&self.matrix)?;
        let clipped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDensity("no positive spectral weight left after clipping".into()));
        }
        let s = tr.max(0.0) / total;
        let diag: Vec<f64> = clipped.iter().map(|v| v * s).collect();
        let m = vecs.matmul(&ComplexMatrix::from_real_diagonal(&diag)).matmul(&vecs.adjoint());
        Ok(Self::new_unchecked(m))
    }
}

fn check_dims(total: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!("invalid subsystem dims {dims:?}")));
    }
    let prod: usize = dims.iter().product();
    if prod != total {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} multiply to {prod}, matrix has dimension {total}"
        )));
    }
    Ok(())
}

/// Splits a flat index into per-subsystem digits (first subsystem most significant).
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (k, &d) in dims.iter().enumerate().rev() {
        out[k] = index % d;
        index /= d;
    }
}

fn flat(digits: &[usize], dims: &[usize], select: &[usize]) -> usize {
    select.iter().fold(0, |acc, &k| acc * dims[k] + digits[k])
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems retain their
/// relative order. An empty `keep` returns the 1x1 scalar trace.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    check_dims(n, dims)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!("keep index out of range in {keep:?}")));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    for i in 0..n {
        digits(i, dims, &mut di);
        for j in 0..n {
            digits(j, dims, &mut dj);
            if traced.iter().all(|&k| di[k] == dj[k]) {
                out[(flat(&di, dims, &keep), flat(&dj, dims, &keep))] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    Ok(DensityMatrix::new_unchecked(partial_trace_matrix(rho.matrix(), dims, keep)?))
}

/// Transposes the indices belonging to `subsystem`.
pub fn partial_transpose_matrix(m: &ComplexMatrix, dims: &[usize], subsystem: usize) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    check_dims(n, dims)?;
    if subsystem >= dims.len() {
        return Err(Error::DimensionMismatch(format!("subsystem {subsystem} out of range")));
    }
    let all: Vec<usize> = (0..dims.len()).collect();
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        digits(i, dims, &mut di);
        for j in 0..n {
            digits(j, dims, &mut dj);
            std::mem::swap(&mut di[subsystem], &mut dj[subsystem]);
            out[(flat(&di, dims, &all), flat(&dj, dims, &all))] = m[(i, j)];
            std::mem::swap(&mut di[subsystem], &mut dj[subsystem]);
        }
    }
    Ok(out)
}

pub fn partial_transpose(rho: &DensityMatrix, dims: &[usize], subsystem: usize) -> Result<ComplexMatrix> {
    partial_transpose_matrix(rho.matrix(), dims, subsystem)
}
