use crate::error::{Error, Result};
use crate::linalg::{tol, ComplexMatrix, C64};
use crate::random::{haar_state, rng_from_seed};
use crate::tomography::{apply_to_operator, TransferOperators, BASIS_DIM};

/// Weight of each term in the Haar average `E[c_i c_j c*_{i'} c*_{j'}]` on a
/// 4-dimensional space, `1 / (d (d + 1))`.
const HAAR_PAIR_WEIGHT: f64 = 1.0 / 20.0;

fn require_four_dim(r: &TransferOperators) -> Result<()> {
    if r.out_dim() != BASIS_DIM {
        return Err(Error::DimensionMismatch(format!("metrics need 4x4 transfer operators, got {}", r.out_dim())));
    }
    Ok(())
}

fn require_gate(u: &ComplexMatrix) -> Result<()> {
    let n = u.require_unitary(tol::UNITARY)?;
    if n != BASIS_DIM {
        return Err(Error::DimensionMismatch(format!("ideal gate must be 4x4, got {n}x{n}")));
    }
    Ok(())
}

/// Average of `<Ψ|U† ρ_out U|Ψ>` over Haar-random pure inputs:
/// `(1/10) Σ_i F^{ii}_{ii} + (1/20) Σ_{i≠j} (F^{ii}_{jj} + F^{ji}_{ij})`
/// with `F^{i'i}_{j'j} = <j'|U† R_{i'i} U|j>`.
pub fn gate_fidelity(r: &TransferOperators, u: &ComplexMatrix) -> Result<f64> {
    require_four_dim(r)?;
    require_gate(u)?;
    let ud = u.adjoint();
    let rotated: Vec<ComplexMatrix> = r.operators().iter().map(|op| ud.matmul(op).matmul(u)).collect();
    let f = |ip: usize, i: usize| &rotated[crate::tomography::q_index(ip, i)];
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..BASIS_DIM {
        for j in 0..BASIS_DIM {
            acc += f(i, i)[(j, j)] + f(j, i)[(i, j)];
        }
    }
    Ok(acc.re * HAAR_PAIR_WEIGHT)
}

fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.rows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Average of `Tr[ρ_out²]` over Haar-random pure inputs:
/// `(1/10) Σ_i Tr R_ii² + (1/20) Σ_{i≠j} Tr(R_ii R_jj + R_ji R_ij)`.
pub fn gate_purity(r: &TransferOperators) -> Result<f64> {
    require_four_dim(r)?;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..BASIS_DIM {
        for j in 0..BASIS_DIM {
            acc += trace_of_product(r.get(i, i), r.get(j, j)) + trace_of_product(r.get(j, i), r.get(i, j));
        }
    }
    Ok(acc.re * HAAR_PAIR_WEIGHT)
}

fn montecarlo(r: &TransferOperators, samples: usize, seed: u64, integrand: impl Fn(&[C64], &ComplexMatrix) -> f64) -> Result<(f64, f64)> {
    require_four_dim(r)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("Monte-Carlo average needs at least one sample".into()));
    }
    let mut rng = rng_from_seed(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let psi = haar_state(&mut rng, BASIS_DIM);
        let a = psi.amplitudes();
        let out = apply_to_operator(r, &ComplexMatrix::outer(a, a))?;
        let x = integrand(a, &out);
        sum += x;
        sum_sq += x * x;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = if samples > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok((mean, (var / n).sqrt()))
}

/// Monte-Carlo estimate `(mean, standard error)` of the gate fidelity.
pub fn gate_fidelity_montecarlo(r: &TransferOperators, u: &ComplexMatrix, samples: usize, seed: u64) -> Result<(f64, f64)> {
    require_gate(u)?;
    montecarlo(r, samples, seed, |psi, out| {
        let target = u.apply(psi);
        out.sandwich(&target, &target).re
    })
}

/// Monte-Carlo estimate `(mean, standard error)` of the gate purity.
pub fn gate_purity_montecarlo(r: &TransferOperators, samples: usize, seed: u64) -> Result<(f64, f64)> {
    montecarlo(r, samples, seed, |_, out| trace_of_product(out, out).re)
}
