use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::linalg::{kron, paulis, ComplexMatrix, DensityMatrix, C64};
use crate::random::rng_from_seed;

use super::N_OPERATORS;

/// Expansion coefficients `λ_q` of a two-qubit operator in the product Pauli basis.
pub type PauliCoefficients = [C64; N_OPERATORS];

/// The sixteen operators `A_q = σ_{q1} ⊗ σ_{q2}`, `q = 4 q1 + q2`.
#[derive(Clone, Debug)]
pub struct PauliBasis {
    operators: Vec<ComplexMatrix>,
}

impl PauliBasis {
    pub fn new() -> Self {
        let operators = (0..N_OPERATORS)
            .map(|q| kron(&paulis::by_index(q / 4), &paulis::by_index(q % 4)))
            .collect();
        Self { operators }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn get(&self, q: usize) -> &ComplexMatrix {
        &self.operators[q]
    }

    pub fn label(q: usize) -> String {
        const NAMES: [&str; 4] = ["1", "X", "Y", "Z"];
        format!("{}{}", NAMES[q / 4], NAMES[q % 4])
    }
}

impl Default for PauliBasis {
    fn default() -> Self {
        Self::new()
    }
}

/// `Tr[A B]` without forming the product.
fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.rows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

fn require_two_qubit(m: &ComplexMatrix) -> Result<()> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch(format!("expected 4x4, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

/// `λ_q = Tr[ρ A_q] / 4`.
pub fn wootters_coefficients(rho: &DensityMatrix) -> Result<PauliCoefficients> {
    coefficients_of(rho.matrix())
}

pub fn coefficients_of(m: &ComplexMatrix) -> Result<PauliCoefficients> {
    require_two_qubit(m)?;
    let basis = PauliBasis::new();
    let mut out = [C64::new(0.0, 0.0); N_OPERATORS];
    for (q, a) in basis.operators().iter().enumerate() {
        out[q] = trace_of_product(m, a) / 4.0;
    }
    Ok(out)
}

/// `ρ = Σ_q λ_q A_q`. Noisy coefficients may yield a non-positive result.
pub fn reconstruct_from_coefficients(lambdas: &PauliCoefficients) -> DensityMatrix {
    let basis = PauliBasis::new();
    let m = basis
        .operators()
        .iter()
        .zip(lambdas)
        .fold(ComplexMatrix::zeros(4, 4), |acc, (a, &l)| &acc + &a.scale(l));
    DensityMatrix::new_unchecked(m)
}

/// Projectors onto the `+1` and `-1` eigenspaces of `σ_k`; `k = 0` has the single outcome `+1`.
fn local_projectors(k: usize) -> Vec<(f64, ComplexMatrix)> {
    let id = paulis::identity();
    if k == 0 {
        return vec![(1.0, id)];
    }
    let s = paulis::by_index(k);
    vec![(1.0, (&id + &s).scale_real(0.5)), (-1.0, (&id - &s).scale_real(0.5))]
}

/// Draws a multinomial sample by chained binomials.
fn multinomial<R: rand::Rng>(rng: &mut R, shots: u64, probs: &[f64]) -> Vec<u64> {
    let mut remaining = shots;
    let mut mass = 1.0;
    let mut counts = Vec::with_capacity(probs.len());
    for (idx, &p) in probs.iter().enumerate() {
        if idx + 1 == probs.len() {
            counts.push(remaining);
            break;
        }
        let cond = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let n = if remaining == 0 || cond == 0.0 {
            0
        } else if cond >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, cond).expect("valid binomial").sample(rng)
        };
        counts.push(n);
        remaining -= n;
        mass -= p;
    }
    counts
}

/// Finite-statistics estimate of the Pauli coefficients using local measurements only.
///
/// For every `A_q` with `q ≥ 1` each qubit is measured in the eigenbasis of its
/// factor (a `1` factor is left unmeasured and reports `+1`), the joint outcome
/// distribution is sampled `shots` times and the product of local outcomes is
/// averaged. Outcome probabilities are taken relative to `Tr ρ` and the
/// estimate is rescaled by `Tr ρ`, so population that has left the two-qubit
/// block is accounted for exactly. `λ_0` is `Tr ρ / 4`. `shots = 0` returns
/// the exact coefficients.
pub fn simulate_pauli_measurements(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<PauliCoefficients> {
    require_two_qubit(rho.matrix())?;
    rho.check()?;
    let exact = wootters_coefficients(rho)?;
    if shots == 0 {
        return Ok(exact);
    }
    let trace = rho.trace();
    let mut out = [C64::new(0.0, 0.0); N_OPERATORS];
    out[0] = C64::new(trace / 4.0, 0.0);
    if trace <= 0.0 {
        return Ok(out);
    }
    let mut rng = rng_from_seed(seed);
    for (q, slot) in out.iter_mut().enumerate().skip(1) {
        let first = local_projectors(q / 4);
        let second = local_projectors(q % 4);
        let mut signs = Vec::with_capacity(4);
        let mut probs = Vec::with_capacity(4);
        for (s1, p1) in &first {
            for (s2, p2) in &second {
                signs.push(s1 * s2);
                probs.push((trace_of_product(rho.matrix(), &kron(p1, p2)).re / trace).max(0.0));
            }
        }
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        let counts = multinomial(&mut rng, shots, &probs);
        let mean = counts.iter().zip(&signs).map(|(&c, s)| c as f64 * s).sum::<f64>() / shots as f64;
        *slot = C64::new(trace * mean / 4.0, 0.0);
    }
    Ok(out)
}
