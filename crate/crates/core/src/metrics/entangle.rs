use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, partial_transpose_matrix, ComplexMatrix, StateVector, C64};
use crate::tomography::{TransferOperators, BASIS_DIM};

use super::optimize::{best_of, grid_axis, multistart_minimize, nelder_mead, Minimum, OptimizerConfig};

/// Overlap with a maximally entangled state above which the output violates a
/// CHSH inequality, `(2 + 3√2) / 8`.
pub const CHSH_THRESHOLD: f64 = (2.0 + 3.0 * SQRT_2) / 8.0;

pub fn chsh_violation_check(q: f64) -> bool {
    q > CHSH_THRESHOLD
}

/// `|ψ(θ1, φ1)> ⊗ |ψ(θ2, φ2)>` with `|ψ(θ, φ)> = cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductStateParams {
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
}

fn qubit(theta: f64, phi: f64) -> [C64; 2] {
    [C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)]
}

/// Maps `(θ, φ)` to the equivalent point with `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
fn canonical_bloch(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(2.0 * PI);
    let mut p = phi;
    if t > PI {
        t = 2.0 * PI - t;
        p += PI;
    }
    (t, p.rem_euclid(2.0 * PI))
}

impl ProductStateParams {
    pub fn from_slice(x: &[f64]) -> Self {
        let (theta1, phi1) = canonical_bloch(x[0], x[1]);
        let (theta2, phi2) = canonical_bloch(x[2], x[3]);
        Self { theta1, phi1, theta2, phi2 }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.theta1, self.phi1, self.theta2, self.phi2]
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        let a = qubit(self.theta1, self.phi1);
        let b = qubit(self.theta2, self.phi2);
        [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    }

    pub fn state(&self) -> StateVector {
        StateVector::normalized(self.amplitudes().to_vec()).expect("product state has unit norm")
    }
}

/// `(U1 ⊗ U2)|Φ+>` with `U_k = Rz(α_k) Ry(β_k) Rz(γ_k)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MaxEntangledParams {
    pub alpha1: f64,
    pub beta1: f64,
    pub gamma1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub gamma2: f64,
}

impl MaxEntangledParams {
    pub fn from_slice(x: &[f64]) -> Self {
        Self { alpha1: x[0], beta1: x[1], gamma1: x[2], alpha2: x[3], beta2: x[4], gamma2: x[5] }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.alpha1, self.beta1, self.gamma1, self.alpha2, self.beta2, self.gamma2]
    }
}

/// `Rz(α) Ry(β) Rz(γ)`
pub fn zyz_rotation(alpha: f64, beta: f64, gamma: f64) -> ComplexMatrix {
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let e = |x: f64| C64::from_polar(1.0, x / 2.0);
    ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => e(-(alpha + gamma)) * c,
        (0, 1) => -e(-(alpha - gamma)) * s,
        (1, 0) => e(alpha - gamma) * s,
        _ => e(alpha + gamma) * c,
    })
}

/// Angles `(α, β, γ)` with `v = e^{iδ} Rz(α) Ry(β) Rz(γ)` for a 2x2 unitary `v`.
pub fn zyz_angles(v: &ComplexMatrix) -> (f64, f64, f64) {
    let det = v[(0, 0)] * v[(1, 1)] - v[(0, 1)] * v[(1, 0)];
    let w = v.scale(C64::from_polar(1.0, -det.arg() / 2.0));
    let beta = 2.0 * w[(1, 0)].norm().atan2(w[(0, 0)].norm());
    let has_cos = w[(1, 1)].norm() > 1e-12;
    let has_sin = w[(1, 0)].norm() > 1e-12;
    // a vanishing entry leaves one angle combination free; pin γ = 0
    let sum = if has_cos { 2.0 * w[(1, 1)].arg() } else { 2.0 * w[(1, 0)].arg() };
    let diff = if has_sin { 2.0 * w[(1, 0)].arg() } else { sum };
    ((sum + diff) / 2.0, beta, (sum - diff) / 2.0)
}

fn phi_plus() -> [C64; 4] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    [h, z, z, h]
}

fn max_entangled_amplitudes(p: &MaxEntangledParams) -> Vec<C64> {
    let u = kron(&zyz_rotation(p.alpha1, p.beta1, p.gamma1), &zyz_rotation(p.alpha2, p.beta2, p.gamma2));
    u.apply(&phi_plus())
}

pub fn max_entangled_state(p: &MaxEntangledParams) -> StateVector {
    StateVector::normalized(max_entangled_amplitudes(p)).expect("local unitaries preserve the norm")
}

/// Bell states with phases chosen so that every maximally entangled state is a
/// real combination of them up to a global phase.
fn magic_basis() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    ComplexMatrix::from_rows(&[
        &[(h, 0.0), (0.0, h), (0.0, 0.0), (0.0, 0.0)],
        &[(0.0, 0.0), (0.0, 0.0), (0.0, h), (h, 0.0)],
        &[(0.0, 0.0), (0.0, 0.0), (0.0, h), (-h, 0.0)],
        &[(h, 0.0), (0.0, -h), (0.0, 0.0), (0.0, 0.0)],
    ])
}

/// Largest overlap `<Φ|ρ|Φ>` over maximally entangled `|Φ>`, and a maximizer.
///
/// Equals the top eigenvalue of `Re(B† ρ B)` in the magic basis `B`.
pub fn fully_entangled_fraction(rho: &ComplexMatrix) -> Result<(f64, StateVector)> {
    if rho.rows() != BASIS_DIM || rho.cols() != BASIS_DIM {
        return Err(Error::DimensionMismatch(format!("expected a two-qubit operator, got {}x{}", rho.rows(), rho.cols())));
    }
    let b = magic_basis();
    let in_magic = b.adjoint().matmul(rho).matmul(&b);
    let real = DMatrix::from_fn(4, 4, |i, j| (in_magic[(i, j)].re + in_magic[(j, i)].re) / 2.0);
    let eig = SymmetricEigen::new(real);
    let k = eig.eigenvalues.imax();
    let coeffs: Vec<C64> = (0..4).map(|j| C64::new(eig.eigenvectors[(j, k)], 0.0)).collect();
    let phi = b.apply(&coeffs);
    Ok((eig.eigenvalues[k], StateVector::normalized(phi)?))
}

/// Angles reproducing a maximally entangled state as `(V ⊗ I)|Φ+>`.
fn max_entangled_params_of(phi: &StateVector) -> MaxEntangledParams {
    let a = phi.amplitudes();
    let v = ComplexMatrix::from_fn(2, 2, |i, j| a[2 * i + j] * SQRT_2);
    let (alpha1, beta1, gamma1) = zyz_angles(&v);
    MaxEntangledParams { alpha1, beta1, gamma1, ..MaxEntangledParams::default() }
}

/// `Σ c_i c*_{i'} R_{i'i}` for a pure input with amplitudes `c`.
fn output_of(r: &TransferOperators, c: &[C64; 4]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(BASIS_DIM, BASIS_DIM);
    for i in 0..BASIS_DIM {
        for ip in 0..BASIS_DIM {
            let w = c[i] * c[ip].conj();
            let op = r.get(ip, i);
            for row in 0..BASIS_DIM {
                for col in 0..BASIS_DIM {
                    out[(row, col)] += w * op[(row, col)];
                }
            }
        }
    }
    out
}

/// Process output for a product input; trace-deficient if the process leaks.
pub fn product_output(r: &TransferOperators, input: &ProductStateParams) -> Result<ComplexMatrix> {
    require_four_dim(r)?;
    Ok(output_of(r, &input.amplitudes()))
}

fn require_four_dim(r: &TransferOperators) -> Result<()> {
    if r.out_dim() != BASIS_DIM {
        return Err(Error::DimensionMismatch(format!("metrics need 4x4 transfer operators, got {}", r.out_dim())));
    }
    Ok(())
}

/// Smallest eigenvalue of the partial transpose of a two-qubit operator.
pub fn min_partial_transpose_eigenvalue(rho: &ComplexMatrix) -> Result<f64> {
    let pt = partial_transpose_matrix(rho, &[2, 2], 1)?;
    let herm = (&pt + &pt.adjoint()).scale_real(0.5);
    Ok(eig_hermitian(&herm)?.0[0])
}

const BLOCH_UPPER: [f64; 4] = [PI, 2.0 * PI, PI, 2.0 * PI];

fn product_grid(points: usize) -> Vec<[f64; 4]> {
    let theta = grid_axis(PI, points, true);
    let phi = grid_axis(2.0 * PI, points, false);
    let mut out = Vec::with_capacity(theta.len().pow(2) * phi.len().pow(2));
    for &t1 in &theta {
        for &p1 in &phi {
            for &t2 in &theta {
                for &p2 in &phi {
                    out.push([t1, p1, t2, p2]);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumDegree {
    pub value: f64,
    pub input: ProductStateParams,
    pub entangled: MaxEntangledParams,
    pub converged: bool,
}

/// Largest overlap between the output of a product input and a maximally
/// entangled state, searched over four input and six entangled-state angles.
///
/// The simplex search is cross-checked on a coarse grid of inputs where the
/// entangled state is optimized in closed form; the best grid point seeds one
/// more local search.
pub fn quantum_degree(r: &TransferOperators, opt: &OptimizerConfig) -> Result<QuantumDegree> {
    require_four_dim(r)?;
    let objective = |x: &[f64]| {
        let input = ProductStateParams::from_slice(&x[..4]);
        let me = max_entangled_amplitudes(&MaxEntangledParams::from_slice(&x[4..]));
        -output_of(r, &input.amplitudes()).sandwich(&me, &me).re
    };
    let upper = [PI, 2.0 * PI, PI, 2.0 * PI, 2.0 * PI, PI, 2.0 * PI, 2.0 * PI, PI, 2.0 * PI];
    let searched = multistart_minimize(&objective, &upper, opt);

    let mut grid_best: Option<(f64, [f64; 4])> = None;
    for x in product_grid(opt.grid_points) {
        let rho = output_of(r, &ProductStateParams::from_slice(&x).amplitudes());
        let (v, _) = fully_entangled_fraction(&rho)?;
        if grid_best.is_none_or(|(b, _)| v > b) {
            grid_best = Some((v, x));
        }
    }
    let mut best = searched;
    if let Some((_, x)) = grid_best {
        let input = ProductStateParams::from_slice(&x);
        let (_, phi) = fully_entangled_fraction(&output_of(r, &input.amplitudes()))?;
        let mut start = x.to_vec();
        start.extend(max_entangled_params_of(&phi).to_array());
        let polished = nelder_mead(&objective, &start, 0.1, opt.tolerance, opt.max_iterations);
        best = best_of([best, polished]);
    }
    Ok(QuantumDegree {
        value: -best.value,
        input: ProductStateParams::from_slice(&best.x[..4]),
        entangled: MaxEntangledParams::from_slice(&best.x[4..]),
        converged: best.converged,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementCapability {
    pub value: f64,
    pub input: ProductStateParams,
    pub converged: bool,
}

/// Smallest partial-transpose eigenvalue of the output over product inputs.
/// A negative value certifies that the process can entangle.
pub fn entanglement_capability(r: &TransferOperators, opt: &OptimizerConfig) -> Result<EntanglementCapability> {
    require_four_dim(r)?;
    let objective = |x: &[f64]| {
        let rho = output_of(r, &ProductStateParams::from_slice(x).amplitudes());
        min_partial_transpose_eigenvalue(&rho).unwrap_or(f64::INFINITY)
    };
    let searched = multistart_minimize(&objective, &BLOCH_UPPER, opt);
    let grid_start = product_grid(opt.grid_points)
        .into_iter()
        .map(|x| (objective(&x), x))
        .reduce(|a, b| if b.0 < a.0 { b } else { a });
    let best = match grid_start {
        Some((_, x)) => best_of([searched, nelder_mead(&objective, &x, 0.1, opt.tolerance, opt.max_iterations)]),
        None => searched,
    };
    let Minimum { x, value, converged } = best;
    Ok(EntanglementCapability { value, input: ProductStateParams::from_slice(&x), converged })
}
