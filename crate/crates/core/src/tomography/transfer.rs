use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{tol, ComplexMatrix, DensityMatrix, C64};

use super::design::{InputDesign, MMatrix};
use super::{q_index, BASIS_DIM, N_OPERATORS};

/// The sixteen operators `R_{i'i}` that determine a linear process on two qubits:
/// `ρ_out = Σ_{i,i'} <i|ρ_in|i'> R_{i'i}`.
///
/// Stored flat with `q = 4 i' + i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "TransferOperatorsJson", try_from = "TransferOperatorsJson")]
pub struct TransferOperators {
    out_dim: usize,
    ops: Vec<ComplexMatrix>,
}

impl TransferOperators {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        if ops.len() != N_OPERATORS {
            return Err(Error::DimensionMismatch(format!("{} transfer operators, expected 16", ops.len())));
        }
        let out_dim = ops[0].rows();
        if ops.iter().any(|m| m.rows() != out_dim || m.cols() != out_dim) {
            return Err(Error::DimensionMismatch("transfer operators must share one square shape".into()));
        }
        Ok(Self { out_dim, ops })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> ComplexMatrix) -> Result<Self> {
        let mut ops = Vec::with_capacity(N_OPERATORS);
        for ip in 0..BASIS_DIM {
            for i in 0..BASIS_DIM {
                ops.push(f(ip, i));
            }
        }
        Self::new(ops)
    }

    /// `R_{i'i} = |i><i'|`.
    pub fn identity_process() -> Self {
        transfer_operators_of_unitary(&ComplexMatrix::identity(BASIS_DIM)).unwrap()
    }

    /// Every input mapped to `I/4`.
    pub fn fully_depolarizing() -> Self {
        Self::from_fn(|ip, i| {
            if ip == i {
                ComplexMatrix::identity(BASIS_DIM).scale_real(0.25)
            } else {
                ComplexMatrix::zeros(BASIS_DIM, BASIS_DIM)
            }
        })
        .unwrap()
    }

    /// `R_{i'i} = Σ_k K_k |i><i'| K_k^dagger`.
    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        Self::from_fn(|ip, i| {
            let out = kraus[0].rows();
            kraus.iter().fold(ComplexMatrix::zeros(out, out), |acc, k| {
                let col_i: Vec<C64> = (0..out).map(|r| k[(r, i)]).collect();
                let col_ip: Vec<C64> = (0..out).map(|r| k[(r, ip)]).collect();
                &acc + &ComplexMatrix::outer(&col_i, &col_ip)
            })
        })
    }

    /// `p a + (1 - p) b`
    pub fn convex_mix(p: f64, a: &Self, b: &Self) -> Result<Self> {
        if a.out_dim != b.out_dim {
            return Err(Error::DimensionMismatch("mixing processes of different output dimension".into()));
        }
        Self::new(a.ops.iter().zip(&b.ops).map(|(x, y)| &x.scale_real(p) + &y.scale_real(1.0 - p)).collect())
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// `R_{i'i}`
    pub fn get(&self, i_prime: usize, i: usize) -> &ComplexMatrix {
        &self.ops[q_index(i_prime, i)]
    }

    pub fn get_mut(&mut self, i_prime: usize, i: usize) -> &mut ComplexMatrix {
        &mut self.ops[q_index(i_prime, i)]
    }

    /// Operators in `q = 4 i' + i` order.
    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.ops.iter().zip(&other.ops).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }

    /// Root-mean-square entrywise difference.
    pub fn rms_diff(&self, other: &Self) -> f64 {
        let (sum, count) = self.ops.iter().zip(&other.ops).fold((0.0, 0usize), |(s, c), (a, b)| {
            let d = a - b;
            (s + d.frobenius_norm().powi(2), c + d.data().len())
        });
        (sum / count as f64).sqrt()
    }
}

/// Process of a unitary with no environment: `R_{i'i} = u |i><i'| u^dagger`.
pub fn transfer_operators_of_unitary(u: &ComplexMatrix) -> Result<TransferOperators> {
    let n = u.require_unitary(tol::UNITARY)?;
    if n != BASIS_DIM {
        return Err(Error::DimensionMismatch(format!("expected a 4x4 unitary, got {n}x{n}")));
    }
    TransferOperators::from_kraus(std::slice::from_ref(u))
}

/// `Σ_{i,i'} m_{i i'} R_{i'i}` for any 4x4 operator `m`.
pub fn apply_to_operator(r: &TransferOperators, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() != BASIS_DIM || m.cols() != BASIS_DIM {
        return Err(Error::DimensionMismatch(format!("input is {}x{}, expected 4x4", m.rows(), m.cols())));
    }
    let d = r.out_dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..BASIS_DIM {
        for ip in 0..BASIS_DIM {
            let w = m[(i, ip)];
            if w.norm() == 0.0 {
                continue;
            }
            out = &out + &r.get(ip, i).scale(w);
        }
    }
    Ok(out)
}

/// Predicted output of the process for an arbitrary (possibly mixed) input.
pub fn apply_process(r: &TransferOperators, rho_in: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix::new_unchecked(apply_to_operator(r, rho_in.matrix())?))
}

/// Outputs of the process for each design input, in design order.
pub fn design_outputs(r: &TransferOperators, design: &InputDesign) -> Result<Vec<DensityMatrix>> {
    design.vectors().iter().map(|v| apply_process(r, &v.projector())).collect()
}

/// Inverts `ρ_out^(k) = Σ_q M_kq R_q` independently for every output matrix element.
pub fn recover_transfer_operators(outputs: &[DensityMatrix], m: &MMatrix) -> Result<TransferOperators> {
    if outputs.len() != N_OPERATORS {
        return Err(Error::DimensionMismatch(format!("{} outputs, expected 16", outputs.len())));
    }
    let d = outputs[0].dim();
    if outputs.iter().any(|o| o.dim() != d) {
        return Err(Error::DimensionMismatch("outputs of differing dimension".into()));
    }
    let mut ops = vec![ComplexMatrix::zeros(d, d); N_OPERATORS];
    let mut rhs = vec![C64::new(0.0, 0.0); N_OPERATORS];
    for j in 0..d {
        for jp in 0..d {
            for (k, o) in outputs.iter().enumerate() {
                rhs[k] = o.matrix()[(j, jp)];
            }
            let x = m.solve(&rhs);
            for (q, v) in x.into_iter().enumerate() {
                ops[q][(j, jp)] = v;
            }
        }
    }
    TransferOperators::new(ops)
}

/// Diagnostic summary of how far a set of transfer operators is from a
/// trace-preserving, Hermiticity-consistent, positive process.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// `max |Tr R_{i'i} - δ_{i'i}|`
    pub max_trace_deviation: f64,
    /// `max |R_{i'i}^dagger - R_{ii'}|` entrywise
    pub max_hermiticity_deviation: f64,
    /// Smallest eigenvalue over the outputs of the 16 design inputs.
    pub min_output_eigenvalue: f64,
    /// `1 - Tr ρ_out` per design input.
    pub trace_deficits: Vec<f64>,
}

impl ValidationReport {
    pub fn max_leakage(&self) -> f64 {
        self.trace_deficits.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn validate_transfer_operators(r: &TransferOperators, design: &InputDesign) -> Result<ValidationReport> {
    let mut max_trace_deviation = 0.0f64;
    let mut max_hermiticity_deviation = 0.0f64;
    for ip in 0..BASIS_DIM {
        for i in 0..BASIS_DIM {
            let delta = if ip == i { 1.0 } else { 0.0 };
            max_trace_deviation = max_trace_deviation.max((r.get(ip, i).trace() - C64::new(delta, 0.0)).norm());
            max_hermiticity_deviation =
                max_hermiticity_deviation.max(r.get(ip, i).adjoint().max_abs_diff(r.get(i, ip)));
        }
    }
    let mut min_output_eigenvalue = f64::INFINITY;
    let mut trace_deficits = Vec::with_capacity(design.len());
    for out in design_outputs(r, design)? {
        trace_deficits.push(1.0 - out.trace());
        let herm = (out.matrix() + &out.matrix().adjoint()).scale_real(0.5);
        let min = DensityMatrix::new_unchecked(herm).min_eigenvalue()?;
        min_output_eigenvalue = min_output_eigenvalue.min(min);
    }
    Ok(ValidationReport { max_trace_deviation, max_hermiticity_deviation, min_output_eigenvalue, trace_deficits })
}

/// Wire format: `{"out_dim": d, "operators": [{"key": "R_30", "i_prime": 3, "i": 0, "entries": [[re, im], ...]}, ...]}`
/// with 16 operators in `q = 4 i' + i` order and entries row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransferOperatorsJson {
    pub out_dim: usize,
    pub operators: Vec<OperatorJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorJson {
    pub key: String,
    pub i_prime: usize,
    pub i: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<TransferOperators> for TransferOperatorsJson {
    fn from(r: TransferOperators) -> Self {
        let mut operators = Vec::with_capacity(N_OPERATORS);
        for ip in 0..BASIS_DIM {
            for i in 0..BASIS_DIM {
                operators.push(OperatorJson {
                    key: format!("R_{ip}{i}"),
                    i_prime: ip,
                    i,
                    entries: r.get(ip, i).data().iter().map(|z| [z.re, z.im]).collect(),
                });
            }
        }
        Self { out_dim: r.out_dim, operators }
    }
}

impl TryFrom<TransferOperatorsJson> for TransferOperators {
    type Error = Error;

    fn try_from(json: TransferOperatorsJson) -> Result<Self> {
        let d = json.out_dim;
        let mut slots: Vec<Option<ComplexMatrix>> = vec![None; N_OPERATORS];
        for op in json.operators {
            if op.i_prime >= BASIS_DIM || op.i >= BASIS_DIM {
                return Err(Error::InvalidArgument(format!("operator index ({}, {}) out of range", op.i_prime, op.i)));
            }
            let data = op.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
            let q = q_index(op.i_prime, op.i);
            if slots[q].is_some() {
                return Err(Error::InvalidArgument(format!("duplicate operator {}", op.key)));
            }
            slots[q] = Some(ComplexMatrix::new(d, d, data)?);
        }
        let ops = slots
            .into_iter()
            .enumerate()
            .map(|(q, m)| m.ok_or_else(|| Error::InvalidArgument(format!("missing operator q={q}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }
}
