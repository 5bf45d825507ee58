use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{condition_number, ComplexMatrix, Lu, StateVector, C64};

use super::{q_index, BASIS_DIM, N_OPERATORS};

/// Condition number above which an input design is considered singular.
pub const DESIGN_CONDITION_MAX: f64 = 1e12;

/// Sixteen input states over the two-qubit basis `|i> = |i1>|i2>`, `i = 2 i1 + i2`.
#[derive(Clone, Debug)]
pub struct InputDesign {
    vectors: Vec<StateVector>,
    labels: Vec<String>,
}

impl InputDesign {
    pub fn new(vectors: Vec<StateVector>, labels: Vec<String>) -> Result<Self> {
        if vectors.len() != N_OPERATORS || labels.len() != N_OPERATORS {
            return Err(Error::DimensionMismatch(format!(
                "a design needs {N_OPERATORS} inputs, got {} vectors and {} labels",
                vectors.len(),
                labels.len()
            )));
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != BASIS_DIM) {
            return Err(Error::DimensionMismatch(format!("input of dimension {}", v.dim())));
        }
        Ok(Self { vectors, labels })
    }

    pub fn n_basis(&self) -> usize {
        BASIS_DIM
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// The single-qubit preparations `|0>`, `|1>`, `(|0>+|1>)/√2`, `(|0>+i|1>)/√2`.
pub fn single_qubit_inputs() -> [StateVector; 4] {
    let s = FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    [
        StateVector::basis(2, 0),
        StateVector::basis(2, 1),
        StateVector::new(vec![C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap(),
        StateVector::new(vec![C64::new(s, 0.0), C64::new(z.re, s)]).unwrap(),
    ]
}

const SINGLE_LABELS: [&str; 4] = ["0", "1", "+", "+i"];

/// Product inputs `|ψa>|ψb>` ordered `k = 4 (a-1) + (b-1)`.
pub fn product_input_design() -> InputDesign {
    let singles = single_qubit_inputs();
    let mut vectors = Vec::with_capacity(N_OPERATORS);
    let mut labels = Vec::with_capacity(N_OPERATORS);
    for a in 0..4 {
        for b in 0..4 {
            vectors.push(singles[a].kron(&singles[b]));
            labels.push(format!("|{}>|{}>", SINGLE_LABELS[a], SINGLE_LABELS[b]));
        }
    }
    InputDesign::new(vectors, labels).expect("product design is well formed")
}

/// The δ-based design indexed by `k = 4 k1 + k2`; its off-diagonal members
/// are entangled for most `(k1, k2)`.
pub fn reference_input_design() -> InputDesign {
    let s = FRAC_1_SQRT_2;
    let mut vectors = Vec::with_capacity(N_OPERATORS);
    let mut labels = Vec::with_capacity(N_OPERATORS);
    for k1 in 0..BASIS_DIM {
        for k2 in 0..BASIS_DIM {
            let mut c = vec![C64::new(0.0, 0.0); BASIS_DIM];
            if k1 == k2 {
                c[k1] = C64::new(1.0, 0.0);
                labels.push(format!("|{k1}>"));
            } else if k1 > k2 {
                c[k1] = C64::new(s, 0.0);
                c[k2] = C64::new(s, 0.0);
                labels.push(format!("(|{k1}>+|{k2}>)/√2"));
            } else {
                c[k1] = C64::new(s, 0.0);
                c[k2] = C64::new(0.0, s);
                labels.push(format!("(|{k1}>+i|{k2}>)/√2"));
            }
            vectors.push(StateVector::new(c).unwrap());
        }
    }
    InputDesign::new(vectors, labels).expect("reference design is well formed")
}

/// Linear map from stacked transfer operators to stacked design outputs.
///
/// Row `k` belongs to design input `k`; column `q = 4 i' + i` carries
/// `c_i conj(c_i')`.
#[derive(Clone, Debug)]
pub struct MMatrix {
    matrix: ComplexMatrix,
    condition_number: f64,
    lu: Lu,
}

impl MMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    /// Solves `M x = b`.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        self.lu.solve(b)
    }
}

pub fn build_m_matrix(design: &InputDesign) -> Result<MMatrix> {
    let mut matrix = ComplexMatrix::zeros(N_OPERATORS, N_OPERATORS);
    for (k, v) in design.vectors().iter().enumerate() {
        let c = v.amplitudes();
        for ip in 0..BASIS_DIM {
            for i in 0..BASIS_DIM {
                matrix[(k, q_index(ip, i))] = c[i] * c[ip].conj();
            }
        }
    }
    let cond = condition_number(&matrix);
    if !cond.is_finite() || cond > DESIGN_CONDITION_MAX {
        return Err(Error::DesignSingular(cond));
    }
    let lu = Lu::new(&matrix).map_err(|_| Error::DesignSingular(cond))?;
    Ok(MMatrix { matrix, condition_number: cond, lu })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[C64], b: &[C64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-15)
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn product_design_members() {
        let d = product_input_design();
        let s = FRAC_1_SQRT_2;
        assert!(close(d.vectors()[0].amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]));
        // (a=3, b=1) -> k = 8
        assert!(close(d.vectors()[8].amplitudes(), &[c(s, 0.0), c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0)]));
        // (a=4, b=4) -> k = 15
        assert!(close(d.vectors()[15].amplitudes(), &[c(0.5, 0.0), c(0.0, 0.5), c(0.0, 0.5), c(-0.5, 0.0)]));
        assert_eq!(d.labels()[15], "|+i>|+i>");
    }

    #[test]
    fn reference_design_members() {
        let d = reference_input_design();
        let s = FRAC_1_SQRT_2;
        let z = c(0.0, 0.0);
        assert!(close(d.vectors()[4 * 2 + 2].amplitudes(), &[z, z, c(1.0, 0.0), z]));
        assert!(close(d.vectors()[4 * 3 + 1].amplitudes(), &[z, c(s, 0.0), z, c(s, 0.0)]));
        assert!(close(d.vectors()[4 + 3].amplitudes(), &[z, c(s, 0.0), z, c(0.0, s)]));
    }

    #[test]
    fn m_matrix_rows() {
        let m = build_m_matrix(&product_input_design()).unwrap();
        // row 0: |00><00| -> single entry at (i'=0, i=0)
        for q in 0..N_OPERATORS {
            let expect = if q == 0 { 1.0 } else { 0.0 };
            assert_eq!(m.matrix()[(0, q)], c(expect, 0.0));
        }
        // row 8: (1/√2,0,1/√2,0) -> 1/2 on (i,i') in {0,2}^2
        for ip in 0..4 {
            for i in 0..4 {
                let expect = if [0, 2].contains(&ip) && [0, 2].contains(&i) { 0.5 } else { 0.0 };
                assert!((m.matrix()[(8, q_index(ip, i))] - c(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn diagonal_entries_sum_to_one() {
        for design in [product_input_design(), reference_input_design()] {
            let m = build_m_matrix(&design).unwrap();
            for k in 0..N_OPERATORS {
                let s: C64 = (0..4).map(|i| m.matrix()[(k, q_index(i, i))]).sum();
                assert!((s - c(1.0, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn both_designs_are_invertible() {
        let p = build_m_matrix(&product_input_design()).unwrap();
        let r = build_m_matrix(&reference_input_design()).unwrap();
        assert!(p.condition_number().is_finite() && p.condition_number() < 1e3, "{}", p.condition_number());
        assert!(r.condition_number().is_finite() && r.condition_number() < 1e3);
    }

    #[test]
    fn repeated_inputs_are_singular() {
        let v = vec![StateVector::basis(4, 0); N_OPERATORS];
        let d = InputDesign::new(v, vec![String::new(); N_OPERATORS]).unwrap();
        assert!(matches!(build_m_matrix(&d), Err(Error::DesignSingular(_))));
    }
}
