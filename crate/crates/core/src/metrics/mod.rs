//! Gate-quality figures computed from transfer operators.

mod entangle;
mod fidelity;
mod optimize;

pub use entangle::{
    chsh_violation_check, entanglement_capability, fully_entangled_fraction, max_entangled_state,
    min_partial_transpose_eigenvalue, product_output, quantum_degree, zyz_angles, zyz_rotation, EntanglementCapability,
    MaxEntangledParams, ProductStateParams, QuantumDegree, CHSH_THRESHOLD,
};
pub use fidelity::{gate_fidelity, gate_fidelity_montecarlo, gate_purity, gate_purity_montecarlo};
pub use optimize::{best_of, grid_axis, multistart_minimize, nelder_mead, Minimum, OptimizerConfig};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::tomography::{product_input_design, validate_transfer_operators, TransferOperators};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateMetrics {
    pub fidelity: f64,
    pub purity: f64,
    pub quantum_degree: f64,
    pub entanglement_capability: f64,
    /// Largest trace deficit over the product-design inputs, floored at zero.
    pub max_leakage: f64,
    pub optimizer_converged: bool,
}

/// Fidelity against `u_ideal`, purity, quantum degree, entanglement capability
/// and leakage of one process.
pub fn compute_all_metrics(r: &TransferOperators, u_ideal: &ComplexMatrix, opt: &OptimizerConfig) -> Result<GateMetrics> {
    let fidelity = gate_fidelity(r, u_ideal)?;
    let purity = gate_purity(r)?;
    let q = quantum_degree(r, opt)?;
    let e = entanglement_capability(r, opt)?;
    let max_leakage = validate_transfer_operators(r, &product_input_design())?.max_leakage();
    Ok(GateMetrics {
        fidelity,
        purity,
        quantum_degree: q.value,
        entanglement_capability: e.value,
        max_leakage,
        optimizer_converged: q.converged && e.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tomography::{controlled_phase, transfer_operators_of_unitary};

    #[test]
    fn ideal_and_depolarizing_summaries() {
        let opt = OptimizerConfig { restarts: 8, ..OptimizerConfig::default() };
        let u = controlled_phase();
        let m = compute_all_metrics(&transfer_operators_of_unitary(&u).unwrap(), &u, &opt).unwrap();
        for (got, want) in [(m.fidelity, 1.0), (m.purity, 1.0), (m.quantum_degree, 1.0), (m.entanglement_capability, -0.5), (m.max_leakage, 0.0)] {
            assert!((got - want).abs() < 1e-6, "{m:?}");
        }
        let m = compute_all_metrics(&TransferOperators::fully_depolarizing(), &u, &opt).unwrap();
        for got in [m.fidelity, m.purity, m.quantum_degree, m.entanglement_capability] {
            assert!((got - 0.25).abs() < 1e-6, "{m:?}");
        }
        assert!(m.max_leakage.abs() < 1e-12);
    }

    #[test]
    fn serializes_as_flat_record() {
        let m = GateMetrics {
            fidelity: 1.0,
            purity: 1.0,
            quantum_degree: 1.0,
            entanglement_capability: -0.5,
            max_leakage: 0.0,
            optimizer_converged: true,
        };
        let v: serde_json::Value = serde_json::to_value(&m).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys.len(), 6);
        assert!(keys.contains(&"entanglement_capability") && keys.contains(&"optimizer_converged"));
    }
}
