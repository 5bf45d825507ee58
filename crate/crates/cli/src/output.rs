use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use qproc_core::linalg::ComplexMatrix;
use qproc_core::tomography::{TransferOperators, BASIS_DIM};
use serde::Serialize;

/// Largest `|E_{n,m} - conj(E_{m,n})|` accepted for a process grid.
pub const EGRID_HERMITICITY_TOL: f64 = 1e-9;

/// 16x16 grid `E_{n,m} = <j'|R_{i'i}|j>` with `n = 4i + j`, `m = 4i' + j'`.
pub fn egrid(r: &TransferOperators) -> ComplexMatrix {
    let n = BASIS_DIM * BASIS_DIM;
    ComplexMatrix::from_fn(n, n, |row, col| {
        let (i, j) = (row / BASIS_DIM, row % BASIS_DIM);
        let (ip, jp) = (col / BASIS_DIM, col % BASIS_DIM);
        r.get(ip, i)[(jp, j)]
    })
}

/// `max |E_{n,m} - conj(E_{m,n})|`; zero when `R_{i'i}† = R_{ii'}`.
pub fn egrid_hermiticity_deviation(grid: &ComplexMatrix) -> f64 {
    grid.hermiticity_deviation()
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a complex matrix as CSV: an index column, then `re_k,im_k` per column.
pub fn write_complex_csv(path: &Path, index_name: &str, m: &ComplexMatrix) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let mut header = vec![index_name.to_string()];
    for k in 0..m.cols() {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    w.write_record(&header)?;
    for row in 0..m.rows() {
        let mut rec = vec![row.to_string()];
        for col in 0..m.cols() {
            rec.push(fmt_f64(m[(row, col)].re));
            rec.push(fmt_f64(m[(row, col)].im));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_complex_csv`].
#[cfg(test)]
pub fn read_complex_csv(path: &Path) -> Result<ComplexMatrix> {
    use qproc_core::linalg::C64;
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let vals = rec.iter().skip(1).map(|s| s.parse::<f64>()).collect::<std::result::Result<Vec<_>, _>>()?;
        rows.push(vals.chunks(2).map(|c| C64::new(c[0], c[1])).collect::<Vec<_>>());
    }
    let cols = rows.first().map_or(0, |r| r.len());
    Ok(ComplexMatrix::new(rows.len(), cols, rows.concat())?)
}

pub fn write_leakage_csv(path: &Path, labels: &[String], leakage: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["input", "label", "leakage"])?;
    for (k, (label, l)) in labels.iter().zip(leakage).enumerate() {
        w.write_record([k.to_string(), label.clone(), fmt_f64(*l)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub omega_over_nu: f64,
    pub eta: f64,
    pub fidelity: f64,
    pub purity: f64,
    pub quantum_degree: f64,
    pub entanglement_capability: f64,
    pub max_leakage: f64,
}

pub const SWEEP_COLUMNS: [&str; 7] =
    ["omega_over_nu", "eta", "fidelity", "purity", "quantum_degree", "entanglement_capability", "max_leakage"];

/// Writes sweep rows sorted by `(eta, omega)`.
pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| a.eta.total_cmp(&b.eta).then(a.omega_over_nu.total_cmp(&b.omega_over_nu)));
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(SWEEP_COLUMNS)?;
    for r in &sorted {
        let vals = [r.omega_over_nu, r.eta, r.fidelity, r.purity, r.quantum_degree, r.entanglement_capability, r.max_leakage];
        w.write_record(vals.iter().map(|&v| fmt_f64(v)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
