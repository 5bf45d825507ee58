use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::linalg::{kron_all, matrix_exp_hermitian_generator, ComplexMatrix};

use super::model::{HilbertLayout, Ion, IonTrapParams, PulseStep, AUXILIARY, EXCITED, GROUND};

/// Extra Fock levels used when exponentiating `a + a^dagger` before cropping.
pub const DISPLACEMENT_PADDING: usize = 8;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Truncated position quadrature `a + a^dagger` on `dim` Fock levels.
pub fn position_quadrature(dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |m, n| {
        if m + 1 == n {
            C64::new((n as f64).sqrt(), 0.0)
        } else if n + 1 == m {
            C64::new((m as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `exp(-i sign η (a + a^dagger))` on `dim` levels, computed in a workspace
/// padded by `padding` levels and cropped.
pub fn displacement_factor_padded(eta: f64, dim: usize, sign: f64, padding: usize) -> Result<ComplexMatrix> {
    let x = position_quadrature(dim + padding);
    Ok(matrix_exp_hermitian_generator(&x, sign * eta)?.crop(dim, dim))
}

pub fn displacement_factor(eta: f64, dim: usize, sign: f64) -> Result<ComplexMatrix> {
    displacement_factor_padded(eta, dim, sign, DISPLACEMENT_PADDING)
}

fn level_projector(dim: usize, level: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    m[(level, level)] = C64::new(1.0, 0.0);
    m
}

/// `|upper><lower|`
fn raising(dim: usize, upper: usize, lower: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    m[(upper, lower)] = C64::new(1.0, 0.0);
    m
}

/// Diagonal of the laser-free Hamiltonian
/// `-Δ1 |e><e|_1 - Δ2 |e'><e'|_2 + ν n_cm + √3 ν n_r`.
pub fn free_energies(p: &IonTrapParams, layout: &HilbertLayout) -> Vec<f64> {
    (0..layout.total())
        .map(|idx| {
            let (s1, s2, n_cm, n_r) = layout.decompose(idx);
            let mut e = p.nu * (n_cm as f64 + SQRT3 * n_r as f64);
            if s1 == EXCITED {
                e -= p.delta1 * p.nu;
            }
            if s2 == AUXILIARY {
                e -= p.delta2 * p.nu;
            }
            e
        })
        .collect()
}

/// Laser coupling `(Ω/2) [σ+ ⊗ D_cm ⊗ D_r + h.c.]` for the pulse's ion and transition.
///
/// Ion 1 sees `exp(-iη_cm(a_cm + a_cm†)) exp(-iη_r(a_r + a_r†))`; ion 2 sees the
/// relative-mode factor with the opposite sign.
fn coupling(p: &IonTrapParams, layout: &HilbertLayout, step: &PulseStep) -> Result<ComplexMatrix> {
    let r_sign = match step.target_ion {
        Ion::First => 1.0,
        Ion::Second => -1.0,
    };
    let d_cm = displacement_factor(p.eta_cm, layout.cm_dim, 1.0)?;
    let d_r = displacement_factor(p.eta_r, layout.r_dim, r_sign)?;
    let upper = step.transition.upper_level();
    let (ion1, ion2) = match step.target_ion {
        Ion::First => (raising(layout.ion1_dim, upper, GROUND), ComplexMatrix::identity(layout.ion2_dim)),
        Ion::Second => (ComplexMatrix::identity(layout.ion1_dim), raising(layout.ion2_dim, upper, GROUND)),
    };
    let half = kron_all(&[&ion1, &ion2, &d_cm, &d_r]).scale_real(step.rabi / 2.0);
    Ok(&half + &half.adjoint())
}

/// Full Hamiltonian on the layout; `active = None` gives the free part only.
pub fn build_hamiltonian(p: &IonTrapParams, active: Option<&PulseStep>) -> Result<ComplexMatrix> {
    p.validate()?;
    let layout = p.layout();
    let free = ComplexMatrix::from_real_diagonal(&free_energies(p, &layout));
    match active {
        None => Ok(free),
        Some(step) => Ok(&free + &coupling(p, &layout, step)?),
    }
}

/// Projector onto ion 2 occupying `level`, over the full layout.
pub fn ion2_level_projector(layout: &HilbertLayout, level: usize) -> ComplexMatrix {
    kron_all(&[
        &ComplexMatrix::identity(layout.ion1_dim),
        &level_projector(layout.ion2_dim, level),
        &ComplexMatrix::identity(layout.cm_dim),
        &ComplexMatrix::identity(layout.r_dim),
    ])
}
