use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of two ions sharing a centre-of-mass and a relative
/// motional mode. Frequencies are in units of `nu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IonTrapParams {
    /// Trap frequency; sets the frequency unit.
    pub nu: f64,
    pub eta_cm: f64,
    pub eta_r: f64,
    /// Detuning of the laser on ion 1 (g ↔ e).
    pub delta1: f64,
    /// Detuning of the laser on ion 2 (g ↔ e').
    pub delta2: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// Highest Fock state kept in each mode.
    pub n_max: usize,
}

impl Default for IonTrapParams {
    fn default() -> Self {
        Self { nu: 1.0, eta_cm: 0.5, eta_r: 0.5, delta1: -1.0, delta2: -1.0, omega1: 0.1, omega2: 0.1, n_max: 7 }
    }
}

impl IonTrapParams {
    /// Lower-sideband configuration with equal Rabi frequencies and Lamb–Dicke parameters.
    pub fn sideband(omega: f64, eta: f64) -> Self {
        Self { eta_cm: eta, eta_r: eta, omega1: omega, omega2: omega, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.nu, self.eta_cm, self.eta_r, self.delta1, self.delta2, self.omega1, self.omega2]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("ion-trap parameters must be finite".into()));
        }
        if self.nu <= 0.0 {
            return Err(Error::InvalidArgument(format!("trap frequency must be positive, got {}", self.nu)));
        }
        if self.eta_cm < 0.0 || self.eta_r < 0.0 {
            return Err(Error::InvalidArgument("Lamb-Dicke parameters must be non-negative".into()));
        }
        if self.omega1 <= 0.0 || self.omega2 <= 0.0 {
            return Err(Error::InvalidArgument("Rabi frequencies must be positive".into()));
        }
        if self.n_max < 2 {
            return Err(Error::InvalidArgument(format!("n_max must be at least 2, got {}", self.n_max)));
        }
        Ok(())
    }

    pub fn layout(&self) -> HilbertLayout {
        HilbertLayout::new(self.n_max)
    }
}

/// Basis ordering `ion1 ⊗ ion2 ⊗ cm ⊗ r` with ion 1 in `{g, e}`, ion 2 in
/// `{g, e, e'}` and both modes truncated at `n_max` phonons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HilbertLayout {
    pub ion1_dim: usize,
    pub ion2_dim: usize,
    pub cm_dim: usize,
    pub r_dim: usize,
}

pub const GROUND: usize = 0;
pub const EXCITED: usize = 1;
/// Auxiliary level of ion 2.
pub const AUXILIARY: usize = 2;

impl HilbertLayout {
    pub fn new(n_max: usize) -> Self {
        Self { ion1_dim: 2, ion2_dim: 3, cm_dim: n_max + 1, r_dim: n_max + 1 }
    }

    pub fn total(&self) -> usize {
        self.ion1_dim * self.ion2_dim * self.cm_dim * self.r_dim
    }

    pub fn dims(&self) -> [usize; 4] {
        [self.ion1_dim, self.ion2_dim, self.cm_dim, self.r_dim]
    }

    pub fn internal_dim(&self) -> usize {
        self.ion1_dim * self.ion2_dim
    }

    pub fn motional_dim(&self) -> usize {
        self.cm_dim * self.r_dim
    }

    pub fn index(&self, ion1: usize, ion2: usize, n_cm: usize, n_r: usize) -> usize {
        debug_assert!(ion1 < self.ion1_dim && ion2 < self.ion2_dim && n_cm < self.cm_dim && n_r < self.r_dim);
        ((ion1 * self.ion2_dim + ion2) * self.cm_dim + n_cm) * self.r_dim + n_r
    }

    pub fn decompose(&self, index: usize) -> (usize, usize, usize, usize) {
        let n_r = index % self.r_dim;
        let rest = index / self.r_dim;
        let n_cm = rest % self.cm_dim;
        let rest = rest / self.cm_dim;
        (rest / self.ion2_dim, rest % self.ion2_dim, n_cm, n_r)
    }

    /// Internal index of qubit basis state `i = 2 ε1 + ε2`.
    pub fn qubit_internal_index(&self, i: usize) -> usize {
        (i / 2) * self.ion2_dim + (i % 2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ion {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transition {
    /// `|g> ↔ |e>`
    GroundExcited,
    /// `|g> ↔ |e'>` (ion 2 only)
    GroundAuxiliary,
}

impl Transition {
    pub fn upper_level(self) -> usize {
        match self {
            Transition::GroundExcited => EXCITED,
            Transition::GroundAuxiliary => AUXILIARY,
        }
    }
}

/// One square laser pulse on the lower motional sideband.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseStep {
    pub target_ion: Ion,
    pub transition: Transition,
    /// Pulse area on the sideband, e.g. π or 2π.
    pub area: f64,
    /// Carrier Rabi frequency while the pulse is on.
    pub rabi: f64,
    pub duration: f64,
}

impl PulseStep {
    /// Step with the Rabi frequency of its target ion and a zero duration placeholder.
    pub fn new(target_ion: Ion, transition: Transition, area: f64, p: &IonTrapParams) -> Result<Self> {
        if target_ion == Ion::First && transition == Transition::GroundAuxiliary {
            return Err(Error::InvalidArgument("ion 1 has no auxiliary level".into()));
        }
        let rabi = match target_ion {
            Ion::First => p.omega1,
            Ion::Second => p.omega2,
        } * p.nu;
        Ok(Self { target_ion, transition, area, rabi, duration: 0.0 })
    }
}
