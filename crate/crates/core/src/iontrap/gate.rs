use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, spectral_map, ComplexMatrix, DensityMatrix, StateVector};
use crate::tomography::{build_m_matrix, characterize, InputDesign, TomographySettings, TransferOperators};

use super::hamiltonian::{build_hamiltonian, free_energies};
use super::model::{HilbertLayout, Ion, IonTrapParams, PulseStep, Transition, GROUND};

/// Sideband Rabi frequency `Ω η_cm exp(-(η_cm² + η_r²)/2)` in the Lamb–Dicke picture.
pub fn effective_sideband_rabi(rabi: f64, p: &IonTrapParams) -> f64 {
    rabi * p.eta_cm * (-(p.eta_cm * p.eta_cm + p.eta_r * p.eta_r) / 2.0).exp()
}

/// Analytic duration `area / Ω_eff` of a sideband pulse.
pub fn pulse_duration(step: &PulseStep, p: &IonTrapParams) -> Result<f64> {
    if !(step.rabi > 0.0) {
        return Err(Error::InvalidArgument(format!("pulse Rabi frequency must be positive, got {}", step.rabi)));
    }
    let eff = effective_sideband_rabi(step.rabi, p);
    if !(eff > 0.0) {
        return Err(Error::InvalidArgument("sideband coupling vanishes (eta_cm = 0)".into()));
    }
    Ok(step.area / eff)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DurationMode {
    /// `area / Ω_eff`
    #[default]
    Analytic,
    /// Numerically refined sideband π time, scaled by `area / π`.
    Calibrated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub duration: f64,
    pub analytic: f64,
    /// Transfer probability at the calibrated π time.
    pub peak_population: f64,
    /// Set when the scan found no interior maximum and the analytic value was kept.
    pub fell_back: bool,
}

/// Probability of `|g, 1_cm> → |upper, 0_cm>` on the pulse's transition after time `t`,
/// with every spectator in its ground state.
pub struct SidebandTransfer {
    values: Vec<f64>,
    init_coeffs: Vec<C64>,
    target_coeffs: Vec<C64>,
}

impl SidebandTransfer {
    pub fn new(step: &PulseStep, p: &IonTrapParams) -> Result<Self> {
        let layout = p.layout();
        let h = build_hamiltonian(p, Some(step))?;
        let (values, vectors) = eig_hermitian(&h)?;
        let upper = step.transition.upper_level();
        let (init, target) = match step.target_ion {
            Ion::First => (layout.index(GROUND, GROUND, 1, 0), layout.index(upper, GROUND, 0, 0)),
            Ion::Second => (layout.index(GROUND, GROUND, 1, 0), layout.index(GROUND, upper, 0, 0)),
        };
        let n = layout.total();
        let init_coeffs = (0..n).map(|k| vectors[(init, k)].conj()).collect();
        let target_coeffs = (0..n).map(|k| vectors[(target, k)]).collect();
        Ok(Self { values, init_coeffs, target_coeffs })
    }

    pub fn population(&self, t: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.init_coeffs)
            .zip(&self.target_coeffs)
            .map(|((&e, &a), &b)| b * a * C64::new(0.0, -e * t).exp())
            .sum::<C64>()
            .norm_sqr()
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Refines the sideband π time by golden-section search for maximal transfer
/// within ±30 % of the analytic estimate, then scales it to the step's area.
pub fn calibrate_pulse(step: &PulseStep, p: &IonTrapParams) -> Result<Calibration> {
    let pi_step = PulseStep { area: PI, ..step.clone() };
    let analytic_pi = pulse_duration(&pi_step, p)?;
    let scale = step.area / PI;
    let transfer = SidebandTransfer::new(step, p)?;
    let (lo, hi) = (0.7 * analytic_pi, 1.3 * analytic_pi);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (transfer.population(c), transfer.population(d));
    while (b - a) > 1e-10 * analytic_pi {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = transfer.population(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = transfer.population(d);
        }
    }
    let t = 0.5 * (a + b);
    let peak = transfer.population(t);
    let probe = 1e-3 * analytic_pi;
    let interior = t - lo > probe && hi - t > probe;
    let local_max = transfer.population(t - probe) <= peak && transfer.population(t + probe) <= peak;
    if interior && local_max {
        Ok(Calibration { duration: t * scale, analytic: analytic_pi * scale, peak_population: peak, fell_back: false })
    } else {
        Ok(Calibration {
            duration: analytic_pi * scale,
            analytic: analytic_pi * scale,
            peak_population: transfer.population(analytic_pi),
            fell_back: true,
        })
    }
}

/// Pulse program `[(ion 1, g↔e, π), (ion 2, g↔e', 2π), (ion 1, g↔e, π)]` with durations filled in.
pub fn gate_sequence(p: &IonTrapParams, mode: DurationMode) -> Result<Vec<PulseStep>> {
    let mut outer = PulseStep::new(Ion::First, Transition::GroundExcited, PI, p)?;
    let mut middle = PulseStep::new(Ion::Second, Transition::GroundAuxiliary, 2.0 * PI, p)?;
    for step in [&mut outer, &mut middle] {
        step.duration = match mode {
            DurationMode::Analytic => pulse_duration(step, p)?,
            DurationMode::Calibrated => calibrate_pulse(step, p)?.duration,
        };
    }
    Ok(vec![outer.clone(), middle, outer])
}

/// Precomputed propagator of the whole pulse program.
///
/// Output states are expressed in the interaction picture of the laser-free
/// Hamiltonian: the free phase `exp(-i H_0 T)` over the total gate time `T` is removed.
#[derive(Clone, Debug)]
pub struct GateSimulator {
    params: IonTrapParams,
    layout: HilbertLayout,
    steps: Vec<PulseStep>,
    total_time: f64,
    propagator: ComplexMatrix,
}

impl GateSimulator {
    pub fn new(p: &IonTrapParams, mode: DurationMode) -> Result<Self> {
        p.validate()?;
        let steps = gate_sequence(p, mode)?;
        Self::with_steps(p, steps)
    }

    pub fn with_steps(p: &IonTrapParams, steps: Vec<PulseStep>) -> Result<Self> {
        p.validate()?;
        let layout = p.layout();
        let n = layout.total();
        let mut propagator = ComplexMatrix::identity(n);
        let mut cache: Vec<(PulseStep, ComplexMatrix)> = Vec::new();
        for step in &steps {
            let u = match cache.iter().find(|(s, _)| s == step) {
                Some((_, u)) => u.clone(),
                None => {
                    let h = build_hamiltonian(p, Some(step))?;
                    let (vals, vecs) = eig_hermitian(&h)?;
                    let u = spectral_map(&vals, &vecs, |x| C64::new(0.0, -x * step.duration).exp());
                    cache.push((step.clone(), u.clone()));
                    u
                }
            };
            propagator = u.matmul(&propagator);
        }
        let total_time: f64 = steps.iter().map(|s| s.duration).sum();
        let frame: Vec<C64> =
            free_energies(p, &layout).iter().map(|&e| C64::new(0.0, e * total_time).exp()).collect();
        let propagator = ComplexMatrix::from_diagonal(&frame).matmul(&propagator);
        Ok(Self { params: p.clone(), layout, steps, total_time, propagator })
    }

    pub fn params(&self) -> &IonTrapParams {
        &self.params
    }

    pub fn layout(&self) -> HilbertLayout {
        self.layout
    }

    pub fn steps(&self) -> &[PulseStep] {
        &self.steps
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn propagator(&self) -> &ComplexMatrix {
        &self.propagator
    }

    /// Embeds a two-qubit state with both modes in the vacuum.
    pub fn embed(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != 4 {
            return Err(Error::DimensionMismatch(format!("qubit input has dimension {}", psi.dim())));
        }
        let mut amps = vec![C64::new(0.0, 0.0); self.layout.total()];
        for (i, &c) in psi.amplitudes().iter().enumerate() {
            amps[self.layout.index(i / 2, i % 2, 0, 0)] = c;
        }
        StateVector::new(amps)
    }

    pub fn run(&self, psi: &StateVector) -> Result<StateVector> {
        let full = self.embed(psi)?;
        Ok(StateVector::from_raw(self.propagator.apply(full.amplitudes())))
    }
}

/// Evolves a two-qubit input through the three-pulse gate with analytic durations.
pub fn run_gate_sequence(psi: &StateVector, p: &IonTrapParams) -> Result<StateVector> {
    GateSimulator::new(p, DurationMode::Analytic)?.run(psi)
}

/// Internal-state density matrix (6x6) after tracing out both modes.
pub fn internal_density(full: &StateVector, layout: &HilbertLayout) -> Result<ComplexMatrix> {
    if full.dim() != layout.total() {
        return Err(Error::DimensionMismatch(format!("state of dimension {} for layout {}", full.dim(), layout.total())));
    }
    let ni = layout.internal_dim();
    let nm = layout.motional_dim();
    let a = full.amplitudes();
    Ok(ComplexMatrix::from_fn(ni, ni, |x, y| (0..nm).map(|m| a[x * nm + m] * a[y * nm + m].conj()).sum()))
}

/// Two-qubit block of the reduced state and the population that left it.
pub fn reduced_output(full: &StateVector, layout: &HilbertLayout) -> Result<(DensityMatrix, f64)> {
    let internal = internal_density(full, layout)?;
    let idx: Vec<usize> = (0..4).map(|i| layout.qubit_internal_index(i)).collect();
    let block = internal.submatrix(&idx, &idx);
    let leakage = 1.0 - block.trace().re;
    Ok((DensityMatrix::new_unchecked(block), leakage))
}

#[derive(Clone, Debug)]
pub struct SimulationOptions {
    pub durations: DurationMode,
    pub tomography: TomographySettings,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self { durations: DurationMode::Analytic, tomography: TomographySettings::default() }
    }
}

#[derive(Clone, Debug)]
pub struct SimulatedProcess {
    pub transfer: TransferOperators,
    /// `1 - Tr ρ_out` for each design input.
    pub leakage: Vec<f64>,
    /// Exact two-qubit output blocks in design order.
    pub outputs: Vec<DensityMatrix>,
    pub steps: Vec<PulseStep>,
}

fn is_product_state(v: &StateVector) -> bool {
    let c = v.amplitudes();
    (c[0] * c[3] - c[1] * c[2]).norm() < 1e-12
}

/// Runs the gate on every design input, performs tomography on the outputs and
/// recovers the transfer operators.
pub fn simulate_process(p: &IonTrapParams, design: &InputDesign, opts: &SimulationOptions) -> Result<SimulatedProcess> {
    if let Some((k, _)) = design.vectors().iter().enumerate().find(|(_, v)| !is_product_state(v)) {
        return Err(Error::InvalidArgument(format!(
            "design input {k} is entangled; only product inputs can be prepared without a two-qubit gate"
        )));
    }
    let m = build_m_matrix(design)?;
    let sim = GateSimulator::new(p, opts.durations)?;
    let layout = sim.layout();
    let results = design
        .vectors()
        .par_iter()
        .map(|psi| reduced_output(&sim.run(psi)?, &layout))
        .collect::<Result<Vec<_>>>()?;
    let (outputs, leakage): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let transfer = characterize(&outputs, &m, opts.tomography)?;
    Ok(SimulatedProcess { transfer, leakage, outputs, steps: sim.steps().to_vec() })
}
