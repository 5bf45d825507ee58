//! Two ions in a linear trap driven on the lower motional sideband.
//!
//! The controlled-phase gate is realized as a π pulse on ion 1 (`g ↔ e`),
//! a 2π pulse on ion 2 (`g ↔ e'`) and a second π pulse on ion 1, all square
//! with zero laser phase. Both motional modes are kept explicitly and traced
//! out at the end.

mod gate;
mod hamiltonian;
mod model;

pub use gate::{
    calibrate_pulse, effective_sideband_rabi, gate_sequence, internal_density, pulse_duration, reduced_output,
    run_gate_sequence, simulate_process, Calibration, DurationMode, GateSimulator, SidebandTransfer,
    SimulatedProcess, SimulationOptions,
};
pub use hamiltonian::{
    build_hamiltonian, displacement_factor, displacement_factor_padded, free_energies, ion2_level_projector,
    position_quadrature, DISPLACEMENT_PADDING,
};
pub use model::{HilbertLayout, Ion, IonTrapParams, PulseStep, Transition, AUXILIARY, EXCITED, GROUND};
