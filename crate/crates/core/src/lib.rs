//! Pulse-level simulation of measurement-conditioned feedback on a two-level
//! system.
//!
//! A bifurcation readout latches High or Low a fixed time after its window
//! opens, projecting the qubit and shifting its energy by a latched,
//! state-dependent amount. Control pulses and timed waits inside the window
//! therefore act differently on each measurement branch, which is enough to
//! prepare an arbitrary state, or deterministically initialize the qubit,
//! without routing the measurement result through any external electronics.
//!
//! The crate provides the exact two-level math ([`qubit`]), lab-frame and
//! rotating-frame propagators ([`dynamics`]), the latched readout channel
//! ([`jba`]), schedule construction and simulation ([`feedback`],
//! [`schedule`]), a line-oriented sequence DSL ([`seqlang`]), and a
//! deterministic experiment harness ([`harness`]).

pub mod device;
pub mod dynamics;
pub mod error;
pub mod feedback;
pub mod harness;
pub mod jba;
pub mod qubit;
pub mod rng;
pub mod schedule;
pub mod seqlang;

pub use device::DeviceParams;
pub use error::{Error, Result};
pub use feedback::{
    build_arbitrary_prep, build_initialization, predict_final, run_schedule, simulate_schedule,
    two_qubit_feedforward, Branch, DriveConvention, FeedbackSpec, PulseTiming, ScheduleRun,
    SimOptions, SimState,
};
pub use jba::{
    project, shift_from_height, stark_shift_during_readout, JbaParams, MeasurementRecord, Outcome,
    ShiftCurve,
};
pub use qubit::{
    apply, fidelity, phase_z, rot_x, BlochVector, DensityMatrix, PureState, Unitary2, C64,
};
pub use rng::RandomSource;
pub use schedule::{EventKind, PulseEvent, PulseSchedule, ScheduleBuilder};
