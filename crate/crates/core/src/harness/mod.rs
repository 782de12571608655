//! Deterministic Monte-Carlo experiment harness: seeded sweeps over the
//! protocol, Rabi calibration, optional decoherence, fringe fitting, CSV
//! emission and the feedback latency budget.

pub mod calibrate;
pub mod decoherence;
pub mod experiments;
pub mod fringe;
pub mod latency;
pub mod sweep;

pub use calibrate::{calibrate_rabi, RabiCalibration};
pub use decoherence::{apply_decoherence, DecoherenceParams};
pub use experiments::{initialization_map, ramsey_during_readout, InitMapConfig, RamseyPrep};
pub use fringe::fringe_frequency;
pub use latency::{latency_budget, LatencyBudget, LatencyMode, LatencyModel};
pub use sweep::{Axis, GridResult, SweepSpec};
