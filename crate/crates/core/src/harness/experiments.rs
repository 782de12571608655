//! The two headline experiments, run as deterministic Monte-Carlo sweeps.
//!
//! Every sweep cell and every shot draws from its own RNG stream derived from
//! `(seed, cell, shot)`, so results are a pure function of the sweep spec and
//! device, independent of execution order and worker count.

use rayon::prelude::*;

use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::feedback::{run_schedule, PulseTiming, SimOptions};
use crate::harness::calibrate::RabiCalibration;
use crate::harness::decoherence::DecoherenceParams;
use crate::harness::sweep::{GridResult, SweepSpec};
use crate::jba::Outcome;
use crate::qubit::PureState;
use crate::rng::RandomSource;
use crate::schedule::{PulseSchedule, ScheduleBuilder};

use std::f64::consts::{FRAC_PI_2, PI};

/// Preparation pulse for the readout-window Ramsey measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RamseyPrep {
    /// π pulse: prepares `|e>`, the readout latches High.
    PiPulse,
    /// 2π pulse: returns to `|g>`, the readout latches Low.
    TwoPiPulse,
}

impl RamseyPrep {
    pub fn angle(self) -> f64 {
        match self {
            RamseyPrep::PiPulse => PI,
            RamseyPrep::TwoPiPulse => 2.0 * PI,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RamseyPrep::PiPulse => "pi",
            RamseyPrep::TwoPiPulse => "2pi",
        }
    }
}

/// Ramsey oscillation inside a readout window: prep pulse, readout on, two
/// π/2 pulses separated by the swept gap, readout off, then a second readout
/// reporting the final state. Returns `P(e)` per gap value.
pub fn ramsey_during_readout(
    prep: RamseyPrep,
    gap_sweep: &SweepSpec,
    device: &DeviceParams,
) -> Result<GridResult> {
    if gap_sweep.axis2.is_some() {
        return Err(Error::invalid("ramsey sweep is one-dimensional"));
    }
    let opts = SimOptions::default();
    let schedules: Vec<PulseSchedule> = gap_sweep
        .axis1
        .values
        .iter()
        .map(|&gap| ramsey_sequence(prep, gap, device))
        .collect::<Result<_>>()?;
    let p_excited = run_cells(&schedules, gap_sweep.shots_per_point, gap_sweep.seed, &opts)?;
    Ok(GridResult {
        axis1: gap_sweep.axis1.clone(),
        axis2: None,
        p_excited: p_excited.into_iter().map(|p| vec![p]).collect(),
        shots: gap_sweep.shots_per_point,
    })
}

fn ramsey_sequence(prep: RamseyPrep, gap: f64, device: &DeviceParams) -> Result<PulseSchedule> {
    let mut b = ScheduleBuilder::new(device.clone());
    b.pulse(prep.angle());
    b.readout_on();
    b.pulse(FRAC_PI_2);
    b.wait(gap);
    b.pulse(FRAC_PI_2);
    b.readout_off();
    b.readout_on();
    b.measure();
    b.readout_off();
    b.finish()
}

/// Options for [`initialization_map`].
#[derive(Debug, Clone, Default)]
pub struct InitMapConfig {
    /// Pulse-time accounting. Instantaneous accounting reproduces the
    /// closed-form convergence columns `τ2 = (2k+1)·π/δω` exactly; finite
    /// accounting adds the detuning phase accrued during the π/2 pulses on
    /// the High branch, pulling the convergence column to smaller τ2.
    pub timing: PulseTiming,
    pub noise: DecoherenceParams,
}

/// The initialization colormap: sweep prep width τ1 against pulse distance
/// τ2 and report the final excitation probability per cell.
///
/// Per shot: prep pulse of width τ1 (angle from the calibration), readout
/// window with latch, π/2 – wait τ2 – π/2, window off, second readout
/// reporting the result. Control amplitude is taken from the calibration
/// (`Ω = π / pi_duration`) so prep and control pulses share one scale.
pub fn initialization_map(
    sweep: &SweepSpec,
    device: &DeviceParams,
    cal: &RabiCalibration,
    cfg: &InitMapConfig,
) -> Result<GridResult> {
    let axis2 = sweep
        .axis2
        .as_ref()
        .ok_or_else(|| Error::invalid("initialization map needs a (tau1, tau2) sweep"))?;
    let mut dev = device.clone();
    dev.rabi_omega = cal.rabi_omega();

    let mut schedules = Vec::with_capacity(sweep.cells());
    for &tau1 in &sweep.axis1.values {
        for &tau2 in &axis2.values {
            schedules.push(demo_sequence(tau1, tau2, &dev, cal)?);
        }
    }
    let opts = SimOptions { timing: cfg.timing, noise: cfg.noise, ..Default::default() };
    let flat = run_cells(&schedules, sweep.shots_per_point, sweep.seed, &opts)?;
    let p_excited = flat
        .chunks(axis2.len())
        .map(|row| row.to_vec())
        .collect();
    Ok(GridResult {
        axis1: sweep.axis1.clone(),
        axis2: Some(axis2.clone()),
        p_excited,
        shots: sweep.shots_per_point,
    })
}

fn demo_sequence(
    tau1: f64,
    tau2: f64,
    device: &DeviceParams,
    cal: &RabiCalibration,
) -> Result<PulseSchedule> {
    let mut b = ScheduleBuilder::new(device.clone());
    let prep = cal.prep_angle(tau1);
    if prep != 0.0 {
        b.pulse(prep);
    }
    b.readout_on();
    b.pulse(FRAC_PI_2);
    b.wait(tau2);
    b.pulse(FRAC_PI_2);
    b.readout_off();
    b.readout_on();
    b.measure();
    b.readout_off();
    b.finish()
}

/// Run every schedule for `shots` shots and return the per-cell frequency of
/// a High outcome on the last readout window.
fn run_cells(
    schedules: &[PulseSchedule],
    shots: usize,
    seed: u64,
    opts: &SimOptions,
) -> Result<Vec<f64>> {
    schedules
        .par_iter()
        .enumerate()
        .map(|(cell, schedule)| {
            let mut highs = 0usize;
            for shot in 0..shots {
                let mut rng = RandomSource::new(seed, RandomSource::grid_stream(cell, shot));
                let run = run_schedule(schedule, &PureState::ground(), &mut rng, opts)?;
                match run.last_outcome() {
                    Some(Outcome::High) => highs += 1,
                    Some(Outcome::Low) => {}
                    None => return Err(Error::schedule("cell schedule has no readout")),
                }
            }
            Ok(highs as f64 / shots as f64)
        })
        .collect()
}

/// τ2 values whose column never drops below `threshold` for any τ1: the
/// convergence columns of the map.
pub fn convergence_columns(grid: &GridResult, threshold: f64) -> Vec<f64> {
    let axis2 = grid.axis2.as_ref().expect("two-axis grid");
    (0..axis2.len())
        .filter(|&j| grid.column_min(j) > threshold)
        .map(|j| axis2.values[j])
        .collect()
}
