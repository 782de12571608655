//! Lowering: a parsed document plus device parameters become a validated
//! [`PulseSchedule`]. Start times accumulate sequentially, pulse angles
//! convert to durations via Ω, and opening a readout window advances the
//! cursor past the latch so conditional pulses land after the projection.

use super::{ParseError, SequenceDoc, Stmt, StmtKind};
use crate::device::DeviceParams;
use crate::schedule::{EventKind, PulseSchedule, ScheduleBuilder};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn positive(v: f64) -> Result<(), String> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(format!("value must be > 0, got {v}"))
    }
}

fn probability(v: f64) -> Result<(), String> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(format!("value must be in [0, 1], got {v}"))
    }
}

fn any(_v: f64) -> Result<(), String> {
    Ok(())
}

/// Range check applied to a setting value at parse time.
pub type ValueCheck = fn(f64) -> Result<(), String>;

/// Device-override keys accepted by `set`, with their range checks. Units are
/// carried in the key names.
pub const OVERRIDE_KEYS: &[(&str, ValueCheck)] = &[
    ("omega_qubit_ghz", positive),
    ("qubit_gap_ghz", positive),
    ("rabi_mhz", positive),
    ("pi_ns", positive),
    ("f_jba_ghz", positive),
    ("q_factor", |v| positive(v).map_err(|e| format!("q_factor: {e}"))),
    ("delta_high_mhz", any),
    ("delta_low_mhz", any),
    ("delta_omega_mhz", positive),
    ("projection_error", probability),
    ("assignment_error", probability),
];

/// Apply a document's settings on top of a base device.
pub fn apply_overrides(doc: &SequenceDoc, base: &DeviceParams) -> Result<DeviceParams, ParseError> {
    let mut d = base.clone();
    for (key, &value) in &doc.settings {
        match key.as_str() {
            "omega_qubit_ghz" => d.omega_qubit = TWO_PI * 1e9 * value,
            "qubit_gap_ghz" => d.qubit_gap = TWO_PI * 1e9 * value,
            "rabi_mhz" => d.rabi_omega = TWO_PI * 1e6 * value,
            "pi_ns" => d.rabi_omega = std::f64::consts::PI / (value * 1e-9),
            "f_jba_ghz" => d.jba.f_jba = 1e9 * value,
            "q_factor" => d.jba.q_factor = value,
            "delta_high_mhz" => d.jba.delta_high = TWO_PI * 1e6 * value,
            "delta_low_mhz" => d.jba.delta_low = TWO_PI * 1e6 * value,
            "delta_omega_mhz" => d.jba = d.jba.clone().with_delta_omega(TWO_PI * 1e6 * value),
            "projection_error" => d.jba.projection_error = value,
            "assignment_error" => d.jba.assignment_error = value,
            other => {
                return Err(ParseError::new(1, 1, format!("unknown setting '{other}'")));
            }
        }
    }
    Ok(d)
}

/// Lower a document onto a device. All structural errors carry the position
/// of the offending statement.
pub fn lower(doc: &SequenceDoc, device: &DeviceParams) -> Result<PulseSchedule, ParseError> {
    let device = apply_overrides(doc, device)?;
    let mut builder = ScheduleBuilder::new(device);
    let mut window_opened_by: Option<&Stmt> = None;

    for stmt in &doc.statements {
        let pos = (stmt.line, stmt.col);
        match stmt.kind {
            StmtKind::PulseAngle { angle } => {
                builder.pulse(angle);
            }
            StmtKind::PulseDuration { duration } => {
                let angle = builder.device().rabi_omega * duration;
                builder.pulse(angle);
            }
            StmtKind::Wait { duration } => {
                if window_opened_by.is_none() {
                    return Err(ParseError::new(
                        pos.0,
                        pos.1,
                        "selective wait outside a readout window",
                    ));
                }
                builder.wait(duration);
            }
            StmtKind::Readout { on: true } => {
                if window_opened_by.is_some() {
                    return Err(ParseError::new(pos.0, pos.1, "readout is already on"));
                }
                window_opened_by = Some(stmt);
                builder.readout_on();
            }
            StmtKind::Readout { on: false } => {
                if window_opened_by.is_none() {
                    return Err(ParseError::new(pos.0, pos.1, "readout is already off"));
                }
                window_opened_by = None;
                builder.readout_off();
            }
            StmtKind::Measure => {
                if window_opened_by.is_none() {
                    return Err(ParseError::new(
                        pos.0,
                        pos.1,
                        "measure outside a readout window",
                    ));
                }
                builder.measure();
            }
        }
    }
    if let Some(stmt) = window_opened_by {
        return Err(ParseError::new(
            stmt.line,
            stmt.col,
            "readout window never turned off",
        ));
    }
    builder
        .finish()
        .map_err(|e| ParseError::new(1, 1, format!("schedule validation failed: {e}")))
}

/// Express a schedule as a document; the inverse of [`lower`] for schedules
/// built against the same device (`lower(doc_from_schedule(s), s.device) = s`
/// up to float formatting).
pub fn doc_from_schedule(schedule: &PulseSchedule) -> SequenceDoc {
    let mut doc = SequenceDoc::default();
    for event in &schedule.events {
        match event.kind {
            EventKind::XRotation { angle } => doc.push(StmtKind::PulseAngle { angle }),
            EventKind::Wait => doc.push(StmtKind::Wait { duration: event.duration }),
            EventKind::ReadoutOn => doc.push(StmtKind::Readout { on: true }),
            EventKind::ReadoutOff => doc.push(StmtKind::Readout { on: false }),
            EventKind::Measure => doc.push(StmtKind::Measure),
        }
    }
    doc
}
