//! Timed pulse schedules: the executable program a feedback experiment runs.
//!
//! A schedule is an ordered list of events on a common time axis. Readout
//! windows are delimited by `ReadoutOn`/`ReadoutOff` marker events; the
//! channel latches (and projects the qubit) a bifurcation time after each
//! window opens. `Wait` events are selective free-evolution segments and must
//! sit inside a readout window, where the latched Stark shift makes them
//! conditional.

use crate::device::DeviceParams;
use crate::error::{Error, Result};

/// What happens at one point of the schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// Control pulse about x, signed rotation angle in radians.
    XRotation { angle: f64 },
    /// Selective free evolution.
    Wait,
    /// Open a readout window.
    ReadoutOn,
    /// Close the current readout window.
    ReadoutOff,
    /// Report the current window's latched outcome.
    Measure,
}

/// A timed event; `start` and `duration` in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseEvent {
    pub kind: EventKind,
    pub start: f64,
    pub duration: f64,
}

impl PulseEvent {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }
}

/// Ordered event list plus the device it targets.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    pub events: Vec<PulseEvent>,
    pub device: DeviceParams,
}

impl PulseSchedule {
    /// Build and validate.
    pub fn new(events: Vec<PulseEvent>, device: DeviceParams) -> Result<Self> {
        let s = Self { events, device };
        s.validate()?;
        Ok(s)
    }

    /// Total duration from t = 0 to the last event edge.
    pub fn total_duration(&self) -> f64 {
        self.events.iter().map(|e| e.end()).fold(0.0, f64::max)
    }

    /// Sum of all `Wait` durations.
    pub fn total_wait(&self) -> f64 {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::Wait)
            .map(|e| e.duration)
            .sum()
    }

    /// Number of readout windows.
    pub fn window_count(&self) -> usize {
        self.events.iter().filter(|e| e.kind == EventKind::ReadoutOn).count()
    }

    /// Check every structural invariant; simulation refuses schedules that
    /// fail here.
    ///
    /// Enforced: events sorted by start with nonnegative times, pulses with
    /// positive extent never overlap, readout windows properly paired and at
    /// least one bifurcation time long, waits and measures inside a window,
    /// pulse angles consistent with the device amplitude.
    pub fn validate(&self) -> Result<()> {
        let mut last_start = 0.0f64;
        for (i, e) in self.events.iter().enumerate() {
            if !e.start.is_finite() || e.start < 0.0 {
                return Err(Error::schedule(format!("event {i}: start must be >= 0")));
            }
            if !e.duration.is_finite() || e.duration < 0.0 {
                return Err(Error::schedule(format!("event {i}: duration must be >= 0")));
            }
            if e.start < last_start {
                return Err(Error::schedule(format!("event {i}: events not sorted by start")));
            }
            last_start = e.start;
        }

        // Pulses with positive extent must not overlap each other, and their
        // durations must equal |angle|/Ω.
        let pulses: Vec<(usize, &PulseEvent)> = self
            .events
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.kind, EventKind::XRotation { .. }))
            .collect();
        for w in pulses.windows(2) {
            let (i, a) = w[0];
            let (j, b) = w[1];
            if a.end() > b.start && a.duration > 0.0 && b.duration > 0.0 {
                return Err(Error::schedule(format!(
                    "pulses overlap: event {i} at [{:.3e}, {:.3e}] s and event {j} at [{:.3e}, {:.3e}] s",
                    a.start,
                    a.end(),
                    b.start,
                    b.end()
                )));
            }
        }
        for (i, e) in &pulses {
            if let EventKind::XRotation { angle } = e.kind {
                if !angle.is_finite() {
                    return Err(Error::schedule(format!("event {i}: non-finite pulse angle")));
                }
                let expected = angle.abs() / self.device.rabi_omega;
                if (e.duration - expected).abs() > 1e-12 * expected.max(1e-9) {
                    return Err(Error::schedule(format!(
                        "event {i}: pulse duration {:.6e} s inconsistent with angle/Ω = {expected:.6e} s",
                        e.duration
                    )));
                }
            }
        }

        // Window pairing and containment rules.
        let tau_latch = self.device.jba.tau_jba();
        let mut window_open_at: Option<f64> = None;
        for (i, e) in self.events.iter().enumerate() {
            match e.kind {
                EventKind::ReadoutOn => {
                    if window_open_at.is_some() {
                        return Err(Error::schedule(format!(
                            "event {i}: readout turned on while already on"
                        )));
                    }
                    window_open_at = Some(e.start);
                }
                EventKind::ReadoutOff => match window_open_at.take() {
                    None => {
                        return Err(Error::schedule(format!(
                            "event {i}: readout turned off while already off"
                        )))
                    }
                    Some(opened) => {
                        if e.start - opened < tau_latch - 1e-15 {
                            return Err(Error::schedule(format!(
                                "event {i}: readout window of {:.3e} s is shorter than the \
                                 bifurcation time {tau_latch:.3e} s; no latch would occur",
                                e.start - opened
                            )));
                        }
                    }
                },
                EventKind::Wait => {
                    if window_open_at.is_none() {
                        return Err(Error::schedule(format!(
                            "event {i}: selective wait outside any readout window"
                        )));
                    }
                }
                EventKind::Measure => match window_open_at {
                    None => {
                        return Err(Error::schedule(format!(
                            "event {i}: measure outside any readout window"
                        )))
                    }
                    Some(opened) => {
                        if e.start < opened + tau_latch - 1e-15 {
                            return Err(Error::schedule(format!(
                                "event {i}: measure before the latch instant"
                            )));
                        }
                    }
                },
                EventKind::XRotation { .. } => {
                    // A pulse is applied atomically by the simulator and must
                    // not contain the latch instant.
                    if let Some(opened) = window_open_at {
                        let latch = opened + tau_latch;
                        if e.duration > 0.0 && e.start < latch - 1e-15 && e.end() > latch + 1e-15 {
                            return Err(Error::schedule(format!(
                                "event {i}: control pulse straddles the latch instant"
                            )));
                        }
                    }
                }
            }
        }
        if window_open_at.is_some() {
            return Err(Error::schedule("readout window never turned off".to_string()));
        }
        Ok(())
    }
}

/// Convenience builder used by the protocol module and the DSL lowerer:
/// appends events back-to-back on the time axis.
#[derive(Debug)]
pub struct ScheduleBuilder {
    device: DeviceParams,
    events: Vec<PulseEvent>,
    cursor: f64,
}

impl ScheduleBuilder {
    pub fn new(device: DeviceParams) -> Self {
        Self { device, events: Vec::new(), cursor: 0.0 }
    }

    pub fn cursor(&self) -> f64 {
        self.cursor
    }

    pub fn device(&self) -> &DeviceParams {
        &self.device
    }

    /// Control pulse of the given signed angle; duration |angle|/Ω.
    pub fn pulse(&mut self, angle: f64) -> &mut Self {
        let duration = angle.abs() / self.device.rabi_omega;
        self.events.push(PulseEvent {
            kind: EventKind::XRotation { angle },
            start: self.cursor,
            duration,
        });
        self.cursor += duration;
        self
    }

    pub fn wait(&mut self, duration: f64) -> &mut Self {
        self.events.push(PulseEvent { kind: EventKind::Wait, start: self.cursor, duration });
        self.cursor += duration;
        self
    }

    /// Open a readout window and advance the cursor past the latch, so the
    /// next event lands at the projection instant.
    pub fn readout_on(&mut self) -> &mut Self {
        self.events.push(PulseEvent { kind: EventKind::ReadoutOn, start: self.cursor, duration: 0.0 });
        self.cursor += self.device.jba.tau_jba();
        self
    }

    pub fn readout_off(&mut self) -> &mut Self {
        self.events.push(PulseEvent { kind: EventKind::ReadoutOff, start: self.cursor, duration: 0.0 });
        self
    }

    pub fn measure(&mut self) -> &mut Self {
        self.events.push(PulseEvent { kind: EventKind::Measure, start: self.cursor, duration: 0.0 });
        self
    }

    pub fn finish(self) -> Result<PulseSchedule> {
        PulseSchedule::new(self.events, self.device)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::DeviceParams;

    fn device() -> DeviceParams {
        DeviceParams::default()
    }

    #[test]
    fn builder_produces_valid_contiguous_schedule() {
        let mut b = ScheduleBuilder::new(device());
        b.readout_on().pulse(std::f64::consts::FRAC_PI_2).wait(2.75e-9).pulse(std::f64::consts::FRAC_PI_2).readout_off();
        let s = b.finish().unwrap();
        assert_eq!(s.window_count(), 1);
        for w in s.events.windows(2) {
            assert!(w[1].start >= w[0].end() - 1e-18);
        }
    }

    #[test]
    fn wait_outside_window_rejected() {
        let mut b = ScheduleBuilder::new(device());
        b.wait(1e-9).readout_on().readout_off();
        assert!(matches!(b.finish(), Err(Error::Schedule(_))));
    }

    #[test]
    fn measure_outside_window_rejected() {
        let mut b = ScheduleBuilder::new(device());
        b.measure();
        assert!(b.finish().is_err());
    }

    #[test]
    fn unbalanced_windows_rejected() {
        let mut b = ScheduleBuilder::new(device());
        b.readout_on();
        assert!(b.finish().is_err());
        let mut b = ScheduleBuilder::new(device());
        b.readout_on().readout_on();
        assert!(b.finish().is_err());
    }

    #[test]
    fn window_shorter_than_latch_rejected() {
        let d = device();
        let events = vec![
            PulseEvent { kind: EventKind::ReadoutOn, start: 0.0, duration: 0.0 },
            PulseEvent { kind: EventKind::ReadoutOff, start: 1e-9, duration: 0.0 },
        ];
        assert!(PulseSchedule::new(events, d).is_err());
    }

    #[test]
    fn overlapping_pulses_rejected_with_both_positions() {
        let d = device();
        let dur = std::f64::consts::PI / d.rabi_omega;
        let events = vec![
            PulseEvent { kind: EventKind::XRotation { angle: std::f64::consts::PI }, start: 0.0, duration: dur },
            PulseEvent {
                kind: EventKind::XRotation { angle: std::f64::consts::PI },
                start: dur / 2.0,
                duration: dur,
            },
        ];
        let err = PulseSchedule::new(events, d).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("event 0") && msg.contains("event 1"), "{msg}");
    }

    #[test]
    fn pulse_duration_must_match_angle_over_rabi() {
        let d = device();
        let events = vec![PulseEvent {
            kind: EventKind::XRotation { angle: std::f64::consts::PI },
            start: 0.0,
            duration: 1e-9, // should be 0.9 ns
        }];
        assert!(PulseSchedule::new(events, d).is_err());
    }

    #[test]
    fn unsorted_events_rejected() {
        let d = device();
        let events = vec![
            PulseEvent { kind: EventKind::ReadoutOn, start: 1e-9, duration: 0.0 },
            PulseEvent { kind: EventKind::ReadoutOff, start: 0.0, duration: 0.0 },
        ];
        assert!(PulseSchedule::new(events, d).is_err());
    }
}
