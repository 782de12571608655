//! Phenomenological bifurcation-amplifier readout channel.
//!
//! The readout resonator is modeled as a latched binary classifier, not a
//! dynamical nonlinear oscillator: a readout window projects the qubit
//! (Born rule) a fixed bifurcation time after the window opens, the resonator
//! latches into a High or Low amplitude state for the rest of the window, and
//! the latched amplitude shifts the qubit energy by `delta_high` or
//! `delta_low`. The shift is zero before the latch and constant after it.
//!
//! Two error knobs are kept separate: `projection_error` leaves the qubit in
//! the state opposite the latch, `assignment_error` latches the wrong branch
//! relative to the Born draw (the qubit then follows the Born draw while the
//! latch, the reported outcome and the Stark shift all follow the wrong
//! branch together).

use crate::error::{Error, Result};
use crate::qubit::PureState;
use crate::rng::RandomSource;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Latched resonator amplitude; High reports an excited qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    High,
    Low,
}

impl Outcome {
    pub fn flipped(self) -> Self {
        match self {
            Outcome::High => Outcome::Low,
            Outcome::Low => Outcome::High,
        }
    }

    /// Single-letter code used in CSV output.
    pub fn code(self) -> char {
        match self {
            Outcome::High => 'H',
            Outcome::Low => 'L',
        }
    }
}

/// Monotone lookup table mapping readout pulse height to the induced
/// qubit-energy shift (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCurve {
    points: Vec<(f64, f64)>,
}

impl ShiftCurve {
    /// Build from `(height, shift_rad_s)` pairs; heights must be strictly
    /// increasing and shifts nondecreasing.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::config("shift curve needs at least two points"));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::config("shift curve heights must be strictly increasing"));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::config("shift curve must be nondecreasing"));
            }
        }
        Ok(Self { points })
    }

    /// Parse the two-column text format: `height shift_MHz` per line, `#`
    /// starts a comment, blank lines ignored. Shifts are stored in rad/s.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split_whitespace();
            let height: f64 = cols
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::config(format!("shift curve line {}: bad height", idx + 1)))?;
            let shift_mhz: f64 = cols
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::config(format!("shift curve line {}: bad shift", idx + 1)))?;
            if cols.next().is_some() {
                return Err(Error::config(format!(
                    "shift curve line {}: expected exactly two columns",
                    idx + 1
                )));
            }
            points.push((height, TWO_PI * 1e6 * shift_mhz));
        }
        Self::new(points)
    }

    pub fn min_height(&self) -> f64 {
        self.points[0].0
    }

    pub fn max_height(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    /// Piecewise-linear interpolation; errors outside the table range.
    pub fn shift_at(&self, height: f64) -> Result<f64> {
        if !height.is_finite() || height < self.min_height() || height > self.max_height() {
            return Err(Error::config(format!(
                "height {height} outside table range [{}, {}]",
                self.min_height(),
                self.max_height()
            )));
        }
        let i = match self.points.binary_search_by(|p| p.0.partial_cmp(&height).unwrap()) {
            Ok(exact) => return Ok(self.points[exact].1),
            Err(i) => i,
        };
        let (h0, s0) = self.points[i - 1];
        let (h1, s1) = self.points[i];
        Ok(s0 + (s1 - s0) * (height - h0) / (h1 - h0))
    }
}

/// Readout channel configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct JbaParams {
    /// Resonator frequency (Hz).
    pub f_jba: f64,
    /// Resonator quality factor.
    pub q_factor: f64,
    /// Qubit-energy shift while latched High (rad/s).
    pub delta_high: f64,
    /// Qubit-energy shift while latched Low (rad/s).
    pub delta_low: f64,
    /// Probability the post-measurement qubit state opposes the latch.
    pub projection_error: f64,
    /// Probability the latch opposes the Born draw.
    pub assignment_error: f64,
    /// Optional measured height → shift table.
    pub shift_curve: Option<ShiftCurve>,
}

impl JbaParams {
    pub fn new(
        f_jba: f64,
        q_factor: f64,
        delta_high: f64,
        delta_low: f64,
        projection_error: f64,
        assignment_error: f64,
    ) -> Result<Self> {
        if !(f_jba.is_finite() && f_jba > 0.0) {
            return Err(Error::invalid("f_jba must be > 0"));
        }
        if !(q_factor.is_finite() && q_factor > 0.0) {
            return Err(Error::invalid("q_factor must be > 0"));
        }
        for (name, p) in [("projection_error", projection_error), ("assignment_error", assignment_error)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("{name} must be in [0, 1], got {p}")));
            }
        }
        if !delta_high.is_finite() || !delta_low.is_finite() {
            return Err(Error::invalid("shifts must be finite"));
        }
        Ok(Self {
            f_jba,
            q_factor,
            delta_high,
            delta_low,
            projection_error,
            assignment_error,
            shift_curve: None,
        })
    }

    /// Bifurcation (latch) time, `Q / f`.
    pub fn tau_jba(&self) -> f64 {
        self.q_factor / self.f_jba
    }

    /// State-dependent shift difference `δω = Δ_H − Δ_L`.
    pub fn delta_omega(&self) -> f64 {
        self.delta_high - self.delta_low
    }

    /// Replace the shift difference, keeping `delta_low` fixed.
    pub fn with_delta_omega(mut self, delta_omega: f64) -> Self {
        self.delta_high = self.delta_low + delta_omega;
        self
    }

    pub fn with_errors(mut self, projection_error: f64, assignment_error: f64) -> Self {
        self.projection_error = projection_error;
        self.assignment_error = assignment_error;
        self
    }

    pub fn with_shift_curve(mut self, curve: ShiftCurve) -> Self {
        self.shift_curve = Some(curve);
        self
    }
}

impl Default for JbaParams {
    /// 6.5 GHz resonator with Q = 45.5 (τ_JBA = 7 ns), compensated Low branch
    /// (Δ_L = 0) and a 2π·150 MHz High-branch shift; error-free.
    fn default() -> Self {
        Self::new(6.5e9, 45.5, TWO_PI * 150e6, 0.0, 0.0, 0.0).expect("valid defaults")
    }
}

/// One projective readout: latched branch, latch instant, the Stark shift it
/// pins, and the post-measurement qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementRecord {
    pub outcome: Outcome,
    /// Time from readout-on to the latch (s).
    pub latch_time: f64,
    /// Qubit-energy shift while this latch holds (rad/s).
    pub stark_shift: f64,
    pub post_state: PureState,
}

/// Project a qubit through the readout channel.
///
/// Draws the branch by the Born rule (`P(High) = |<e|s>|²`), applies the
/// assignment and projection error knobs, and reports the latched outcome
/// with its Stark shift. Three uniform draws are consumed per call
/// regardless of the error settings, so streams stay aligned across
/// configurations.
pub fn project(s: &PureState, p: &JbaParams, rng: &mut RandomSource) -> MeasurementRecord {
    project_probability(s.p_excited(), p, rng)
}

/// Same channel, driven by a pre-measurement excitation probability. Used by
/// the schedule simulator for both pure and mixed pre-measurement states.
pub fn project_probability(p_excited: f64, p: &JbaParams, rng: &mut RandomSource) -> MeasurementRecord {
    let u_born = rng.next_f64();
    let u_assign = rng.next_f64();
    let u_project = rng.next_f64();

    let born = if u_born < p_excited { Outcome::High } else { Outcome::Low };
    // Latch, reported outcome and Stark shift move together; the qubit
    // follows the Born draw unless the projection knob flips it.
    let latch = if u_assign < p.assignment_error { born.flipped() } else { born };
    let qubit_branch = if u_project < p.projection_error { born.flipped() } else { born };

    let post_state = match qubit_branch {
        Outcome::High => PureState::excited(),
        Outcome::Low => PureState::ground(),
    };
    let stark_shift = stark_shift_during_readout(latch, p);
    MeasurementRecord { outcome: latch, latch_time: p.tau_jba(), stark_shift, post_state }
}

/// Shift applied to the qubit while the given branch is latched.
pub fn stark_shift_during_readout(outcome: Outcome, p: &JbaParams) -> f64 {
    match outcome {
        Outcome::High => p.delta_high,
        Outcome::Low => p.delta_low,
    }
}

/// Shift induced by a readout pulse of the given height, interpolated from
/// the configured table.
pub fn shift_from_height(height: f64, p: &JbaParams) -> Result<f64> {
    let curve = p
        .shift_curve
        .as_ref()
        .ok_or_else(|| Error::config("no shift curve configured"))?;
    curve.shift_at(height)
}
