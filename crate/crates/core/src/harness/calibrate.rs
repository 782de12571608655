//! Rabi calibration from excited/ground anchor times.
//!
//! The prep-pulse excitation follows `P(e)(τ1) = sin²(π (τ1 − t0) / (2 p))`
//! with π time `p` and rise-time offset `t0`. Pulse widths that leave the
//! qubit excited sit at the maxima (`τ1 − t0` an odd multiple of `p`) and
//! ground anchors at the minima (even multiples), so all anchors lie on one
//! integer ladder `τ = t0 + n·p` with the anchor type fixing the parity of
//! `n`. The fit is a linear least-squares regression on that ladder.

use crate::error::{Error, Result};

/// Fitted prep-pulse calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiCalibration {
    /// π-pulse duration `p` (s).
    pub pi_duration: f64,
    /// Rise-time offset `t0` (s), normalized into `[0, 2p)`.
    pub time_offset: f64,
}

impl RabiCalibration {
    pub fn new(pi_duration: f64, time_offset: f64) -> Result<Self> {
        if !(pi_duration.is_finite() && pi_duration > 0.0) {
            return Err(Error::invalid("pi_duration must be > 0"));
        }
        if !(time_offset.is_finite() && time_offset >= 0.0) {
            return Err(Error::invalid("time_offset must be >= 0"));
        }
        Ok(Self { pi_duration, time_offset })
    }

    /// Control amplitude implied by the π time, `Ω = π / p`.
    pub fn rabi_omega(&self) -> f64 {
        std::f64::consts::PI / self.pi_duration
    }

    /// Effective rotation angle of a prep pulse of width `tau1`.
    pub fn prep_angle(&self, tau1: f64) -> f64 {
        std::f64::consts::PI * (tau1 - self.time_offset) / self.pi_duration
    }

    /// Model excitation probability after a prep pulse of width `tau1`.
    pub fn prep_p_excited(&self, tau1: f64) -> f64 {
        let half = self.prep_angle(tau1) / 2.0;
        half.sin().powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AnchorKind {
    Excited,
    Ground,
}

/// Fit the calibration from pulse widths known to prepare the excited state
/// (maxima) and the ground state (minima).
///
/// Requires at least two anchors in total, and the anchors sorted by time
/// must alternate between the two kinds; otherwise the fit is rejected.
pub fn calibrate_rabi(excited_anchors: &[f64], ground_anchors: &[f64]) -> Result<RabiCalibration> {
    let mut anchors: Vec<(f64, AnchorKind)> = excited_anchors
        .iter()
        .map(|&t| (t, AnchorKind::Excited))
        .chain(ground_anchors.iter().map(|&t| (t, AnchorKind::Ground)))
        .collect();
    if anchors.len() < 2 {
        return Err(Error::invalid("need at least two anchors"));
    }
    for (t, _) in &anchors {
        if !t.is_finite() || *t < 0.0 {
            return Err(Error::invalid(format!("anchor times must be finite and >= 0, got {t}")));
        }
    }
    anchors.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for w in anchors.windows(2) {
        if w[0].1 == w[1].1 {
            return Err(Error::invalid(
                "anchors must alternate between excited and ground when sorted by time",
            ));
        }
    }

    // Consecutive anchors are consecutive rungs; the first rung's parity is
    // odd for an excited anchor, even for a ground anchor.
    let first_n: i64 = match anchors[0].1 {
        AnchorKind::Excited => 1,
        AnchorKind::Ground => 2,
    };
    let pairs: Vec<(f64, f64)> = anchors
        .iter()
        .enumerate()
        .map(|(i, (t, _))| ((first_n + i as i64) as f64, *t))
        .collect();

    let (slope, mut intercept) = linear_fit(&pairs)?;
    if slope <= 0.0 || !slope.is_finite() {
        return Err(Error::invalid("anchor spacing does not give a positive pi duration"));
    }
    // Shift the ladder by whole periods until the offset lands in [0, 2p).
    while intercept < 0.0 {
        intercept += 2.0 * slope;
    }
    while intercept >= 2.0 * slope {
        intercept -= 2.0 * slope;
    }
    RabiCalibration::new(slope, intercept)
}

fn linear_fit(pairs: &[(f64, f64)]) -> Result<(f64, f64)> {
    let n = pairs.len() as f64;
    let sx: f64 = pairs.iter().map(|(x, _)| x).sum();
    let sy: f64 = pairs.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pairs.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pairs.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return Err(Error::invalid("degenerate anchor layout"));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    Ok((slope, intercept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent oracle: brute-force scan of the least-squares objective
    /// over a fine (p, t0) grid around the expected optimum.
    fn grid_search_oracle(
        excited: &[f64],
        ground: &[f64],
        p_range: (f64, f64),
        t0_range: (f64, f64),
    ) -> (f64, f64) {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let steps = 400;
        for i in 0..=steps {
            let p = p_range.0 + (p_range.1 - p_range.0) * i as f64 / steps as f64;
            for j in 0..=steps {
                let t0 = t0_range.0 + (t0_range.1 - t0_range.0) * j as f64 / steps as f64;
                let mut cost = 0.0;
                for &t in excited {
                    // Distance to the nearest odd rung.
                    let n = ((t - t0) / p - 1.0) / 2.0;
                    let k = n.round() * 2.0 + 1.0;
                    cost += (t - t0 - k * p).powi(2);
                }
                for &t in ground {
                    let n = (t - t0) / p / 2.0;
                    let k = n.round() * 2.0;
                    cost += (t - t0 - k * p).powi(2);
                }
                if cost < best.0 {
                    best = (cost, p, t0);
                }
            }
        }
        (best.1, best.2)
    }

    #[test]
    fn reference_anchor_fit_is_exact() {
        let excited = [1.7e-9, 3.5e-9, 5.3e-9];
        let ground = [2.6e-9, 4.4e-9];
        let cal = calibrate_rabi(&excited, &ground).unwrap();
        assert_relative_eq!(cal.pi_duration, 0.9e-9, epsilon = 1e-18);
        assert_relative_eq!(cal.time_offset, 0.8e-9, epsilon = 1e-18);
        // The five anchors are uniformly spaced so the fit has zero residual;
        // the grid-search oracle lands on the same optimum.
        let (p, t0) =
            grid_search_oracle(&excited, &ground, (0.7e-9, 1.1e-9), (0.6e-9, 1.0e-9));
        assert_relative_eq!(cal.pi_duration, p, max_relative = 2e-3);
        assert_relative_eq!(cal.time_offset, t0, max_relative = 2e-3);
    }

    #[test]
    fn symmetric_synthetic_case() {
        let cal = calibrate_rabi(&[1e-9, 3e-9], &[2e-9]).unwrap();
        assert_relative_eq!(cal.pi_duration, 1e-9, epsilon = 1e-18);
        assert!(cal.time_offset.abs() < 1e-18);
    }

    #[test]
    fn perturbed_anchors_stay_near_fit() {
        let mut rng = crate::rng::RandomSource::new(51, 0);
        for _ in 0..50 {
            let jitter = |rng: &mut crate::rng::RandomSource| (rng.next_f64() - 0.5) * 0.1e-9;
            let excited: Vec<f64> =
                [1.7e-9, 3.5e-9, 5.3e-9].iter().map(|t| t + jitter(&mut rng)).collect();
            let ground: Vec<f64> = [2.6e-9, 4.4e-9].iter().map(|t| t + jitter(&mut rng)).collect();
            let cal = calibrate_rabi(&excited, &ground).unwrap();
            assert!((cal.pi_duration - 0.9e-9).abs() < 0.1e-9, "{:?}", cal);
        }
    }

    #[test]
    fn ground_first_ladder() {
        // Ground at 2.6 and 4.4, excited at 3.5: same ladder, offset 0.8.
        let cal = calibrate_rabi(&[3.5e-9], &[2.6e-9, 4.4e-9]).unwrap();
        assert_relative_eq!(cal.pi_duration, 0.9e-9, epsilon = 1e-18);
        assert_relative_eq!(cal.time_offset, 0.8e-9, epsilon = 1e-17);
    }

    #[test]
    fn offset_normalized_into_first_period() {
        // Late anchors: ground at 4.4, excited at 5.3; t0 must still be 0.8.
        let cal = calibrate_rabi(&[5.3e-9], &[4.4e-9]).unwrap();
        assert_relative_eq!(cal.pi_duration, 0.9e-9, epsilon = 1e-17);
        assert_relative_eq!(cal.time_offset, 0.8e-9, epsilon = 1e-16);
    }

    #[test]
    fn non_alternating_anchors_rejected() {
        assert!(calibrate_rabi(&[1e-9, 2e-9], &[3e-9]).is_err());
        assert!(calibrate_rabi(&[1e-9], &[]).is_err());
        assert!(calibrate_rabi(&[], &[]).is_err());
    }

    #[test]
    fn prep_model_hits_anchors() {
        let cal = calibrate_rabi(&[1.7e-9, 3.5e-9, 5.3e-9], &[2.6e-9, 4.4e-9]).unwrap();
        for t in [1.7e-9, 3.5e-9, 5.3e-9] {
            assert_relative_eq!(cal.prep_p_excited(t), 1.0, epsilon = 1e-9);
        }
        for t in [2.6e-9, 4.4e-9] {
            assert!(cal.prep_p_excited(t) < 1e-9);
        }
        assert_relative_eq!(cal.rabi_omega(), std::f64::consts::PI / 0.9e-9, epsilon = 1.0);
    }
}
