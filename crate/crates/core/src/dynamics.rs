//! Time-domain propagation of the driven qubit.
//!
//! Two routes are provided: a fixed-step 4th-order integrator of the full
//! lab-frame Hamiltonian `H(t)/ħ = (ω_qubit/2)σz + Ω cos(ωt + φ)σx`, and the
//! closed-form rotating-frame propagator `exp(+i t (Δω σz + Ω σx)/2)` obtained
//! after the rotating-wave approximation. [`rwa_error`] quantifies how far the
//! two disagree, which is the size of the dropped counter-rotating terms.
//!
//! Both propagators follow the `+i` exponent convention of
//! [`crate::qubit::rot_x`] and [`crate::qubit::phase_z`]: the rotating-frame
//! propagator reduces to `rot_x(Ω·t)` on resonance and to `phase_z(t, Δω)`
//! with the drive off.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qubit::{phase_z, Unitary2};

/// Points per fastest period the fixed-step integrator insists on.
const MIN_POINTS_PER_PERIOD: f64 = 50.0;

/// Lab-frame drive description: a rectangular microwave window applied to a
/// qubit of frequency `omega_qubit`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    /// Qubit angular frequency (rad/s).
    pub omega_qubit: f64,
    /// Drive angular frequency (rad/s).
    pub omega_drive: f64,
    /// Drive amplitude Ω (rad/s); a resonant pulse of duration t rotates by Ω·t.
    pub rabi_omega: f64,
    /// Drive phase at t = 0 (radians).
    pub drive_phase: f64,
    /// Drive-on window start (s).
    pub window_start: f64,
    /// Drive-on window duration (s).
    pub window_duration: f64,
}

impl DriveParams {
    /// Resonant rectangular pulse starting at t = 0.
    pub fn resonant(omega_qubit: f64, rabi_omega: f64, duration: f64) -> Result<Self> {
        Self::new(omega_qubit, omega_qubit, rabi_omega, 0.0, 0.0, duration)
    }

    pub fn new(
        omega_qubit: f64,
        omega_drive: f64,
        rabi_omega: f64,
        drive_phase: f64,
        window_start: f64,
        window_duration: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("omega_qubit", omega_qubit),
            ("omega_drive", omega_drive),
            ("rabi_omega", rabi_omega),
            ("window_start", window_start),
            ("window_duration", window_duration),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !drive_phase.is_finite() {
            return Err(Error::invalid("drive_phase must be finite"));
        }
        Ok(Self { omega_qubit, omega_drive, rabi_omega, drive_phase, window_start, window_duration })
    }

    /// End of the integration interval.
    pub fn end_time(&self) -> f64 {
        self.window_start + self.window_duration
    }

    /// Fastest angular frequency appearing in the integrand.
    pub fn fastest_angular_frequency(&self) -> f64 {
        self.omega_qubit.max(self.omega_drive).max(self.rabi_omega)
    }
}

/// Fixed-step 4th-order integrator configuration.
///
/// Construction enforces that the step leaves at least 50 points per period
/// of the fastest frequency the integrator will be asked to resolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    step: f64,
    max_angular_frequency: f64,
}

impl IntegratorConfig {
    pub fn new(step: f64, max_angular_frequency: f64) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::config(format!("integrator step must be > 0, got {step}")));
        }
        if !max_angular_frequency.is_finite() || max_angular_frequency <= 0.0 {
            return Err(Error::config("max angular frequency must be > 0"));
        }
        let longest_allowed =
            2.0 * std::f64::consts::PI / max_angular_frequency / MIN_POINTS_PER_PERIOD;
        if step > longest_allowed {
            return Err(Error::config(format!(
                "step {step:e} s too coarse for angular frequency {max_angular_frequency:e} rad/s \
                 (needs <= {longest_allowed:e} s)"
            )));
        }
        Ok(Self { step, max_angular_frequency })
    }

    /// 1 ps step, the default for GHz-scale dynamics.
    pub fn default_1ps(max_angular_frequency: f64) -> Result<Self> {
        Self::new(1e-12, max_angular_frequency)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn max_angular_frequency(&self) -> f64 {
        self.max_angular_frequency
    }
}

/// Rotating-frame Hamiltonian parameters after the RWA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingFrameParams {
    /// Detuning Δω = ω_qubit − ω_drive (rad/s).
    pub detuning: f64,
    /// Drive amplitude Ω (rad/s); may be signed to encode the pulse phase.
    pub rabi_omega: f64,
    /// Evolution time (s).
    pub duration: f64,
}

impl RotatingFrameParams {
    pub fn new(detuning: f64, rabi_omega: f64, duration: f64) -> Result<Self> {
        if !duration.is_finite() || duration < 0.0 {
            return Err(Error::invalid(format!("duration must be >= 0, got {duration}")));
        }
        if !detuning.is_finite() || !rabi_omega.is_finite() {
            return Err(Error::invalid("detuning and rabi_omega must be finite"));
        }
        Ok(Self { detuning, rabi_omega, duration })
    }
}

/// Closed-form rotating-frame propagator `exp(+i t (Δω σz + Ω σx)/2)`.
pub fn rwa_propagator(p: &RotatingFrameParams) -> Unitary2 {
    let mu = (p.detuning * p.detuning + p.rabi_omega * p.rabi_omega).sqrt();
    if mu == 0.0 || p.duration == 0.0 {
        return Unitary2::identity();
    }
    let half = mu * p.duration / 2.0;
    let c = half.cos();
    let s = half.sin();
    let nx = p.rabi_omega / mu;
    let nz = p.detuning / mu;
    // cos·I + i sin·(nx σx + nz σz) in the (g, e) basis where σz = diag(−1, +1).
    Unitary2::from_rows(
        [C64::new(c, -s * nz), C64::new(0.0, s * nx)],
        [C64::new(0.0, s * nx), C64::new(c, s * nz)],
    )
}

/// Generator of the lab-frame Schrödinger equation, `dU/dt = +i H(t) U`.
fn lab_generator(p: &DriveParams, t: f64, u: &Unitary2) -> Unitary2 {
    let drive_on = t >= p.window_start && t < p.end_time();
    let wx = if drive_on {
        p.rabi_omega * (p.omega_drive * t + p.drive_phase).cos()
    } else {
        0.0
    };
    let wz = p.omega_qubit / 2.0;
    // i H = i (wz σz + wx σx), σz = diag(−1, +1).
    let ihz = C64::new(0.0, wz);
    let ihx = C64::new(0.0, wx);
    let m = &u.m;
    Unitary2::from_rows(
        [-ihz * m[0][0] + ihx * m[1][0], -ihz * m[0][1] + ihx * m[1][1]],
        [ihx * m[0][0] + ihz * m[1][0], ihx * m[0][1] + ihz * m[1][1]],
    )
}

fn add_scaled(u: &Unitary2, k: &Unitary2, scale: f64) -> Unitary2 {
    let s = C64::new(scale, 0.0);
    let mut out = *u;
    for r in 0..2 {
        for c in 0..2 {
            out.m[r][c] += s * k.m[r][c];
        }
    }
    out
}

/// Numerically integrated time-ordered lab-frame propagator from t = 0 to the
/// end of the drive window. The result is re-orthonormalized; its unitarity
/// defect before that is bounded by the 4th-order step error.
pub fn lab_propagator(p: &DriveParams, cfg: &IntegratorConfig) -> Result<Unitary2> {
    let fastest = p.fastest_angular_frequency();
    if cfg.max_angular_frequency() < fastest {
        return Err(Error::config(format!(
            "integrator config resolves {:e} rad/s but the drive contains {fastest:e} rad/s",
            cfg.max_angular_frequency()
        )));
    }
    let t_end = p.end_time();
    if t_end == 0.0 {
        return Ok(Unitary2::identity());
    }
    let n_steps = (t_end / cfg.step()).ceil().max(1.0) as u64;
    let h = t_end / n_steps as f64;
    let mut u = Unitary2::identity();
    let mut t = 0.0;
    for _ in 0..n_steps {
        let k1 = lab_generator(p, t, &u);
        let k2 = lab_generator(p, t + h / 2.0, &add_scaled(&u, &k1, h / 2.0));
        let k3 = lab_generator(p, t + h / 2.0, &add_scaled(&u, &k2, h / 2.0));
        let k4 = lab_generator(p, t + h, &add_scaled(&u, &k3, h));
        u = add_scaled(&u, &k1, h / 6.0);
        u = add_scaled(&u, &k2, h / 3.0);
        u = add_scaled(&u, &k3, h / 3.0);
        u = add_scaled(&u, &k4, h / 6.0);
        t += h;
    }
    Ok(u.renormalized())
}

/// Rotate a lab-frame propagator over `[0, t]` into the frame co-rotating
/// with the drive: `U_rot = exp(−i ω t σz / 2) · U_lab`.
pub fn frame_aligned(u_lab: &Unitary2, omega_drive: f64, t: f64) -> Unitary2 {
    let frame = phase_z(t, omega_drive).expect("nonnegative time").adjoint();
    frame.mul(u_lab)
}

/// Average gate fidelity between two single-qubit unitaries,
/// `(2 + |tr(U†V)|²) / 6`; global-phase invariant.
pub fn average_gate_fidelity(u: &Unitary2, v: &Unitary2) -> f64 {
    (2.0 + u.overlap(v).norm_sqr()) / 6.0
}

/// Rotating-wave-approximation error: one minus the average gate fidelity
/// between the frame-aligned lab propagator and the closed-form RWA
/// propagator for the same drive.
pub fn rwa_error(p: &DriveParams, cfg: &IntegratorConfig) -> Result<f64> {
    let lab = lab_propagator(p, cfg)?;
    let aligned = frame_aligned(&lab, p.omega_drive, p.end_time());
    let driven = rwa_propagator(&RotatingFrameParams::new(
        p.omega_qubit - p.omega_drive,
        p.rabi_omega,
        p.window_duration,
    )?);
    let rwa = if p.window_start > 0.0 {
        driven.mul(&phase_z(p.window_start, p.omega_qubit - p.omega_drive)?)
    } else {
        driven
    };
    Ok((1.0 - average_gate_fidelity(&aligned, &rwa)).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{apply, fidelity, rot_x, PureState};
    use std::f64::consts::PI;

    const TWO_PI: f64 = 2.0 * PI;

    /// Test-only oracle: RK4 integration of a *constant* rotating-frame
    /// Hamiltonian, independent of the closed-form matrix exponential.
    fn constant_h_integrator(detuning: f64, rabi: f64, duration: f64, n_steps: u32) -> Unitary2 {
        let h = duration / n_steps as f64;
        let gen = |u: &Unitary2| {
            let ihz = C64::new(0.0, detuning / 2.0);
            let ihx = C64::new(0.0, rabi / 2.0);
            let m = &u.m;
            Unitary2::from_rows(
                [-ihz * m[0][0] + ihx * m[1][0], -ihz * m[0][1] + ihx * m[1][1]],
                [ihx * m[0][0] + ihz * m[1][0], ihx * m[0][1] + ihz * m[1][1]],
            )
        };
        let mut u = Unitary2::identity();
        for _ in 0..n_steps {
            let k1 = gen(&u);
            let k2 = gen(&add_scaled(&u, &k1, h / 2.0));
            let k3 = gen(&add_scaled(&u, &k2, h / 2.0));
            let k4 = gen(&add_scaled(&u, &k3, h));
            u = add_scaled(&u, &k1, h / 6.0);
            u = add_scaled(&u, &k2, h / 3.0);
            u = add_scaled(&u, &k3, h / 3.0);
            u = add_scaled(&u, &k4, h / 6.0);
        }
        u
    }

    fn demo_drive(duration: f64) -> DriveParams {
        DriveParams::resonant(TWO_PI * 3.4e9, TWO_PI * 100e6, duration).unwrap()
    }

    #[test]
    fn rwa_reduces_to_rot_x_on_resonance() {
        let omega = TWO_PI * 100e6;
        let p = RotatingFrameParams::new(0.0, omega, (PI / 2.0) / omega).unwrap();
        let u = rwa_propagator(&p);
        assert!(u.frobenius_distance(&rot_x(PI / 2.0).unwrap()) < 1e-14);
    }

    #[test]
    fn rwa_reduces_to_phase_z_with_drive_off() {
        let delta = TWO_PI * 150e6;
        let t = 3.3e-9;
        let p = RotatingFrameParams::new(delta, 0.0, t).unwrap();
        let u = rwa_propagator(&p);
        assert!(u.frobenius_distance(&phase_z(t, delta).unwrap()) < 1e-14);
    }

    #[test]
    fn rwa_tilted_axis_matches_constant_h_integrator() {
        let omega = TWO_PI * 100e6;
        let t = PI / (omega * 2f64.sqrt());
        let p = RotatingFrameParams::new(omega, omega, t).unwrap();
        let u = rwa_propagator(&p);
        let oracle = constant_h_integrator(omega, omega, t, 20_000);
        assert!(u.frobenius_distance(&oracle) < 1e-10);
    }

    #[test]
    fn lab_free_precession_matches_phase_z() {
        let omega_q = TWO_PI * 3.4e9;
        let tau = 2.0e-9;
        let p = DriveParams::new(omega_q, omega_q, 0.0, 0.0, 0.0, tau).unwrap();
        let cfg = IntegratorConfig::default_1ps(omega_q).unwrap();
        let u = lab_propagator(&p, &cfg).unwrap();
        assert!(u.frobenius_distance(&phase_z(tau, omega_q).unwrap()) < 1e-8);
    }

    #[test]
    fn lab_zero_duration_is_identity() {
        let p = demo_drive(0.0);
        let cfg = IntegratorConfig::default_1ps(p.fastest_angular_frequency()).unwrap();
        let u = lab_propagator(&p, &cfg).unwrap();
        assert_eq!(u.frobenius_distance(&Unitary2::identity()), 0.0);
    }

    #[test]
    fn lab_resonant_pi_pulse_agrees_with_rot_x() {
        // Residual is the counter-rotating correction, order (Ω/2ω)² ≈ 2e-4.
        let omega = TWO_PI * 100e6;
        let p = demo_drive(PI / omega);
        let cfg = IntegratorConfig::default_1ps(p.fastest_angular_frequency()).unwrap();
        let lab = lab_propagator(&p, &cfg).unwrap();
        let aligned = frame_aligned(&lab, p.omega_drive, p.end_time());
        let got = apply(&aligned, &PureState::ground());
        let want = apply(&rot_x(PI).unwrap(), &PureState::ground());
        assert!(fidelity(&got, &want) > 0.999);
    }

    #[test]
    fn lab_step_too_coarse_is_rejected() {
        assert!(IntegratorConfig::new(1e-10, TWO_PI * 3.4e9).is_err());
        let p = demo_drive(1e-9);
        let cfg = IntegratorConfig::new(1e-12, TWO_PI * 1e9).unwrap();
        assert!(matches!(lab_propagator(&p, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn lab_integrator_converges_at_fourth_order() {
        let p = demo_drive(1.0e-9);
        let reference = {
            let cfg = IntegratorConfig::new(0.5e-12, p.fastest_angular_frequency()).unwrap();
            lab_propagator(&p, &cfg).unwrap()
        };
        let coarse = {
            let cfg = IntegratorConfig::new(4e-12, p.fastest_angular_frequency()).unwrap();
            lab_propagator(&p, &cfg).unwrap()
        };
        let fine = {
            let cfg = IntegratorConfig::new(2e-12, p.fastest_angular_frequency()).unwrap();
            lab_propagator(&p, &cfg).unwrap()
        };
        let ratio = coarse.frobenius_distance(&reference) / fine.frobenius_distance(&reference);
        assert!(
            (8.0..=32.0).contains(&ratio),
            "halving the step should gain ~16x, got {ratio}"
        );
    }

    #[test]
    fn frames_agree_exactly_without_drive() {
        // With Ω = 0 both frames predict the same ⟨σz⟩ for all t: the lab
        // propagator stays diagonal, so populations survive with nothing but
        // renormalization rounding on top.
        let omega_q = TWO_PI * 3.4e9;
        for t in [0.5e-9, 1.0e-9, 4.0e-9] {
            let p = DriveParams::new(omega_q, omega_q, 0.0, 0.0, 0.0, t).unwrap();
            let cfg = IntegratorConfig::default_1ps(omega_q).unwrap();
            let lab = lab_propagator(&p, &cfg).unwrap();
            assert_eq!(lab.m[0][1], C64::new(0.0, 0.0));
            assert_eq!(lab.m[1][0], C64::new(0.0, 0.0));
            let s0 = PureState::normalized(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
            let z_lab = apply(&lab, &s0).bloch().z;
            let rwa = rwa_propagator(&RotatingFrameParams::new(0.0, 0.0, t).unwrap());
            let z_rwa = apply(&rwa, &s0).bloch().z;
            assert!((z_lab - z_rwa).abs() < 1e-12, "{z_lab} vs {z_rwa}");
        }
    }

    #[test]
    fn rwa_error_vanishes_without_drive() {
        let omega_q = TWO_PI * 3.4e9;
        let p = DriveParams::new(omega_q, omega_q, 0.0, 0.0, 0.0, 2e-9).unwrap();
        let cfg = IntegratorConfig::default_1ps(omega_q).unwrap();
        assert!(rwa_error(&p, &cfg).unwrap() <= 1e-8);
    }

    #[test]
    fn rwa_error_small_at_demo_scale_and_grows_with_drive() {
        let omega_q = TWO_PI * 3.4e9;
        let cfg = IntegratorConfig::default_1ps(omega_q).unwrap();

        let weak = TWO_PI * 100e6; // Ω/ω_qubit ≈ 0.03
        let p = DriveParams::resonant(omega_q, weak, PI / weak).unwrap();
        let e_weak = rwa_error(&p, &cfg).unwrap();
        assert!(e_weak < 1e-3, "got {e_weak}");

        let strong = TWO_PI * 1.02e9; // Ω/ω_qubit = 0.3
        let p = DriveParams::resonant(omega_q, strong, PI / strong).unwrap();
        let e_strong = rwa_error(&p, &cfg).unwrap();
        assert!(e_strong > e_weak, "strong {e_strong} vs weak {e_weak}");
    }

    #[test]
    fn rwa_error_decreases_with_drive_at_fixed_pulse_area() {
        let omega_q = TWO_PI * 3.4e9;
        let cfg = IntegratorConfig::default_1ps(omega_q).unwrap();
        let errs: Vec<f64> = [0.3, 0.1, 0.03]
            .iter()
            .map(|ratio| {
                let omega = omega_q * ratio;
                let p = DriveParams::resonant(omega_q, omega, PI / omega).unwrap();
                rwa_error(&p, &cfg).unwrap()
            })
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn propagators_stay_unitary() {
        let p = demo_drive(2.5e-9);
        let cfg = IntegratorConfig::default_1ps(p.fastest_angular_frequency()).unwrap();
        let u = lab_propagator(&p, &cfg).unwrap();
        assert!(u.is_unitary(1e-8));
        let r = rwa_propagator(&RotatingFrameParams::new(1e9, 2e9, 5e-9).unwrap());
        assert!(r.is_unitary(1e-10));
    }
}
