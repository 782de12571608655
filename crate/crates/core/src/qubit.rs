//! Exact two-level quantum math: states, 2×2 unitaries, the x-rotation and
//! z-phase gate families, fidelity and Bloch-vector utilities.
//!
//! Basis and sign conventions, fixed once and asserted by tests:
//!
//! * states are stored as amplitudes on `|g>` and `|e>`;
//! * `|e>` is the +1 eigenstate of σz (it has the higher energy under
//!   `H = ħω σz / 2`);
//! * `rot_x(θ) = exp(+i θ σx / 2)` and `phase_z(τ, Δω) = exp(+i Δω τ σz / 2)`,
//!   i.e. both gate families carry the `+i` exponent;
//! * the Pauli triple is right-handed (`σx σy = i σz`), so `rot_x(θ)` moves a
//!   Bloch vector about +x by the angle −θ.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex amplitude type used throughout the crate.
pub type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

/// Norm / trace tolerance for state invariants.
pub const NORM_TOL: f64 = 1e-12;
/// Frobenius tolerance for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-10;

/// Normalized pure state of a two-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    pub amp_g: C64,
    pub amp_e: C64,
}

impl PureState {
    /// Build a state from amplitudes, checking finiteness and normalization.
    pub fn new(amp_g: C64, amp_e: C64) -> Result<Self> {
        for (name, a) in [("amp_g", amp_g), ("amp_e", amp_e)] {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {a}")));
            }
        }
        let s = Self { amp_g, amp_e };
        if (s.norm_sqr() - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "state not normalized: |amp_g|^2 + |amp_e|^2 = {}",
                s.norm_sqr()
            )));
        }
        Ok(s)
    }

    /// Build a state from amplitudes, rescaling to unit norm.
    pub fn normalized(amp_g: C64, amp_e: C64) -> Result<Self> {
        let n = (amp_g.norm_sqr() + amp_e.norm_sqr()).sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::invalid("cannot normalize zero or non-finite state"));
        }
        Self::new(amp_g / n, amp_e / n)
    }

    pub fn ground() -> Self {
        Self { amp_g: C64::new(1.0, 0.0), amp_e: C64::new(0.0, 0.0) }
    }

    pub fn excited() -> Self {
        Self { amp_g: C64::new(0.0, 0.0), amp_e: C64::new(1.0, 0.0) }
    }

    /// `(|g> + |e>)/√2`, the +1 eigenstate of σx.
    pub fn plus_x() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { amp_g: h, amp_e: h }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp_g.norm_sqr() + self.amp_e.norm_sqr()
    }

    /// Probability of finding the qubit excited, `|<e|ψ>|²`.
    pub fn p_excited(&self) -> f64 {
        self.amp_e.norm_sqr()
    }

    /// Bloch vector `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
    pub fn bloch(&self) -> BlochVector {
        let g = self.amp_g;
        let e = self.amp_e;
        // σx = |e><g| + |g><e|, σy = i|g><e| − i|e><g|, σz = |e><e| − |g><g|.
        let cross = g.conj() * e;
        BlochVector {
            x: 2.0 * cross.re,
            y: -2.0 * cross.im,
            z: e.norm_sqr() - g.norm_sqr(),
        }
    }

    /// Draw a Haar-random pure state from `rng`.
    pub fn haar_random(rng: &mut crate::rng::RandomSource) -> Self {
        // Two normalized complex Gaussians are Haar-uniform on the 3-sphere.
        let g = C64::new(rng.next_standard_normal(), rng.next_standard_normal());
        let e = C64::new(rng.next_standard_normal(), rng.next_standard_normal());
        Self::normalized(g, e).expect("gaussian draw is almost surely nonzero")
    }
}

/// `|<a|b>|²` for normalized pure states.
pub fn fidelity(a: &PureState, b: &PureState) -> f64 {
    let overlap = a.amp_g.conj() * b.amp_g + a.amp_e.conj() * b.amp_e;
    overlap.norm_sqr()
}

/// 2×2 unitary in the `(|g>, |e>)` basis; `m[r][c] = <r|U|c>` with row/column
/// index 0 ↔ `|g>`, 1 ↔ `|e>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    pub m: [[C64; 2]; 2],
}

impl Unitary2 {
    pub fn identity() -> Self {
        let o = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        Self { m: [[o, z], [z, o]] }
    }

    pub fn from_rows(r0: [C64; 2], r1: [C64; 2]) -> Self {
        Self { m: [r0, r1] }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            m: [
                [self.m[0][0].conj(), self.m[1][0].conj()],
                [self.m[0][1].conj(), self.m[1][1].conj()],
            ],
        }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Unitary2) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Self { m: out }
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    /// `tr(self† · rhs)`, the Hilbert-Schmidt overlap.
    pub fn overlap(&self, rhs: &Unitary2) -> C64 {
        let mut t = C64::new(0.0, 0.0);
        for r in 0..2 {
            for c in 0..2 {
                t += self.m[r][c].conj() * rhs.m[r][c];
            }
        }
        t
    }

    /// Frobenius norm of `self − rhs`.
    pub fn frobenius_distance(&self, rhs: &Unitary2) -> f64 {
        let mut s = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                s += (self.m[r][c] - rhs.m[r][c]).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Frobenius distance of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint().mul(self).frobenius_distance(&Unitary2::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Re-orthonormalize the columns (Gram-Schmidt). Used to strip the small
    /// unitarity drift a long fixed-step integration accumulates.
    pub fn renormalized(&self) -> Self {
        let c0 = [self.m[0][0], self.m[1][0]];
        let n0 = (c0[0].norm_sqr() + c0[1].norm_sqr()).sqrt();
        let c0 = [c0[0] / n0, c0[1] / n0];
        let c1 = [self.m[0][1], self.m[1][1]];
        let proj = c0[0].conj() * c1[0] + c0[1].conj() * c1[1];
        let c1 = [c1[0] - proj * c0[0], c1[1] - proj * c0[1]];
        let n1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
        let c1 = [c1[0] / n1, c1[1] / n1];
        Self { m: [[c0[0], c1[0]], [c0[1], c1[1]]] }
    }
}

/// Apply a unitary to a pure state. Norm is preserved to machine precision.
pub fn apply(u: &Unitary2, s: &PureState) -> PureState {
    PureState {
        amp_g: u.m[0][0] * s.amp_g + u.m[0][1] * s.amp_e,
        amp_e: u.m[1][0] * s.amp_g + u.m[1][1] * s.amp_e,
    }
}

/// X-axis rotation `exp(+i θ σx / 2)`; a resonant drive pulse of area θ.
pub fn rot_x(theta: f64) -> Result<Unitary2> {
    if !theta.is_finite() {
        return Err(Error::invalid(format!("rotation angle must be finite, got {theta}")));
    }
    let c = C64::new((theta / 2.0).cos(), 0.0);
    let s = I * (theta / 2.0).sin();
    Ok(Unitary2::from_rows([c, s], [s, c]))
}

/// Z-axis phase accumulation `exp(+i Δω τ σz / 2)`; free precession at
/// detuning `delta_omega` for a time `tau`.
pub fn phase_z(tau: f64, delta_omega: f64) -> Result<Unitary2> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::invalid(format!("phase duration must be >= 0, got {tau}")));
    }
    if !delta_omega.is_finite() {
        return Err(Error::invalid("detuning must be finite"));
    }
    let half = delta_omega * tau / 2.0;
    let z = C64::new(0.0, 0.0);
    Ok(Unitary2::from_rows(
        [C64::from_polar(1.0, -half), z],
        [z, C64::from_polar(1.0, half)],
    ))
}

/// Bloch-sphere coordinates `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Two-level density matrix in the `(|g>, |e>)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub m: [[C64; 2]; 2],
}

impl DensityMatrix {
    pub fn from_pure(s: &PureState) -> Self {
        let g = s.amp_g;
        let e = s.amp_e;
        Self {
            m: [
                [g * g.conj(), g * e.conj()],
                [e * g.conj(), e * e.conj()],
            ],
        }
    }

    pub fn maximally_mixed() -> Self {
        let h = C64::new(0.5, 0.0);
        let z = C64::new(0.0, 0.0);
        Self { m: [[h, z], [z, h]] }
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn p_excited(&self) -> f64 {
        self.m[1][1].re
    }

    /// Hermiticity, unit trace and positivity, each within 1e-12.
    pub fn validate(&self) -> Result<()> {
        let herm = (self.m[0][1] - self.m[1][0].conj()).norm()
            + self.m[0][0].im.abs()
            + self.m[1][1].im.abs();
        if herm > NORM_TOL {
            return Err(Error::invalid(format!("density matrix not Hermitian (defect {herm:e})")));
        }
        if (self.trace().re - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("density matrix trace {} != 1", self.trace().re)));
        }
        if self.min_eigenvalue() < -NORM_TOL {
            return Err(Error::invalid(format!(
                "density matrix not positive (min eigenvalue {:e})",
                self.min_eigenvalue()
            )));
        }
        Ok(())
    }

    /// Smaller eigenvalue of the (Hermitian) matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let t = self.trace().re;
        let d = (self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]).re;
        let disc = (t * t / 4.0 - d).max(0.0).sqrt();
        t / 2.0 - disc
    }

    /// Conjugate by a unitary: `U ρ U†`.
    pub fn evolve(&self, u: &Unitary2) -> Self {
        let a = &u.m;
        let r = &self.m;
        let mut ur = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                ur[i][j] = a[i][0] * r[0][j] + a[i][1] * r[1][j];
            }
        }
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = ur[i][0] * a[j][0].conj() + ur[i][1] * a[j][1].conj();
            }
        }
        Self { m: out }
    }

    pub fn bloch(&self) -> BlochVector {
        BlochVector {
            x: 2.0 * self.m[1][0].re,
            y: -2.0 * self.m[1][0].im,
            z: (self.m[1][1] - self.m[0][0]).re,
        }
    }

    /// Trace distance `½ tr|ρ − σ|`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let d00 = self.m[0][0] - other.m[0][0];
        let d01 = self.m[0][1] - other.m[0][1];
        let d10 = self.m[1][0] - other.m[1][0];
        let d11 = self.m[1][1] - other.m[1][1];
        // Eigenvalues of a traceless-ish Hermitian 2×2 difference.
        let t = (d00 + d11).re;
        let det = (d00 * d11 - d01 * d10).re;
        let disc = (t * t / 4.0 - det).max(0.0).sqrt();
        ((t / 2.0 + disc).abs() + (t / 2.0 - disc).abs()) / 2.0
    }
}
