//! Amplitude-damping and dephasing applied between schedule segments.
//!
//! T1 and T2 are user-supplied and off by default. The channel is applied
//! coarse-grained, once per elapsed segment, which is adequate for ns-scale
//! sequences against μs-scale coherence times.

use crate::error::{Error, Result};
use crate::qubit::DensityMatrix;

/// Optional coherence times.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DecoherenceParams {
    pub t1: Option<f64>,
    pub t2: Option<f64>,
}

impl DecoherenceParams {
    pub fn new(t1: Option<f64>, t2: Option<f64>) -> Result<Self> {
        for (name, v) in [("t1", t1), ("t2", t2)] {
            if let Some(x) = v {
                if !x.is_finite() || x <= 0.0 {
                    return Err(Error::invalid(format!("{name} must be > 0 when present")));
                }
            }
        }
        if let (Some(a), Some(b)) = (t1, t2) {
            if b > 2.0 * a {
                return Err(Error::invalid(format!(
                    "t2 = {b:e} exceeds the amplitude-damping bound 2·t1 = {:e}",
                    2.0 * a
                )));
            }
        }
        Ok(Self { t1, t2 })
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_none(&self) -> bool {
        self.t1.is_none() && self.t2.is_none()
    }
}

/// Evolve a density matrix through `duration` of idle decoherence: amplitude
/// damping toward `|g>` with probability `1 − e^{−t/T1}` plus enough pure
/// dephasing that the total coherence decay is `e^{−t/T2}`.
///
/// Populations and coherences are updated in closed form; the equivalent
/// Kraus decomposition is kept as an independent oracle in the tests.
pub fn apply_decoherence(
    rho: &DensityMatrix,
    duration: f64,
    noise: &DecoherenceParams,
) -> Result<DensityMatrix> {
    if !duration.is_finite() || duration < 0.0 {
        return Err(Error::invalid(format!("duration must be >= 0, got {duration}")));
    }
    if noise.is_none() || duration == 0.0 {
        return Ok(*rho);
    }
    let pop_keep = match noise.t1 {
        Some(t1) => (-duration / t1).exp(),
        None => 1.0,
    };
    let coherence_keep = match (noise.t1, noise.t2) {
        (_, Some(t2)) => (-duration / t2).exp(),
        (Some(t1), None) => (-duration / (2.0 * t1)).exp(),
        (None, None) => 1.0,
    };
    let mut out = *rho;
    let decayed = rho.m[1][1] * (1.0 - pop_keep);
    out.m[1][1] = rho.m[1][1] * pop_keep;
    out.m[0][0] = rho.m[0][0] + decayed;
    out.m[0][1] = rho.m[0][1] * coherence_keep;
    out.m[1][0] = rho.m[1][0] * coherence_keep;
    Ok(out)
}
