//! Feedback-loop latency budget.
//!
//! The conditional operation on chip costs one bifurcation time plus one
//! selective-Ramsey π time. Routing the measurement result through external
//! electronics adds cable delay (5 ns/m as a rule of thumb) and classical
//! processing, which at microsecond scale dominates everything else.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatencyMode {
    OnChip,
    OffChip,
}

/// Inputs of the budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyModel {
    pub mode: LatencyMode,
    /// Feedback-loop cable length (m); off-chip only.
    pub cable_length: f64,
    /// Cable delay per meter (s/m).
    pub cable_delay_rate: f64,
    /// Classical processing delay (s); off-chip only.
    pub processing_delay: f64,
    /// Bifurcation (latch) time (s).
    pub tau_jba: f64,
    /// Selective-Ramsey π time (s).
    pub tau_pi: f64,
}

impl LatencyModel {
    pub fn new(
        mode: LatencyMode,
        cable_length: f64,
        cable_delay_rate: f64,
        processing_delay: f64,
        tau_jba: f64,
        tau_pi: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("cable_length", cable_length),
            ("cable_delay_rate", cable_delay_rate),
            ("processing_delay", processing_delay),
            ("tau_jba", tau_jba),
            ("tau_pi", tau_pi),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self { mode, cable_length, cable_delay_rate, processing_delay, tau_jba, tau_pi })
    }

    /// On-chip loop at the demo device numbers: 7 ns latch + 5.5 ns π time.
    pub fn on_chip_default() -> Self {
        Self::new(LatencyMode::OnChip, 0.0, 5e-9, 0.0, 7e-9, 5.5e-9).expect("valid defaults")
    }

    /// Conventional loop: 20 m of cable at 5 ns/m plus the given processing
    /// delay, on top of the same latch and rotation times.
    pub fn off_chip_default(processing_delay: f64) -> Result<Self> {
        Self::new(LatencyMode::OffChip, 20.0, 5e-9, processing_delay, 7e-9, 5.5e-9)
    }
}

/// Named delay components, in schedule order, plus their total (seconds).
#[derive(Debug, Clone, PartialEq)]
pub struct LatencyBudget {
    pub components: Vec<(&'static str, f64)>,
}

impl LatencyBudget {
    pub fn total(&self) -> f64 {
        self.components.iter().map(|(_, v)| v).sum()
    }

    pub fn component(&self, name: &str) -> Option<f64> {
        self.components.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    /// `component,delay_ns` CSV, one row per component plus a total row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("component,delay_ns\n");
        for (name, v) in &self.components {
            out.push_str(&format!("{name},{}\n", crate::harness::sweep::format_sig(v * 1e9, 9)));
        }
        out.push_str(&format!("total,{}\n", crate::harness::sweep::format_sig(self.total() * 1e9, 9)));
        out
    }

    /// Plain-text table with aligned columns.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<14}{:>12}\n", "component", "delay_ns"));
        for (name, v) in &self.components {
            out.push_str(&format!("{:<14}{:>12}\n", name, crate::harness::sweep::format_sig(v * 1e9, 9)));
        }
        out.push_str(&format!("{:<14}{:>12}\n", "total", crate::harness::sweep::format_sig(self.total() * 1e9, 9)));
        out
    }
}

/// Break a latency model into named components.
pub fn latency_budget(m: &LatencyModel) -> LatencyBudget {
    let mut components: Vec<(&'static str, f64)> = Vec::new();
    if m.mode == LatencyMode::OffChip {
        components.push(("cable", m.cable_length * m.cable_delay_rate));
        components.push(("processing", m.processing_delay));
    }
    components.push(("bifurcation", m.tau_jba));
    components.push(("ramsey_pi", m.tau_pi));
    LatencyBudget { components }
}
