//! Sweep axes, probability grids and their canonical CSV form.

use crate::error::{Error, Result};

/// One realized sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// Inclusive arithmetic grid from `start` to `stop` in steps of `step`.
    pub fn new(name: &str, start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::invalid(format!("step must be > 0, got {step}")));
        }
        if !(start.is_finite() && stop.is_finite() && start <= stop) {
            return Err(Error::invalid(format!("need start <= stop, got [{start}, {stop}]")));
        }
        let count_f = ((stop - start) / step + 1e-9).floor() + 1.0;
        if count_f > 10_000_000.0 {
            return Err(Error::invalid(format!(
                "axis '{name}' would have {count_f:.0} points; refine the step"
            )));
        }
        let count = count_f as usize;
        let values = (0..count).map(|i| start + i as f64 * step).collect();
        Ok(Self { name: name.to_string(), values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the value closest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, v) in self.values.iter().enumerate() {
            let d = (v - x).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

/// One- or two-axis sweep request with per-point shot count and base seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub shots_per_point: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn new(axis1: Axis, axis2: Option<Axis>, shots_per_point: usize, seed: u64) -> Result<Self> {
        if shots_per_point == 0 {
            return Err(Error::invalid("shots_per_point must be positive"));
        }
        Ok(Self { axis1, axis2, shots_per_point, seed })
    }

    pub fn cells(&self) -> usize {
        self.axis1.len() * self.axis2.as_ref().map_or(1, Axis::len)
    }
}

/// Excitation-probability grid produced by a sweep. Rows follow `axis1`,
/// columns `axis2` (a single column when the sweep is one-dimensional).
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub p_excited: Vec<Vec<f64>>,
    pub shots: usize,
}

impl GridResult {
    pub fn column(&self, col: usize) -> Vec<f64> {
        self.p_excited.iter().map(|row| row[col]).collect()
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.p_excited[row]
    }

    /// Smallest cell value in the given column.
    pub fn column_min(&self, col: usize) -> f64 {
        self.column(col).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Two-axis CSV in the canonical format:
    /// `tau1_ns,tau2_ns,p_excited,shots`, one row per cell, row-major,
    /// 9 significant digits, LF endings.
    pub fn to_map_csv(&self) -> String {
        let axis2 = self.axis2.as_ref().expect("map CSV needs two axes");
        let mut out = String::from("tau1_ns,tau2_ns,p_excited,shots\n");
        for (i, t1) in self.axis1.values.iter().enumerate() {
            for (j, t2) in axis2.values.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    format_sig(t1 * 1e9, 9),
                    format_sig(t2 * 1e9, 9),
                    format_sig(self.p_excited[i][j], 9),
                    self.shots
                ));
            }
        }
        out
    }

    /// One-axis CSV: `<axis>_ns,p_excited,shots`.
    pub fn to_trace_csv(&self) -> String {
        assert!(self.axis2.is_none(), "trace CSV is for one-axis sweeps");
        let mut out = format!("{}_ns,p_excited,shots\n", self.axis1.name);
        for (i, t) in self.axis1.values.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                format_sig(t * 1e9, 9),
                format_sig(self.p_excited[i][0], 9),
                self.shots
            ));
        }
        out
    }
}

/// Render `x` with at most `digits` significant decimal digits, trailing
/// zeros trimmed. Magnitudes below 1e-6 fall back to exponent form so a
/// vanishing probability stays readable.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < 1e-6 {
        let s = format!("{x:.*e}", digits.saturating_sub(1));
        if let Some((mantissa, exp)) = s.split_once('e') {
            let m = if mantissa.contains('.') {
                mantissa.trim_end_matches('0').trim_end_matches('.')
            } else {
                mantissa
            };
            return format!("{m}e{exp}");
        }
        return s;
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        t.to_string()
    } else {
        s
    }
}
