//! Fringe-frequency extraction from a sampled oscillation.
//!
//! A zero-padded FFT locates the spectral peak, then the estimate is refined
//! in continuous frequency by minimizing the least-squares residual of an
//! `a + b·cos(2πfτ) + c·sin(2πfτ)` model. Fitting the real sinusoid directly
//! avoids the peak bias the raw periodogram picks up from the
//! negative-frequency image over short windows.

use rustfft::{num_complex::Complex, FftPlanner};

/// Fitted dominant fringe frequency (Hz) of `trace` sampled uniformly at
/// `dt` seconds. A trace with peak-to-peak spread below 1e-9 is treated as
/// flat and reports 0 Hz.
pub fn fringe_frequency(trace: &[f64], dt: f64) -> f64 {
    assert!(trace.len() >= 8, "need at least eight samples");
    assert!(dt > 0.0);
    let n = trace.len();
    let mean = trace.iter().sum::<f64>() / n as f64;
    let (lo, hi) = trace
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-9 {
        return 0.0;
    }

    // Coarse estimate: padded-FFT peak.
    let padded = (n * 8).next_power_of_two();
    let mut buf: Vec<Complex<f64>> =
        trace.iter().map(|&v| Complex::new(v - mean, 0.0)).collect();
    buf.resize(padded, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);
    let half = padded / 2;
    let peak_bin = (1..half)
        .max_by(|&a, &b| buf[a].norm_sqr().partial_cmp(&buf[b].norm_sqr()).unwrap())
        .unwrap();
    let pad_bin_hz = 1.0 / (padded as f64 * dt);
    let coarse = peak_bin as f64 * pad_bin_hz;

    // Refine: minimize the sinusoid-fit residual around the coarse peak.
    let mut lo_f = (coarse - 2.0 * pad_bin_hz).max(pad_bin_hz * 0.25);
    let mut hi_f = coarse + 2.0 * pad_bin_hz;
    for _ in 0..200 {
        let m1 = lo_f + (hi_f - lo_f) / 3.0;
        let m2 = hi_f - (hi_f - lo_f) / 3.0;
        if sinusoid_residual(trace, dt, m1) > sinusoid_residual(trace, dt, m2) {
            lo_f = m1;
        } else {
            hi_f = m2;
        }
    }
    (lo_f + hi_f) / 2.0
}

/// Sum of squared residuals of the best `a + b·cos(2πfτ) + c·sin(2πfτ)` fit
/// at fixed frequency `f` (linear least squares via normal equations).
fn sinusoid_residual(trace: &[f64], dt: f64, f: f64) -> f64 {
    // Normal-equation accumulators for the basis (1, cos, sin).
    let mut g = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for (k, &y) in trace.iter().enumerate() {
        let phase = 2.0 * std::f64::consts::PI * f * (k as f64 * dt);
        let row = [1.0, phase.cos(), phase.sin()];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] += row[i] * row[j];
            }
            b[i] += row[i] * y;
        }
    }
    let coeffs = match solve3(g, b) {
        Some(c) => c,
        None => return f64::INFINITY,
    };
    let mut sse = 0.0;
    for (k, &y) in trace.iter().enumerate() {
        let phase = 2.0 * std::f64::consts::PI * f * (k as f64 * dt);
        let fit = coeffs[0] + coeffs[1] * phase.cos() + coeffs[2] * phase.sin();
        sse += (y - fit) * (y - fit);
    }
    sse
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-30 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col];
        for row in 0..3 {
            if row != col {
                let factor = a[row][col] / pivot_row[col];
                for (dst, src) in a[row].iter_mut().zip(pivot_row.iter()).skip(col) {
                    *dst -= factor * src;
                }
                b[row] -= factor * b[col];
            }
        }
    }
    Some([b[0] / a[0][0], b[1] / a[1][1], b[2] / a[2][2]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_clean_sin_squared_fringe() {
        // P(e)(τ) = sin²(π f τ) oscillates at frequency f.
        let f0 = 150e6;
        let dt = 0.1e-9;
        let trace: Vec<f64> = (0..201)
            .map(|k| (std::f64::consts::PI * f0 * k as f64 * dt).sin().powi(2))
            .collect();
        let f = fringe_frequency(&trace, dt);
        assert!((f - f0).abs() / f0 < 1e-4, "got {f}");
    }

    #[test]
    fn recovers_fringe_off_grid() {
        let f0 = 87.3e6;
        let dt = 0.1e-9;
        let trace: Vec<f64> = (0..201)
            .map(|k| 0.5 + 0.5 * (2.0 * std::f64::consts::PI * f0 * k as f64 * dt + 0.3).cos())
            .collect();
        let f = fringe_frequency(&trace, dt);
        assert!((f - f0).abs() / f0 < 1e-4, "got {f}");
    }

    #[test]
    fn flat_trace_reports_zero() {
        let trace = vec![1.0; 128];
        assert_eq!(fringe_frequency(&trace, 0.1e-9), 0.0);
    }

    #[test]
    fn survives_shot_noise() {
        let f0 = 150e6;
        let dt = 0.1e-9;
        let mut rng = crate::rng::RandomSource::new(61, 0);
        let shots = 10_000usize;
        let trace: Vec<f64> = (0..201)
            .map(|k| {
                let p = (std::f64::consts::PI * f0 * k as f64 * dt).sin().powi(2);
                let hits = (0..shots).filter(|_| rng.next_f64() < p).count();
                hits as f64 / shots as f64
            })
            .collect();
        let f = fringe_frequency(&trace, dt);
        assert!((f - f0).abs() / f0 < 0.01, "got {f}");
    }
}
