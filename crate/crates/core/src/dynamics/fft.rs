// SPDX-License-Identifier: Apache-2.0

//! Windowed, zero-padded magnitude spectra of time-domain traces.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::trace::{AxisUnit, SpectrumTrace};

/// Default zero-padding factor.
pub const DEFAULT_PAD: usize = 4;

/// Step of a uniform axis, or an error if the spacing varies by more than 1e-6 relative.
pub fn uniform_step(axis: &[f64]) -> Result<f64> {
    if axis.len() < 2 {
        return Err(Error::InvalidGrid("at least two points long"));
    }
    let step = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
    if !(step > 0.0) || axis.windows(2).any(|w| ((w[1] - w[0]) - step).abs() > 1e-6 * step) {
        return Err(Error::InvalidGrid("uniformly spaced"));
    }
    Ok(step)
}

/// Symmetric Hann window.
pub fn hann(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n).map(|k| 0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos()).collect()
}

/// One-sided magnitude spectrum of a trace sampled in ns, on a kHz axis.
///
/// The mean is removed, a Hann window applied and the record zero-padded to
/// `pad`× its length. Magnitudes are scaled so that a sinusoid of amplitude
/// A sitting on a bin centre reads A.
pub fn fft_magnitude(trace: &SpectrumTrace, pad: usize) -> Result<SpectrumTrace> {
    if trace.unit != AxisUnit::Nanosecond {
        return Err(Error::InvalidTrace("FFT input must be sampled in ns".into()));
    }
    if pad == 0 {
        return Err(Error::param("pad", "zero-padding factor must be >= 1"));
    }
    let dt = uniform_step(&trace.axis)?;
    let n = trace.len();
    let mean = trace.amplitude.iter().sum::<f64>() / n as f64;
    let w = hann(n);
    let wsum: f64 = w.iter().sum();
    let m = n * pad;
    let mut buf: Vec<Complex<f64>> = trace
        .amplitude
        .iter()
        .zip(&w)
        .map(|(y, w)| Complex::new((y - mean) * w, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(m)
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    // df in kHz for dt in ns
    let df = 1e6 / (m as f64 * dt);
    let half = m / 2 + 1;
    let axis = (0..half).map(|k| k as f64 * df).collect();
    let mag = buf[..half].iter().map(|z| 2.0 * z.norm() / wsum).collect();
    SpectrumTrace::new(axis, mag, AxisUnit::Kilohertz)
}

/// Frequency of the largest magnitude at or above `min_khz`, refined by a
/// parabola through the peak bin and its neighbours.
pub fn dominant_peak(spectrum: &SpectrumTrace, min_khz: f64) -> Option<(f64, f64)> {
    let y = &spectrum.amplitude;
    let (k, _) =
        y.iter().enumerate().filter(|(i, _)| spectrum.axis[*i] >= min_khz).max_by(|a, b| a.1.total_cmp(b.1))?;
    let df = spectrum.axis.get(1).map_or(0.0, |a| a - spectrum.axis[0]);
    if k == 0 || k + 1 >= y.len() {
        return Some((spectrum.axis[k], y[k]));
    }
    let (a, b, c) = (y[k - 1], y[k], y[k + 1]);
    let denom = a - 2.0 * b + c;
    let delta = if denom.abs() > 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    let delta = delta.clamp(-0.5, 0.5);
    Some((spectrum.axis[k] + delta * df, b - 0.25 * (a - c) * delta))
}

/// Lowest frequency worth reporting: two bins of the unpadded record, which
/// clears the window's main lobe around DC.
pub fn min_resolvable_khz(time_axis: &[f64]) -> f64 {
    let span = time_axis.last().copied().unwrap_or(0.0) - time_axis.first().copied().unwrap_or(0.0);
    if span > 0.0 {
        2.0 * 1e6 / span
    } else {
        0.0
    }
}
