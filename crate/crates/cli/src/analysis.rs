// SPDX-License-Identifier: Apache-2.0

//! Scalars derived from emitted traces and tables. The report computes its
//! numbers with these functions so they can be recomputed from the files.

use fullerene_core::dynamics::fft::{dominant_peak, min_resolvable_khz};
use fullerene_core::dynamics::oscillation_period;
use fullerene_core::SpectrumTrace;

/// One row of a transition table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineRow {
    pub frequency_mhz: f64,
    pub field_mt: f64,
    pub intensity: f64,
    pub lower_ms: f64,
    pub lower_mi: f64,
    pub upper_ms: f64,
    pub upper_mi: f64,
}

pub const LINE_HEADER: &str = "frequency_MHz,field_mT,intensity,lower_ms,lower_mi,upper_ms,upper_mi";

pub fn parse_lines_csv(text: &str) -> Result<Vec<LineRow>, String> {
    let mut rows = text.lines();
    if rows.next() != Some(LINE_HEADER) {
        return Err("unexpected header".into());
    }
    rows.filter(|r| !r.is_empty())
        .map(|r| {
            let v: Vec<f64> =
                r.split(',').map(|c| c.parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
            if v.len() != 7 {
                return Err(format!("row `{r}` has {} cells", v.len()));
            }
            Ok(LineRow {
                frequency_mhz: v[0],
                field_mt: v[1],
                intensity: v[2],
                lower_ms: v[3],
                lower_mi: v[4],
                upper_ms: v[5],
                upper_mi: v[6],
            })
        })
        .collect()
}

/// Line frequencies of each hyperfine group, keyed by nuclear projection, ascending.
pub fn groups(lines: &[LineRow]) -> Vec<(f64, Vec<LineRow>)> {
    let mut out: Vec<(f64, Vec<LineRow>)> = Vec::new();
    for l in lines {
        match out.iter_mut().find(|g| g.0 == l.lower_mi) {
            Some(g) => g.1.push(*l),
            None => out.push((l.lower_mi, vec![*l])),
        }
    }
    for g in &mut out {
        g.1.sort_by(|a, b| a.frequency_mhz.total_cmp(&b.frequency_mhz));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Mean spacing (kHz) between neighbouring lines of the outermost groups.
pub fn outer_splitting_khz(lines: &[LineRow]) -> Option<f64> {
    let g = groups(lines);
    let top = g.iter().map(|x| x.0.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        return None;
    }
    let mut gaps = Vec::new();
    for (_, rows) in g.iter().filter(|x| x.0.abs() == top) {
        gaps.extend(rows.windows(2).map(|w| w[1].frequency_mhz - w[0].frequency_mhz));
    }
    if gaps.is_empty() {
        return None;
    }
    Some(gaps.iter().sum::<f64>() / gaps.len() as f64 * 1e3)
}

/// Frequency spread (kHz) of the M_I = 0 group, if there is one.
pub fn central_spread_khz(lines: &[LineRow]) -> Option<f64> {
    let g = groups(lines);
    let (_, rows) = g.iter().find(|x| x.0 == 0.0)?;
    let lo = rows.first()?.frequency_mhz;
    let hi = rows.last()?.frequency_mhz;
    Some((hi - lo) * 1e3)
}

/// Intensities of the first outer group relative to its middle line.
pub fn outer_intensity_ratios(lines: &[LineRow]) -> Option<Vec<f64>> {
    let g = groups(lines);
    let (_, rows) = g.last().filter(|x| x.0 != 0.0)?;
    let mid = rows.get(rows.len() / 2)?.intensity;
    Some(rows.iter().map(|r| r.intensity / mid).collect())
}

/// Largest |envelope − envelope(0)|.
pub fn envelope_deviation(envelope: &SpectrumTrace) -> f64 {
    let e0 = envelope.amplitude.first().copied().unwrap_or(0.0);
    envelope.amplitude.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max)
}

/// Oscillation period of `signal` measured only while `envelope` stays
/// above half its initial value, so that dephased tails do not add
/// spurious zero crossings.
pub fn coherent_period(signal: &SpectrumTrace, envelope: &SpectrumTrace) -> Option<f64> {
    let e0 = *envelope.amplitude.first()?;
    let end = envelope.amplitude.iter().position(|e| *e < 0.5 * e0).unwrap_or(envelope.len());
    let head = SpectrumTrace::new(signal.axis[..end].to_vec(), signal.amplitude[..end].to_vec(), signal.unit).ok()?;
    oscillation_period(&head)
}

/// Dominant FFT peak (kHz, magnitude) above the resolution floor of `time_trace`.
pub fn fft_peak(fft: &SpectrumTrace, time_trace: &SpectrumTrace) -> Option<(f64, f64)> {
    dominant_peak(fft, min_resolvable_khz(&time_trace.axis))
}

fn refine(axis: &[f64], y: &[f64], k: usize) -> f64 {
    if k == 0 || k + 1 >= y.len() {
        return axis[k];
    }
    let (a, b, c) = (y[k - 1], y[k], y[k + 1]);
    let d = a - 2.0 * b + c;
    let shift = if d != 0.0 { (0.5 * (a - c) / d).clamp(-0.5, 0.5) } else { 0.0 };
    axis[k] + shift * (axis[k + 1] - axis[k])
}

/// Distance between the nearest absorption maxima on either side of the
/// strongest line, in axis units. `window` bounds the search. Derivative
/// traces are integrated first.
pub fn satellite_separation(trace: &SpectrumTrace, derivative: bool, window: f64) -> Option<f64> {
    let x = &trace.axis;
    let y: Vec<f64> = if derivative {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(x.len());
        out.push(0.0);
        for i in 1..x.len() {
            acc += 0.5 * (trace.amplitude[i] + trace.amplitude[i - 1]) * (x[i] - x[i - 1]);
            out.push(acc);
        }
        out
    } else {
        trace.amplitude.clone()
    };
    let (main, _) = y.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    let is_max = |i: usize| i > 0 && i + 1 < y.len() && y[i] > y[i - 1] && y[i] >= y[i + 1];
    let centre = x[main];
    let left = (0..main).rev().take_while(|&i| centre - x[i] <= window).find(|&i| is_max(i))?;
    let right = (main + 1..y.len()).take_while(|&i| x[i] - centre <= window).find(|&i| is_max(i))?;
    Some(refine(x, &y, right) - refine(x, &y, left))
}

/// Sample nearest to `t` on the axis.
pub fn sample_at(trace: &SpectrumTrace, t: f64) -> Option<f64> {
    let (k, _) = trace.axis.iter().enumerate().min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))?;
    Some(trace.amplitude[k])
}
