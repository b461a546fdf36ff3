// SPDX-License-Identifier: Apache-2.0

//! Sampled 1-D traces and their CSV serialization.
//!
//! CSV layout: one header line (`axis_mT,amplitude`, `axis_MHz,amplitude`,
//! `axis_ns,amplitude` or `freq_kHz,magnitude`), then one `x,y` row per
//! sample, each value printed with 12 significant digits, LF line endings.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Physical unit of a trace's abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisUnit {
    Millitesla,
    Megahertz,
    Nanosecond,
    /// FFT frequency axis; the ordinate is a magnitude.
    Kilohertz,
}

impl AxisUnit {
    pub fn header(self) -> &'static str {
        match self {
            AxisUnit::Millitesla => "axis_mT,amplitude",
            AxisUnit::Megahertz => "axis_MHz,amplitude",
            AxisUnit::Nanosecond => "axis_ns,amplitude",
            AxisUnit::Kilohertz => "freq_kHz,magnitude",
        }
    }

    pub fn from_header(header: &str) -> Option<Self> {
        [AxisUnit::Millitesla, AxisUnit::Megahertz, AxisUnit::Nanosecond, AxisUnit::Kilohertz]
            .into_iter()
            .find(|u| u.header() == header.trim_end_matches('\r'))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Lineshape {
    #[default]
    Gaussian,
    Lorentzian,
}

/// Provenance of a synthesized spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceMeta {
    pub lineshape: Option<Lineshape>,
    /// Peak-to-peak linewidth in axis units.
    pub linewidth: Option<f64>,
    pub derivative: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    pub axis: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub unit: AxisUnit,
    pub meta: TraceMeta,
}

impl SpectrumTrace {
    pub fn new(axis: Vec<f64>, amplitude: Vec<f64>, unit: AxisUnit) -> Result<Self> {
        let t = SpectrumTrace { axis, amplitude, unit, meta: TraceMeta::default() };
        t.validate()?;
        Ok(t)
    }

    pub fn with_meta(mut self, meta: TraceMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.axis.len() != self.amplitude.len() {
            return Err(Error::InvalidTrace(format!(
                "axis has {} samples but amplitude has {}",
                self.axis.len(),
                self.amplitude.len()
            )));
        }
        if self.axis.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidTrace("axis is not strictly increasing".into()));
        }
        if self.axis.iter().chain(&self.amplitude).any(|v| !v.is_finite()) {
            return Err(Error::InvalidTrace("non-finite sample".into()));
        }
        Ok(())
    }

    /// Index and value of the largest amplitude.
    pub fn argmax(&self) -> Option<(usize, f64)> {
        self.amplitude.iter().copied().enumerate().max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Serializes to CSV. Refuses empty traces.
    pub fn to_csv(&self) -> Result<String> {
        if self.is_empty() {
            return Err(Error::InvalidTrace("trace has no samples".into()));
        }
        self.validate()?;
        let mut out = String::with_capacity(32 * self.len());
        out.push_str(self.unit.header());
        out.push('\n');
        for (x, y) in self.axis.iter().zip(&self.amplitude) {
            let _ = writeln!(out, "{},{}", format_significant(*x, 12), format_significant(*y, 12));
        }
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::InvalidTrace("missing header".into()))?;
        let unit = AxisUnit::from_header(header)
            .ok_or_else(|| Error::InvalidTrace(format!("unrecognised header `{header}`")))?;
        let mut axis = Vec::new();
        let mut amplitude = Vec::new();
        for (n, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let (x, y) =
                line.split_once(',').ok_or_else(|| Error::InvalidTrace(format!("row {} has no comma", n + 2)))?;
            let parse =
                |s: &str| s.trim().parse::<f64>().map_err(|e| Error::InvalidTrace(format!("row {}: {e}", n + 2)));
            axis.push(parse(x)?);
            amplitude.push(parse(y)?);
        }
        SpectrumTrace::new(axis, amplitude, unit)
    }
}

/// Formats `x` with `digits` significant digits, `%g` style: fixed notation
/// for moderate exponents, scientific otherwise, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        format!("{m}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
