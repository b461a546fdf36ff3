// SPDX-License-Identifier: Apache-2.0

//! Unit-suffixed quantities. Canonical units: MHz, mT, ns, K, nm.

use fullerene_core::constants::electron_zeeman_factor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Frequency,
    Field,
    Time,
    Temperature,
    Length,
}

impl Dimension {
    pub fn canonical(self) -> &'static str {
        match self {
            Dimension::Frequency => "MHz",
            Dimension::Field => "mT",
            Dimension::Time => "ns",
            Dimension::Temperature => "K",
            Dimension::Length => "nm",
        }
    }
}

// longest suffixes first so that `GHz` wins over `G`
const UNITS: &[(&str, Dimension, f64)] = &[
    ("GHz", Dimension::Frequency, 1e3),
    ("MHz", Dimension::Frequency, 1.0),
    ("kHz", Dimension::Frequency, 1e-3),
    ("uT", Dimension::Field, 1e-3),
    ("µT", Dimension::Field, 1e-3),
    ("μT", Dimension::Field, 1e-3),
    ("mT", Dimension::Field, 1.0),
    ("ns", Dimension::Time, 1.0),
    ("us", Dimension::Time, 1e3),
    ("µs", Dimension::Time, 1e3),
    ("μs", Dimension::Time, 1e3),
    ("ms", Dimension::Time, 1e6),
    ("nm", Dimension::Length, 1.0),
    ("G", Dimension::Field, 0.1),
    ("K", Dimension::Temperature, 1.0),
];

/// A number with the dimension of its suffix, already in canonical units.
/// `dimension` is `None` when the value carried no suffix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub dimension: Option<Dimension>,
    pub unit: Option<&'static str>,
}

pub fn parse_quantity(text: &str) -> Result<Quantity, String> {
    let t = text.trim();
    for &(suffix, dim, scale) in UNITS {
        if let Some(num) = t.strip_suffix(suffix) {
            let num = num.trim_end();
            if let Ok(v) = num.parse::<f64>() {
                return finite(v * scale).map(|value| Quantity { value, dimension: Some(dim), unit: Some(suffix) });
            }
        }
    }
    match t.parse::<f64>() {
        Ok(v) => finite(v).map(|value| Quantity { value, dimension: None, unit: None }),
        Err(_) => Err(format!("`{t}` is not a number with an optional unit suffix")),
    }
}

fn finite(v: f64) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err("value must be finite".into())
    }
}

/// Value in canonical units of `want`; a bare number is taken as canonical.
pub fn expect(q: Quantity, want: Dimension) -> Result<f64, String> {
    match q.dimension {
        None => Ok(q.value),
        Some(d) if d == want => Ok(q.value),
        Some(_) => Err(format!(
            "unit `{}` is not a {} unit (expected e.g. {})",
            q.unit.unwrap_or(""),
            name(want),
            want.canonical()
        )),
    }
}

/// Frequency in MHz from a frequency or an electron-field equivalent.
pub fn frequency_or_field(q: Quantity, g: f64) -> Result<f64, String> {
    match q.dimension {
        Some(Dimension::Field) => Ok(q.value * electron_zeeman_factor(g)),
        _ => expect(q, Dimension::Frequency),
    }
}

/// Field in mT from a field or a frequency equivalent.
pub fn field_or_frequency(q: Quantity, g: f64) -> Result<f64, String> {
    match q.dimension {
        Some(Dimension::Frequency) => Ok(q.value / electron_zeeman_factor(g)),
        _ => expect(q, Dimension::Field),
    }
}

fn name(d: Dimension) -> &'static str {
    match d {
        Dimension::Frequency => "frequency",
        Dimension::Field => "field",
        Dimension::Time => "time",
        Dimension::Temperature => "temperature",
        Dimension::Length => "length",
    }
}
