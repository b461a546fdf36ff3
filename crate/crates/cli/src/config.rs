// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration files.
//!
//! One scenario per file. Top-level `key = value` lines come first, then
//! `[section]` blocks. `#` starts a comment. Numeric values may carry a unit
//! suffix (`9.67 GHz`, `5.66 G`, `0.25 ms`); bare numbers are read in the
//! canonical unit of the key. Lists are comma separated.
//!
//! ```text
//! scenario = cw
//!
//! [species]
//! preset = 14N@C60
//!
//! [field]
//! mw_freq = 9.67 GHz
//!
//! [cw]
//! linewidth = 0.3 uT
//! ```

use std::collections::HashSet;

use fullerene_core::dynamics::{InhomogeneityModel, RelaxationParams, DEFAULT_NODES};
use fullerene_core::gates::DEFAULT_REFERENCE_NUTATION_MHZ;
use fullerene_core::spectral::C13Profile;
use fullerene_core::trace::Lineshape;
use fullerene_core::{constants, FieldConfig, SpeciesParams, SpinQuantumNumber};

use crate::error::{CliError, Result};
use crate::units::{self, Dimension, Quantity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Levels,
    Cw,
    Eseem,
    Rabi,
    NuclearRabi,
    Bb1,
    Dimer,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        ScenarioKind::Levels,
        ScenarioKind::Cw,
        ScenarioKind::Eseem,
        ScenarioKind::Rabi,
        ScenarioKind::NuclearRabi,
        ScenarioKind::Bb1,
        ScenarioKind::Dimer,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Levels => "levels",
            ScenarioKind::Cw => "cw",
            ScenarioKind::Eseem => "eseem",
            ScenarioKind::Rabi => "rabi",
            ScenarioKind::NuclearRabi => "nuclear-rabi",
            ScenarioKind::Bb1 => "bb1",
            ScenarioKind::Dimer => "dimer",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    fn uses_relaxation(self) -> bool {
        matches!(self, ScenarioKind::Rabi | ScenarioKind::NuclearRabi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Field,
    Frequency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelsConfig {
    pub order: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CwConfig {
    pub sweep: SweepKind,
    /// Peak-to-peak width in axis units (mT or MHz).
    pub linewidth: f64,
    /// Axis step; defaults to a tenth of the linewidth.
    pub step: Option<f64>,
    /// Axis margin beyond the outermost lines; defaults to ten linewidths.
    pub margin: Option<f64>,
    pub lineshape: Lineshape,
    pub derivative: bool,
    /// Extra mixture components (preset, weight); the configured species has weight `weight`.
    pub components: Vec<(SpeciesParams, f64)>,
    pub weight: f64,
    pub c13: C13Profile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EseemConfig {
    pub tau_start_ns: f64,
    pub tau_step_ns: f64,
    pub points: usize,
    pub zero_pad: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RabiConfig {
    pub nutation_mhz: f64,
    pub step_ns: f64,
    pub points: usize,
    pub inhomogeneity: InhomogeneityModel,
    pub relaxation: RelaxationParams,
    /// Coherence time used to count resolvable oscillations, ns.
    pub t2_reference_ns: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuclearRabiConfig {
    pub rf_amp_mhz: f64,
    pub targets_mhz: Vec<f64>,
    pub step_ns: f64,
    pub points: usize,
    pub relaxation: RelaxationParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bb1Config {
    pub angle: f64,
    pub phase: f64,
    pub epsilons: Vec<f64>,
    pub detunings_mhz: Vec<f64>,
    pub reference_nutation_mhz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimerConfig {
    pub partner: SpeciesParams,
    pub exchange_mhz: f64,
    pub distance_nm: Option<f64>,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Levels(LevelsConfig),
    Cw(CwConfig),
    Eseem(EseemConfig),
    Rabi(RabiConfig),
    NuclearRabi(NuclearRabiConfig),
    Bb1(Bb1Config),
    Dimer(DimerConfig),
}

impl Scenario {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            Scenario::Levels(_) => ScenarioKind::Levels,
            Scenario::Cw(_) => ScenarioKind::Cw,
            Scenario::Eseem(_) => ScenarioKind::Eseem,
            Scenario::Rabi(_) => ScenarioKind::Rabi,
            Scenario::NuclearRabi(_) => ScenarioKind::NuclearRabi,
            Scenario::Bb1(_) => ScenarioKind::Bb1,
            Scenario::Dimer(_) => ScenarioKind::Dimer,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub species: SpeciesParams,
    pub field: FieldConfig,
    pub scenario: Scenario,
}

impl ScenarioConfig {
    pub fn kind(&self) -> ScenarioKind {
        self.scenario.kind()
    }
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
    key_col: usize,
    value_col: usize,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

fn tokenize(text: &str) -> Result<Vec<Section>> {
    let mut sections = vec![Section { name: String::new(), line: 0, entries: Vec::new() }];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| CliError::at(line, indent + 1, "section header is missing `]`"))?
                .trim();
            if name.is_empty() {
                return Err(CliError::at(line, indent + 1, "empty section name"));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(CliError::at(line, indent + 1, format!("section [{name}] appears twice")));
            }
            sections.push(Section { name: name.to_string(), line, entries: Vec::new() });
            continue;
        }
        let eq =
            content.find('=').ok_or_else(|| CliError::at(line, indent + 1, "expected `key = value` or `[section]`"))?;
        let key = content[..eq].trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(CliError::at(line, indent + 1, format!("invalid key `{key}`")));
        }
        let after = &content[eq + 1..];
        let value = after.trim();
        if value.is_empty() {
            return Err(CliError::at(line, eq + 2, format!("key `{key}` has no value")));
        }
        let value_col = eq + 2 + (after.len() - after.trim_start().len());
        let section = sections.last_mut().expect("top-level section");
        if section.entries.iter().any(|e| e.key == key) {
            return Err(CliError::at(line, indent + 1, format!("key `{key}` is set twice")));
        }
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
            key_col: indent + 1,
            value_col,
        });
    }
    Ok(sections)
}

/// Reads typed values out of one section and rejects keys nobody asked for.
struct Reader<'a> {
    section: Option<&'a Section>,
    used: HashSet<&'a str>,
}

impl<'a> Reader<'a> {
    fn new(section: Option<&'a Section>) -> Self {
        Reader { section, used: HashSet::new() }
    }

    fn entry(&mut self, key: &str) -> Option<&'a Entry> {
        let e = self.section?.entries.iter().find(|e| e.key == key)?;
        self.used.insert(e.key.as_str());
        Some(e)
    }

    fn text(&mut self, key: &str) -> Option<&'a str> {
        self.entry(key).map(|e| e.value.as_str())
    }

    fn with<T>(&mut self, key: &str, f: impl FnOnce(&str) -> std::result::Result<T, String>) -> Result<Option<T>> {
        match self.entry(key) {
            None => Ok(None),
            Some(e) => f(&e.value).map(Some).map_err(|m| CliError::at(e.line, e.value_col, format!("`{key}`: {m}"))),
        }
    }

    fn quantity(
        &mut self,
        key: &str,
        f: impl FnOnce(Quantity) -> std::result::Result<f64, String>,
    ) -> Result<Option<f64>> {
        self.with(key, |v| units::parse_quantity(v).and_then(f))
    }

    fn dim(&mut self, key: &str, d: Dimension) -> Result<Option<f64>> {
        self.quantity(key, |q| units::expect(q, d))
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>> {
        self.with(key, |v| {
            let q = units::parse_quantity(v)?;
            match q.unit {
                None => Ok(q.value),
                Some(u) => Err(format!("expects a plain number, found unit `{u}`")),
            }
        })
    }

    fn count(&mut self, key: &str) -> Result<Option<usize>> {
        self.with(key, |v| v.parse::<usize>().map_err(|_| format!("`{v}` is not a non-negative integer")))
    }

    fn boolean(&mut self, key: &str) -> Result<Option<bool>> {
        self.with(key, |v| match v {
            "true" | "yes" | "on" => Ok(true),
            "false" | "no" | "off" => Ok(false),
            _ => Err(format!("`{v}` is not a boolean")),
        })
    }

    fn list(
        &mut self,
        key: &str,
        f: impl Fn(Quantity) -> std::result::Result<f64, String>,
    ) -> Result<Option<Vec<f64>>> {
        self.with(key, |v| {
            v.split(',')
                .map(|item| units::parse_quantity(item).and_then(&f))
                .collect::<std::result::Result<Vec<_>, _>>()
        })
    }

    fn finish(self) -> Result<()> {
        if let Some(s) = self.section {
            if let Some(e) = s.entries.iter().find(|e| !self.used.contains(e.key.as_str())) {
                let place = if s.name.is_empty() { "at top level".to_string() } else { format!("in [{}]", s.name) };
                return Err(CliError::at(e.line, e.key_col, format!("unknown key `{}` {place}", e.key)));
            }
        }
        Ok(())
    }
}

fn preset(name: &str, line: usize, col: usize) -> Result<SpeciesParams> {
    SpeciesParams::preset(name).map_err(|e| CliError::at(line, col, e.to_string()))
}

fn parse_species(r: &mut Reader) -> Result<SpeciesParams> {
    let base = match r.entry("preset") {
        Some(e) => Some(preset(&e.value, e.line, e.value_col)?),
        None => None,
    };
    let spin = |v: &str| {
        let x: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
        SpinQuantumNumber::new(x).map_err(|e| e.to_string())
    };
    let electron = r.with("electron_spin", spin)?;
    let nuclear = r.with("nuclear_spin", spin)?;
    let g = r.number("g")?;
    let nuclear_g = r.number("nuclear_g")?;
    let cage = r.count("cage_carbons")?;
    let g_eff = g.or(base.as_ref().map(|b| b.g)).unwrap_or(constants::G_NC60);
    let a = r.quantity("a", |q| units::frequency_or_field(q, g_eff))?;
    let mut s = match base {
        Some(b) => b,
        None => {
            let missing: Vec<&str> = [
                ("electron_spin", electron.is_none()),
                ("nuclear_spin", nuclear.is_none()),
                ("g", g.is_none()),
                ("nuclear_g", nuclear_g.is_none()),
                ("a", a.is_none()),
            ]
            .iter()
            .filter(|(_, m)| *m)
            .map(|(k, _)| *k)
            .collect();
            if !missing.is_empty() {
                return Err(CliError::Invalid(format!(
                    "[species] needs `preset` or all of electron_spin, nuclear_spin, g, nuclear_g, a (missing {})",
                    missing.join(", ")
                )));
            }
            SpeciesParams::new("custom", electron.unwrap(), nuclear.unwrap(), g_eff, nuclear_g.unwrap(), a.unwrap())
                .map_err(|e| CliError::Invalid(e.to_string()))?
        }
    };
    if let Some(x) = electron {
        s.electron_spin = x;
    }
    if let Some(x) = nuclear {
        s.nuclear_spin = x;
    }
    s.g = g_eff;
    if let Some(x) = nuclear_g {
        s.nuclear_g = x;
    }
    if let Some(x) = a {
        s.hyperfine_mhz = x;
    }
    if let Some(x) = cage {
        s.cage_carbons = x as u32;
    }
    s.validate().map_err(|e| CliError::Invalid(format!("[species]: {e}")))?;
    Ok(s)
}

fn parse_field(r: &mut Reader, g: f64) -> Result<FieldConfig> {
    let mw = r.dim("mw_freq", Dimension::Frequency)?.unwrap_or(9670.0);
    let b0 = match r.entry("b0") {
        None => None,
        Some(e) if e.value == "auto" => None,
        Some(e) => Some(
            units::parse_quantity(&e.value)
                .and_then(|q| units::expect(q, Dimension::Field))
                .map_err(|m| CliError::at(e.line, e.value_col, format!("`b0`: {m}")))?,
        ),
    };
    let temperature = r.dim("temperature", Dimension::Temperature)?.unwrap_or(300.0);
    let invalid = |e: fullerene_core::Error| CliError::Invalid(format!("[field]: {e}"));
    let field = match b0 {
        Some(b) => FieldConfig::new(b, mw * 1e-3),
        None => FieldConfig::resonant(mw * 1e-3, g),
    }
    .map_err(invalid)?;
    field.with_temperature(temperature).map_err(invalid)
}

fn parse_relaxation(r: &mut Reader) -> Result<RelaxationParams> {
    let t1 = r.dim("t1", Dimension::Time)?.map(|t| t / 1e6);
    let t2 = r.dim("t2", Dimension::Time)?.map(|t| t / 1e6);
    RelaxationParams::new(t1, t2).map_err(|e| CliError::Invalid(format!("[relaxation]: {e}")))
}

fn parse_inhomogeneity(r: &mut Reader) -> Result<InhomogeneityModel> {
    let model = r.text("model").unwrap_or("gaussian");
    let nodes = r.count("nodes")?.unwrap_or(DEFAULT_NODES);
    let m = match model {
        "delta" => InhomogeneityModel::Delta,
        "gaussian" => InhomogeneityModel::Gaussian { sigma: r.number("sigma")?.unwrap_or(0.05), nodes },
        "uniform" => InhomogeneityModel::Uniform {
            lo: r.number("lo")?.unwrap_or(0.9),
            hi: r.number("hi")?.unwrap_or(1.1),
            nodes,
        },
        other => {
            return Err(CliError::Invalid(format!(
                "[inhomogeneity]: unknown model `{other}` (delta, gaussian, uniform)"
            )))
        }
    };
    m.validate().map_err(|e| CliError::Invalid(format!("[inhomogeneity]: {e}")))?;
    Ok(m)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Invalid(format!("`{name}` must be positive, got {v}")))
    }
}

fn parse_cw(r: &mut Reader, species: &SpeciesParams) -> Result<CwConfig> {
    let sweep = match r.text("sweep").unwrap_or("field") {
        "field" => SweepKind::Field,
        "frequency" => SweepKind::Frequency,
        other => return Err(CliError::Invalid(format!("[cw]: unknown sweep `{other}` (field, frequency)"))),
    };
    let g = species.g;
    let axis_value = move |q: Quantity| match sweep {
        SweepKind::Field => units::field_or_frequency(q, g),
        SweepKind::Frequency => units::frequency_or_field(q, g),
    };
    let default_width = match sweep {
        SweepKind::Field => 3e-4,
        SweepKind::Frequency => 3e-4 * constants::electron_zeeman_factor(g),
    };
    let linewidth = positive("linewidth", r.quantity("linewidth", axis_value)?.unwrap_or(default_width))?;
    let step = r.quantity("step", axis_value)?.map(|s| positive("step", s)).transpose()?;
    let margin = r.quantity("margin", axis_value)?.map(|s| positive("margin", s)).transpose()?;
    let lineshape = match r.text("lineshape").unwrap_or("gaussian") {
        "gaussian" => Lineshape::Gaussian,
        "lorentzian" => Lineshape::Lorentzian,
        other => return Err(CliError::Invalid(format!("[cw]: unknown lineshape `{other}` (gaussian, lorentzian)"))),
    };
    let derivative = r.boolean("derivative")?.unwrap_or(true);
    let weight = r.number("weight")?.unwrap_or(1.0);
    let mut components = Vec::new();
    if let Some(e) = r.entry("components") {
        for item in e.value.split(',') {
            let (name, w) = item.split_once(':').unwrap_or((item, "1"));
            let w: f64 = w.trim().parse().map_err(|_| {
                CliError::at(e.line, e.value_col, format!("`components`: bad weight in `{}`", item.trim()))
            })?;
            components.push((preset(name.trim(), e.line, e.value_col)?, w));
        }
    }
    let c13 = match r.text("c13").unwrap_or("none") {
        "none" => C13Profile::None,
        "binomial" => C13Profile::Binomial {
            abundance: r.number("abundance")?.unwrap_or(constants::C13_ABUNDANCE),
            a13_mhz: r.quantity("a13", |q| units::frequency_or_field(q, g))?.unwrap_or(constants::C13_COUPLING_MHZ),
            max_k: r.count("max_k")?.unwrap_or(2) as u32,
        },
        other => return Err(CliError::Invalid(format!("[cw]: unknown c13 model `{other}` (none, binomial)"))),
    };
    if let C13Profile::Binomial { max_k, .. } = c13 {
        if max_k > 2 {
            return Err(CliError::Invalid(format!("[cw]: max_k = {max_k} exceeds 2")));
        }
    }
    Ok(CwConfig { sweep, linewidth, step, margin, lineshape, derivative, components, weight, c13 })
}

fn parse_scenario(
    kind: ScenarioKind,
    r: &mut Reader,
    species: &SpeciesParams,
    relaxation: RelaxationParams,
    inh: Option<InhomogeneityModel>,
) -> Result<Scenario> {
    Ok(match kind {
        ScenarioKind::Levels => {
            let order = r.count("order")?.unwrap_or(2);
            if order != 1 && order != 2 {
                return Err(CliError::Invalid(format!("[levels]: order must be 1 or 2, got {order}")));
            }
            Scenario::Levels(LevelsConfig { order: order as u8 })
        }
        ScenarioKind::Cw => Scenario::Cw(parse_cw(r, species)?),
        ScenarioKind::Eseem => Scenario::Eseem(EseemConfig {
            tau_start_ns: r.dim("tau_start", Dimension::Time)?.unwrap_or(0.0),
            tau_step_ns: positive("tau_step", r.dim("tau_step", Dimension::Time)?.unwrap_or(100.0))?,
            points: r.count("points")?.unwrap_or(2048),
            zero_pad: r.count("zero_pad")?.unwrap_or(4),
        }),
        ScenarioKind::Rabi => Scenario::Rabi(RabiConfig {
            nutation_mhz: r.dim("nutation", Dimension::Frequency)?.unwrap_or(31.25),
            step_ns: positive("step", r.dim("step", Dimension::Time)?.unwrap_or(0.25))?,
            points: r.count("points")?.unwrap_or(3201),
            inhomogeneity: inh.unwrap_or(InhomogeneityModel::Delta),
            relaxation,
            t2_reference_ns: positive("t2_reference", r.dim("t2_reference", Dimension::Time)?.unwrap_or(2.5e5))?,
        }),
        ScenarioKind::NuclearRabi => Scenario::NuclearRabi(NuclearRabiConfig {
            rf_amp_mhz: r.dim("rf_amp", Dimension::Frequency)?.unwrap_or(0.005),
            targets_mhz: r
                .list("targets", |q| units::expect(q, Dimension::Frequency))?
                .unwrap_or_else(|| vec![22.597, 24.781]),
            step_ns: positive("step", r.dim("step", Dimension::Time)?.unwrap_or(2000.0))?,
            points: r.count("points")?.unwrap_or(1024),
            relaxation,
        }),
        ScenarioKind::Bb1 => Scenario::Bb1(Bb1Config {
            angle: r.number("angle_deg")?.unwrap_or(180.0).to_radians(),
            phase: r.number("phase_deg")?.unwrap_or(0.0).to_radians(),
            epsilons: r
                .list("epsilons", |q| {
                    if q.unit.is_some() {
                        Err("amplitude errors are plain numbers".into())
                    } else {
                        Ok(q.value)
                    }
                })?
                .unwrap_or_else(|| vec![0.0, 0.1]),
            detunings_mhz: r
                .list("detunings", |q| units::expect(q, Dimension::Frequency))?
                .unwrap_or_else(|| vec![0.0]),
            reference_nutation_mhz: positive(
                "reference_nutation",
                r.dim("reference_nutation", Dimension::Frequency)?.unwrap_or(DEFAULT_REFERENCE_NUTATION_MHZ),
            )?,
        }),
        ScenarioKind::Dimer => {
            let partner = match r.entry("partner") {
                Some(e) => preset(&e.value, e.line, e.value_col)?,
                None => species.clone(),
            };
            Scenario::Dimer(DimerConfig {
                partner,
                exchange_mhz: positive("exchange", r.dim("exchange", Dimension::Frequency)?.unwrap_or(52.0))?,
                distance_nm: r.dim("distance", Dimension::Length)?.map(|d| positive("distance", d)).transpose()?,
                points: r.count("points")?.unwrap_or(401),
            })
        }
    })
}

/// Parses and validates a scenario file, filling defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let sections = tokenize(text)?;
    let top = &sections[0];
    let mut r = Reader::new(Some(top));
    let kind_entry = r.entry("scenario").ok_or_else(|| {
        CliError::Invalid(
            "missing required key `scenario` (one of levels, cw, eseem, rabi, nuclear-rabi, bb1, dimer)".into(),
        )
    })?;
    let kind = ScenarioKind::parse(&kind_entry.value).ok_or_else(|| {
        CliError::at(
            kind_entry.line,
            kind_entry.value_col,
            format!("unknown scenario `{}` (levels, cw, eseem, rabi, nuclear-rabi, bb1, dimer)", kind_entry.value),
        )
    })?;
    r.finish()?;

    let mut allowed = vec!["species", "field", kind.as_str()];
    if kind.uses_relaxation() {
        allowed.push("relaxation");
    }
    if kind == ScenarioKind::Rabi {
        allowed.push("inhomogeneity");
    }
    for s in &sections[1..] {
        if !allowed.contains(&s.name.as_str()) {
            return Err(CliError::at(
                s.line,
                1,
                format!("section [{}] does not apply to a {} scenario", s.name, kind.as_str()),
            ));
        }
    }
    let find = |name: &str| sections.iter().skip(1).find(|s| s.name == name);

    if find("species").is_none() {
        return Err(CliError::Invalid("missing [species] section".into()));
    }
    let mut r = Reader::new(find("species"));
    let species = parse_species(&mut r)?;
    r.finish()?;
    let mut r = Reader::new(find("field"));
    let field = parse_field(&mut r, species.g)?;
    r.finish()?;
    let mut r = Reader::new(find("relaxation"));
    let relaxation = parse_relaxation(&mut r)?;
    r.finish()?;
    let inh = match find("inhomogeneity") {
        Some(s) => {
            let mut r = Reader::new(Some(s));
            let m = parse_inhomogeneity(&mut r)?;
            r.finish()?;
            Some(m)
        }
        None => None,
    };
    let mut r = Reader::new(find(kind.as_str()));
    let scenario = parse_scenario(kind, &mut r, &species, relaxation, inh)?;
    r.finish()?;
    Ok(ScenarioConfig { species, field, scenario })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_cw_gets_defaults() {
        let c = parse_config("scenario = cw\n[species]\npreset = 14N@C60\n").unwrap();
        assert_eq!(c.field.mw_freq_ghz, 9.67);
        let b0 = fullerene_core::field_for_resonance(9.67, c.species.g).unwrap();
        assert_eq!(c.field.b0_mt, b0);
        let Scenario::Cw(cw) = c.scenario else { panic!("not cw") };
        assert!((cw.linewidth - 3e-4).abs() < 1e-15);
        assert_eq!(cw.sweep, SweepKind::Field);
    }

    #[test]
    fn empty_file_names_scenario_key() {
        let e = parse_config("").unwrap_err();
        assert!(e.to_string().contains("`scenario`"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn hyperfine_in_gauss() {
        let c = parse_config("scenario = levels\n[species]\npreset = 15N@C60\na = 5.66 G\n").unwrap();
        let expected = constants::gauss_to_mhz(5.66, c.species.g);
        assert!((c.species.hyperfine_mhz - expected).abs() < 1e-12);
        assert!((c.species.hyperfine_mhz - 15.88).abs() < 0.01);
    }

    #[test]
    fn unknown_key_reports_position() {
        let e = parse_config("scenario = rabi\n[species]\npreset = 14N@C60\n[rabi]\n  nutaton = 3 MHz\n").unwrap_err();
        match e {
            CliError::Config { line, column, message } => {
                assert_eq!((line, column), (5, 3));
                assert!(message.contains("nutaton"));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unit_mismatch_and_missing_preset() {
        let e = parse_config("scenario = rabi\n[species]\npreset = 14N@C60\n[rabi]\nnutation = 3 ns\n").unwrap_err();
        assert!(matches!(e, CliError::Config { line: 5, column: 12, .. }), "{e}");
        let e = parse_config("scenario = rabi\n[species]\npreset = 31P@Si\n").unwrap_err();
        assert!(e.to_string().contains("31P@Si"));
    }

    #[test]
    fn unknown_scenario_and_foreign_section() {
        assert!(parse_config("scenario = nmr\n").unwrap_err().to_string().contains("unknown scenario"));
        let e = parse_config("scenario = levels\n[species]\npreset = 14N@C60\n[rabi]\n").unwrap_err();
        assert!(e.to_string().contains("[rabi]"));
    }

    #[test]
    fn inline_species_and_lists() {
        let text = "scenario = nuclear-rabi\n[species]\nelectron_spin = 1.5\nnuclear_spin = 1\ng = 2.0036\nnuclear_g = 0.403761\na = 15.87 MHz\n\
                    [nuclear-rabi]\ntargets = 22.6 MHz, 24800 kHz\n[relaxation]\nt2 = 0.1 ms\nt1 = 1 ms\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.species.name, "custom");
        let Scenario::NuclearRabi(n) = c.scenario else { panic!() };
        assert_eq!(n.targets_mhz, vec![22.6, 24.8]);
        assert_eq!(n.relaxation.t2_ms, Some(0.1));
        let e = parse_config("scenario = levels\n[species]\nelectron_spin = 1.5\n").unwrap_err();
        assert!(e.to_string().contains("nuclear_spin"), "{e}");
    }

    #[test]
    fn duplicate_keys_and_malformed_lines() {
        assert!(matches!(parse_config("scenario = cw\nscenario = cw\n"), Err(CliError::Config { line: 2, .. })));
        assert!(matches!(parse_config("scenario = cw\n[species\n"), Err(CliError::Config { line: 2, .. })));
        assert!(matches!(parse_config("scenario cw\n"), Err(CliError::Config { line: 1, .. })));
    }
}
