// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::ScenarioConfig;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScenarioEcho {
    pub kind: String,
    pub species: String,
    pub electron_spin: f64,
    pub nuclear_spin: f64,
    pub g: f64,
    pub hyperfine_mhz: f64,
    pub b0_mt: f64,
    pub mw_freq_ghz: f64,
    pub temperature_k: f64,
}

impl ScenarioEcho {
    pub fn of(cfg: &ScenarioConfig) -> Self {
        ScenarioEcho {
            kind: cfg.kind().as_str().to_string(),
            species: cfg.species.name.clone(),
            electron_spin: cfg.species.electron_spin.value(),
            nuclear_spin: cfg.species.nuclear_spin.value(),
            g: cfg.species.g,
            hyperfine_mhz: cfg.species.hyperfine_mhz,
            b0_mt: cfg.field.b0_mt,
            mw_freq_ghz: cfg.field.mw_freq_ghz,
            temperature_k: cfg.field.temperature_k,
        }
    }
}

/// Summary of one run, written as `report.toml`. Wall-clock time is kept
/// out of the file so that reports are byte-reproducible.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunReport {
    pub scenario: ScenarioEcho,
    pub results: BTreeMap<String, toml::Value>,
    pub notes: Vec<String>,
    pub files: Vec<String>,
    #[serde(skip)]
    pub wall_clock_ms: f64,
}

impl RunReport {
    pub fn new(cfg: &ScenarioConfig) -> Self {
        RunReport {
            scenario: ScenarioEcho::of(cfg),
            results: BTreeMap::new(),
            notes: Vec::new(),
            files: Vec::new(),
            wall_clock_ms: 0.0,
        }
    }

    pub fn scalar(&mut self, key: &str, v: f64) {
        if v.is_finite() {
            self.results.insert(key.to_string(), toml::Value::Float(v));
        }
    }

    pub fn integer(&mut self, key: &str, v: i64) {
        self.results.insert(key.to_string(), toml::Value::Integer(v));
    }

    pub fn list(&mut self, key: &str, v: &[f64]) {
        self.results.insert(key.to_string(), toml::Value::Array(v.iter().map(|x| toml::Value::Float(*x)).collect()));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        match self.results.get(key)? {
            toml::Value::Float(f) => Some(*f),
            toml::Value::Integer(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn get_list(&self, key: &str) -> Option<Vec<f64>> {
        match self.results.get(key)? {
            toml::Value::Array(a) => a.iter().map(|v| v.as_float()).collect(),
            _ => None,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report serializes")
    }
}
