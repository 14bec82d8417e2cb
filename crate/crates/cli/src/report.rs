use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::csv::VERSION;

/// One reported number with the formula that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Headline {
    pub name: String,
    pub value: f64,
    pub unit: String,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub config_sha256: String,
    pub config: BTreeMap<String, String>,
    pub headlines: Vec<Headline>,
    pub warnings: Vec<String>,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: &str, cfg: &ScenarioConfig) -> Self {
        Self {
            command: command.into(),
            version: VERSION.into(),
            config_sha256: cfg.hash(),
            config: cfg.echo().into_iter().collect(),
            headlines: Vec::new(),
            warnings: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn add(&mut self, name: &str, value: f64, unit: &str, formula: &str) {
        self.headlines.push(Headline {
            name: name.into(),
            value,
            unit: unit.into(),
            formula: formula.into(),
        });
    }

    pub fn warn(&mut self, text: impl Into<String>) {
        self.warnings.push(text.into());
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.headlines.iter().find(|h| h.name == name).map(|h| h.value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
