use std::collections::BTreeMap;
use std::fmt::Write as _;

use dcorr_core::{Envelope, LagCurve};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::svg::{self, Panel};

/// Command result. The first seven fields form the stable JSON schema;
/// command-specific data goes into `extra` and is flattened alongside.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub seed: u64,
    pub measure: Option<String>,
    pub lags: Vec<i64>,
    pub values: Vec<f64>,
    pub envelopes: BTreeMap<String, Vec<f64>>,
    pub warnings: Vec<String>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
    /// Envelope columns in TSV order.
    #[serde(skip)]
    columns: Vec<(String, Vec<f64>)>,
    #[serde(skip)]
    panels: Vec<Panel>,
}

impl Report {
    pub fn new(command: &'static str, seed: u64, measure: Option<String>) -> Self {
        Report {
            command,
            seed,
            measure,
            lags: Vec::new(),
            values: Vec::new(),
            envelopes: BTreeMap::new(),
            warnings: Vec::new(),
            extra: Map::new(),
            columns: Vec::new(),
            panels: Vec::new(),
        }
    }

    pub fn with_curve(mut self, curve: &LagCurve) -> Self {
        self.lags = curve.lags.clone();
        self.values = curve.values.clone();
        self
    }

    /// Sets the primary envelope, the one reported under `envelopes`.
    pub fn set_envelope(&mut self, env: &Envelope) {
        for (level, q) in env.levels.iter().zip(&env.quantiles) {
            self.envelopes.insert(level_key(*level), q.clone());
            self.columns.push((column_name("q", *level), q.clone()));
        }
        self.warnings.extend(env.warnings.iter().cloned());
    }

    /// Adds a secondary envelope as TSV columns `<prefix>qNN`.
    pub fn add_tsv_envelope(&mut self, prefix: &str, env: &Envelope) {
        for (level, q) in env.levels.iter().zip(&env.quantiles) {
            self.columns.push((column_name(&format!("{prefix}q"), *level), q.clone()));
        }
    }

    pub fn insert(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.extra.insert(key.to_string(), value);
    }

    pub fn add_panel(&mut self, panel: Panel) {
        self.panels.push(panel);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("lag\tvalue");
        for (name, _) in &self.columns {
            out.push('\t');
            out.push_str(name);
        }
        out.push('\n');
        for (k, (lag, value)) in self.lags.iter().zip(&self.values).enumerate() {
            write!(out, "{lag}\t{value}").unwrap();
            for (_, col) in &self.columns {
                write!(out, "\t{}", col[k]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_svg(&self) -> String {
        if self.panels.is_empty() {
            let bands = self.columns.clone();
            svg::render(&[Panel::new(self.command, &self.lags, &self.values, bands)])
        } else {
            svg::render(&self.panels)
        }
    }
}

pub fn level_key(level: f64) -> String {
    format!("{level}")
}

/// `0.05 -> q05`, `0.5 -> q50`, `0.975 -> q97.5`.
pub fn column_name(prefix: &str, level: f64) -> String {
    let pct = (level * 1e6).round() / 1e4;
    if pct.fract() == 0.0 {
        format!("{prefix}{:02}", pct as u32)
    } else {
        format!("{prefix}{pct}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_names() {
        assert_eq!(column_name("q", 0.05), "q05");
        assert_eq!(column_name("q", 0.5), "q50");
        assert_eq!(column_name("q", 0.95), "q95");
        assert_eq!(column_name("perm_q", 0.975), "perm_q97.5");
        assert_eq!(column_name("q", 0.01), "q01");
    }

    #[test]
    fn json_has_schema_keys() {
        let mut r = Report::new("adcf", 7, Some("gauss:var=0.5".into()));
        r.insert("scaled", true);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["command", "seed", "measure", "lags", "values", "envelopes", "warnings", "scaled"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["seed"], 7);
    }
}
