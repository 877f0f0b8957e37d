//! Deterministic JSON report documents emitted by the command-line front
//! end. Serialization is byte-identical for identical configuration and
//! tool version: fixed field order, shortest round-trip float formatting,
//! and no wall-clock data in the document (timing goes to stderr).

use serde::{Deserialize, Serialize};

use crate::classifier::ComponentReport;
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// One named check with its verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Component summary for the JSON document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub id: u32,
    pub status: String,
    pub area_fraction: f64,
    pub touches_viewport_edge: bool,
    pub witness_count: usize,
}

impl From<&ComponentReport> for ComponentSummary {
    fn from(c: &ComponentReport) -> Self {
        ComponentSummary {
            id: c.id,
            status: format!("{:?}", c.status),
            area_fraction: c.area_fraction,
            touches_viewport_edge: c.touches_viewport_edge,
            witness_count: c.witness_points.len(),
        }
    }
}

/// The full report document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub checks: Vec<CheckLine>,
    pub components: Vec<ComponentSummary>,
}

impl ReportDoc {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        ReportDoc {
            schema_version: SCHEMA_VERSION,
            tool: "dichotomap".into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            checks: Vec::new(),
            components: Vec::new(),
        }
    }

    pub fn push_check(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(CheckLine {
            name: name.into(),
            pass,
            detail,
        });
    }

    pub fn set_components(&mut self, reports: &[ComponentReport]) {
        self.components = reports.iter().map(ComponentSummary::from).collect();
        self.components.sort_by_key(|c| c.id);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write_to(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> ReportDoc {
        let mut doc = ReportDoc::new("image", json!({"map": "joukowski", "eps": 1e-9}));
        doc.push_check("all-filled", true, "2 components filled".into());
        doc
    }

    #[test]
    fn serialization_is_deterministic() {
        assert_eq!(sample().to_json(), sample().to_json());
    }

    #[test]
    fn round_trips_through_json() {
        let doc = sample();
        let back: ReportDoc = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(back.to_json(), doc.to_json());
        assert_eq!(back.schema_version, SCHEMA_VERSION);
        assert!(back.all_pass());
    }

    #[test]
    fn floats_round_trip_shortest() {
        let doc = ReportDoc::new("t", json!({"x": 0.1, "y": 1e-30}));
        let s = doc.to_json();
        assert!(s.contains("\"x\": 0.1"), "{s}");
        assert!(s.contains("1e-30"), "{s}");
    }

    #[test]
    fn failing_check_flips_verdict() {
        let mut doc = sample();
        doc.push_check("margin", false, "negative".into());
        assert!(!doc.all_pass());
    }
}
