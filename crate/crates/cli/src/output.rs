//! Rendering of reports as CSV, JSON or two-column plot data.

use serde::{Deserialize, Serialize};
use stacky_heights::counting::{CountReport, Progression};

use crate::config::Format;

pub const SCHEMA: &str = "stacky-heights/1";

/// The JSON form of a counting run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountDocument {
    pub schema: String,
    #[serde(flatten)]
    pub report: CountReport,
}

impl CountDocument {
    pub fn new(report: CountReport) -> Self {
        CountDocument { schema: SCHEMA.into(), report }
    }
}

pub fn render_count(report: &CountReport, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("B,count\n");
            for s in &report.samples {
                out.push_str(&format!("{},{}\n", s.bound, s.count));
            }
        }
        Format::Plot => {
            out.push_str(&format!("# {}: B count\n", report.family));
            for s in &report.samples {
                out.push_str(&format!("{} {}\n", s.bound, s.count));
            }
        }
        Format::Json => {
            out = serde_json::to_string_pretty(&CountDocument::new(report.clone())).expect("report serializes");
            out.push('\n');
        }
    }
    out
}

/// Hits of a Vojta search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "search", rename_all = "snake_case")]
pub enum SearchHits {
    Rooted444 { hits: Vec<(u64, u64)> },
    Ap5 { hits: Vec<Progression> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDocument {
    pub schema: String,
    pub cutoff: u64,
    pub delta: f64,
    #[serde(flatten)]
    pub hits: SearchHits,
}

pub fn render_search(doc: &SearchDocument, format: Format) -> String {
    let rows: Vec<(u64, u64)> = match &doc.hits {
        SearchHits::Rooted444 { hits } => hits.clone(),
        SearchHits::Ap5 { hits } => hits.iter().map(|p| (p.first, p.step)).collect(),
    };
    let header = match doc.hits {
        SearchHits::Rooted444 { .. } => ("a", "b"),
        SearchHits::Ap5 { .. } => ("first", "step"),
    };
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(&format!("{},{}\n", header.0, header.1));
            for (x, y) in rows {
                out.push_str(&format!("{x},{y}\n"));
            }
        }
        Format::Plot => {
            out.push_str(&format!("# {} {}\n", header.0, header.1));
            for (x, y) in rows {
                out.push_str(&format!("{x} {y}\n"));
            }
        }
        Format::Json => {
            out = serde_json::to_string_pretty(doc).expect("search serializes");
            out.push('\n');
        }
    }
    out
}
