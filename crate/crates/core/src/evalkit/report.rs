use super::ci::Interval;
use super::metrics::{aggregate, prf, MatchCounts, Metrics};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<MatchCounts>,
    pub metrics: Metrics,
}

/// One block of P/R/F1 columns, e.g. "Strict" or "Prompt E".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricColumn {
    pub name: String,
    pub rows: Vec<MetricRow>,
    pub average: Option<Metrics>,
}

impl MetricColumn {
    pub fn from_counts<'a>(name: &str, rows: impl IntoIterator<Item = (&'a str, MatchCounts)>) -> Self {
        let rows: Vec<MetricRow> = rows
            .into_iter()
            .map(|(label, c)| MetricRow {
                label: label.to_string(),
                counts: Some(c),
                metrics: prf(c),
            })
            .collect();
        Self::with_average(name, rows)
    }

    pub fn from_metrics<'a>(name: &str, rows: impl IntoIterator<Item = (&'a str, Metrics)>) -> Self {
        let rows = rows
            .into_iter()
            .map(|(label, metrics)| MetricRow {
                label: label.to_string(),
                counts: None,
                metrics,
            })
            .collect();
        Self::with_average(name, rows)
    }

    fn with_average(name: &str, rows: Vec<MetricRow>) -> Self {
        let average = aggregate(rows.iter().map(|r| &r.metrics));
        MetricColumn {
            name: name.to_string(),
            rows,
            average,
        }
    }

    fn get(&self, label: &str) -> Option<&Metrics> {
        self.rows.iter().find(|r| r.label == label).map(|r| &r.metrics)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricTable {
    pub title: String,
    pub row_header: String,
    pub columns: Vec<MetricColumn>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiAnnotation {
    pub label: String,
    pub successes: u64,
    pub n: u64,
    pub interval: Interval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: String,
}

const REPORT_HEADER: &str = "sigkit evaluation report";
const LABEL_WIDTH: usize = 22;
const CELL: usize = 16;

fn triple(m: Option<&Metrics>) -> String {
    match m {
        Some(m) => format!("{:.2} {:.2} {:.2}", m.precision, m.recall, m.f1),
        None => "   -    -    -".to_string(),
    }
}

fn render_table(t: &MetricTable, out: &mut String) {
    let mut labels: Vec<&str> = Vec::new();
    for c in &t.columns {
        for r in &c.rows {
            if !labels.contains(&r.label.as_str()) {
                labels.push(&r.label);
            }
        }
    }
    let _ = writeln!(out, "\n{}", t.title);
    let mut head = format!("{:<LABEL_WIDTH$}", t.row_header);
    let mut sub = format!("{:<LABEL_WIDTH$}", "");
    for c in &t.columns {
        let _ = write!(head, " | {:<CELL$}", c.name);
        let _ = write!(sub, " | {:<CELL$}", "   P    R   F1");
    }
    let _ = writeln!(out, "{}", head.trim_end());
    let _ = writeln!(out, "{}", sub.trim_end());
    let mut line = |label: &str, cells: Vec<String>| {
        let mut s = format!("{label:<LABEL_WIDTH$}");
        for c in cells {
            let _ = write!(s, " | {c:<CELL$}");
        }
        let _ = writeln!(out, "{}", s.trim_end());
    };
    for label in &labels {
        line(label, t.columns.iter().map(|c| triple(c.get(label))).collect());
    }
    if !t.columns.is_empty() {
        line("Average", t.columns.iter().map(|c| triple(c.average.as_ref())).collect());
    }
}

/// Plain-text tables rounded to 2 dp plus a JSON twin with unrounded values.
pub fn render_report(tables: &[MetricTable], cis: &[CiAnnotation]) -> Report {
    let mut text = String::from(REPORT_HEADER);
    text.push('\n');
    for t in tables {
        render_table(t, &mut text);
    }
    if !cis.is_empty() {
        let _ = writeln!(text, "\n{:.2} confidence intervals", cis[0].interval.confidence);
        for ci in cis {
            let _ = writeln!(
                text,
                "{}: {:.2} [{:.2}, {:.2}] ({}/{})",
                ci.label,
                ci.successes as f64 / ci.n as f64,
                ci.interval.low,
                ci.interval.high,
                ci.successes,
                ci.n
            );
        }
    }
    let json = serde_json::json!({
        "tables": tables,
        "confidence_intervals": cis,
    });
    Report {
        text,
        json: serde_json::to_string_pretty(&json).expect("report serializes") + "\n",
    }
}
