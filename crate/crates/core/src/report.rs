//! Serializable verification reports: text, JSON and CSV.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::hp::HPReal;
use crate::rational::render_rational;
use crate::series::rational_sci;
use crate::theorems::{Verdict, VerifyReport};

pub const TOOL: &str = "hypsum";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits for differences and error bounds.
pub const DIFF_DIGITS: u32 = 6;

pub const CSV_COLUMNS: [&str; 11] = [
    "id",
    "c",
    "status",
    "digits",
    "closed_value",
    "series_value",
    "series_eps",
    "rhs_value",
    "diff_closed",
    "diff_series",
    "verdict",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub id: String,
    pub c: String,
    pub status: String,
    pub digits: u32,
    pub closed_form: String,
    pub closed_value: String,
    pub series_value: String,
    pub series_eps: String,
    pub rhs_value: String,
    pub diff_closed: String,
    pub diff_series: String,
    pub verdict: String,
}

fn diff_string(x: &HPReal) -> String {
    x.to_sci_string(DIFF_DIGITS)
}

impl From<&VerifyReport> for OutputRecord {
    fn from(r: &VerifyReport) -> Self {
        OutputRecord {
            id: r.id.clone(),
            c: render_rational(&r.c),
            status: r.status.to_string(),
            digits: r.digits,
            closed_form: r.closed_form.clone(),
            closed_value: r.closed_value.to_sig_string(r.digits),
            series_value: r.series_value.to_sig_string(r.digits),
            series_eps: rational_sci(&r.series_eps),
            rhs_value: r.rhs_value.to_sig_string(r.digits),
            diff_closed: diff_string(&r.abs_diff_closed_rhs),
            diff_series: diff_string(&r.abs_diff_series_rhs),
            verdict: r.verdict.to_string(),
        }
    }
}

impl OutputRecord {
    fn csv_row(&self) -> [String; 11] {
        [
            self.id.clone(),
            self.c.clone(),
            self.status.clone(),
            self.digits.to_string(),
            self.closed_value.clone(),
            self.series_value.clone(),
            self.series_eps.clone(),
            self.rhs_value.clone(),
            self.diff_closed.clone(),
            self.diff_series.clone(),
            self.verdict.clone(),
        ]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub expected_fail: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub digits: u32,
    pub route: String,
    pub records: Vec<OutputRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(digits: u32, route: &str, reports: &[VerifyReport]) -> Report {
        let mut summary = Summary::default();
        for r in reports {
            match r.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Fail => summary.fail += 1,
                Verdict::ExpectedFail => summary.expected_fail += 1,
            }
        }
        Report {
            tool: TOOL.into(),
            version: VERSION.into(),
            digits,
            route: route.into(),
            records: reports.iter().map(OutputRecord::from).collect(),
            summary,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn to_csv(&self) -> String {
        let mut out = CSV_COLUMNS.join(",");
        out.push('\n');
        for r in &self.records {
            let row: Vec<String> = r.csv_row().iter().map(|f| csv_escape(f)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Aligned columns followed by a summary line.
    pub fn to_text(&self) -> String {
        let header = ["id", "c", "status", "verdict", "diff_closed", "diff_series", "series_eps"];
        let rows: Vec<[&str; 7]> = self
            .records
            .iter()
            .map(|r| {
                [
                    r.id.as_str(),
                    &r.c,
                    &r.status,
                    &r.verdict,
                    &r.diff_closed,
                    &r.diff_series,
                    &r.series_eps,
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[&str]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&header);
        for row in &rows {
            line(row);
        }
        let _ = writeln!(
            out,
            "digits {}, route {}: {} pass, {} fail, {} expected-fail",
            self.digits, self.route, self.summary.pass, self.summary.fail, self.summary.expected_fail
        );
        out
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
