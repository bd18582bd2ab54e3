use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{StatReport, SystemStatus};
use crate::grid::ZoneId;
use crate::model::SetLocation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format `{other}` (text, csv, json)")),
        }
    }
}

fn cell(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.2}"),
        None => "NA".to_string(),
    }
}

pub fn render_report(report: &StatReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => report_text(report),
        ReportFormat::Csv => report_csv(report),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

const HEADER: [&str; 11] = [
    "status", "overall_share", "set_location", "share", "spike", "junk", "line", "angle", "seam",
    "sets", "attempts",
];

fn report_cells(report: &StatReport) -> Vec<[String; 11]> {
    report
        .rows
        .iter()
        .map(|row| {
            [
                row.status.label().to_string(),
                format!("{:.2}", report.overall_share(row.status)),
                row.location.label().to_string(),
                cell(row.share),
                cell(row.spike),
                cell(row.junk),
                cell(row.line),
                cell(row.angle),
                cell(row.seam),
                row.sets.to_string(),
                row.attempts.to_string(),
            ]
        })
        .collect()
}

fn report_csv(report: &StatReport) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for cells in report_cells(report) {
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn report_text(report: &StatReport) -> String {
    let rows = report_cells(report);
    let mut widths: Vec<usize> = HEADER.iter().map(|h| h.len()).collect();
    for cells in &rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = format!("attack table for team {}\n", report.team);
    let line = |out: &mut String, cells: &[&str]| {
        let text: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i < 3 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        out.push_str(text.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut out, &HEADER);
    let mut last_status = None;
    for cells in &rows {
        let status = cells[0].as_str();
        let fresh = last_status != Some(status);
        last_status = Some(status);
        let (s, share) = if fresh { (status, cells[1].as_str()) } else { ("", "") };
        let mut view: Vec<&str> = cells.iter().map(String::as_str).collect();
        view[0] = s;
        view[1] = share;
        line(&mut out, &view);
    }
    debug_assert_eq!(rows.len(), SystemStatus::ALL.len() * 6);
    out
}

pub fn zones_text(counts: &BTreeMap<ZoneId, u64>) -> String {
    let total: u64 = counts.values().sum();
    let mut out = String::from("zone  count\n");
    for (zone, n) in counts {
        writeln!(out, "{:>4}  {:>5}", zone.get(), n).unwrap();
    }
    writeln!(out, "total {total:>5}").unwrap();
    out
}

pub fn zones_csv(counts: &BTreeMap<ZoneId, u64>) -> String {
    let mut out = String::from("zone,count\n");
    for (zone, n) in counts {
        writeln!(out, "{},{}", zone.get(), n).unwrap();
    }
    out
}

pub fn distribution_text(dist: &BTreeMap<SetLocation, f64>) -> String {
    let mut out = String::from("set_location  percent\n");
    for (loc, pct) in dist {
        writeln!(out, "{:<12}  {:>7.2}", loc.token(), pct).unwrap();
    }
    out
}

pub fn distribution_csv(dist: &BTreeMap<SetLocation, f64>) -> String {
    let mut out = String::from("set_location,percent\n");
    for (loc, pct) in dist {
        writeln!(out, "{},{:.2}", loc.token(), pct).unwrap();
    }
    out
}
