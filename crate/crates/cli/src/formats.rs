//! CSV tables and JSON reports. Numbers are written in shortest round-trip
//! scientific notation so that files are byte-identical across runs.

use std::io::Write;
use std::path::Path;

use adiabatic_kms::series::{ResummationReport, Verdict};
use adiabatic_kms::spectral::PairingReport;
use adiabatic_kms::Complex64;
use serde::Serialize;

use crate::CliError;

pub fn sci(x: f64) -> String {
    format!("{x:e}")
}

/// An in-memory table, written out as RFC 4180 CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        self.write_to(std::io::BufWriter::new(file))
    }

    /// Aligned plain-text rendering for the terminal.
    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut s = line(self.header.clone());
        s.push('\n');
        for r in &self.rows {
            s.push_str(&line(r.iter().map(String::as_str).collect()));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingJson {
    pub state: String,
    pub value: ComplexJson,
    pub refinement_delta: f64,
    pub nodes: usize,
}

impl PairingJson {
    pub fn new(state: &str, report: &PairingReport) -> Self {
        Self {
            state: state.to_string(),
            value: report.value.into(),
            refinement_delta: report.refinement_delta,
            nodes: report.nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRowJson {
    pub order: usize,
    pub term_value: ComplexJson,
    pub cumulative: ComplexJson,
    pub gap_to_closed_form: f64,
    pub dual_path_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesJson {
    pub verdict: &'static str,
    pub reason: Option<&'static str>,
    pub radius_ratio: f64,
    pub tol: f64,
    pub closed_form: ComplexJson,
    pub rows: Vec<SeriesRowJson>,
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::NotExpectedToConverge => "not_expected_to_converge",
    }
}

pub const RADIUS_REASON: &str =
    "resummation not expected to converge at these parameters: |eps_lambda - eps|/eps >= 1 at some node";

impl From<&ResummationReport> for SeriesJson {
    fn from(r: &ResummationReport) -> Self {
        Self {
            verdict: verdict_name(r.verdict),
            reason: (r.verdict == Verdict::NotExpectedToConverge).then_some(RADIUS_REASON),
            radius_ratio: r.radius_ratio,
            tol: r.tol,
            closed_form: r.closed_form.into(),
            rows: r
                .rows
                .iter()
                .map(|row| SeriesRowJson {
                    order: row.order,
                    term_value: row.term_value.into(),
                    cumulative: row.cumulative.into(),
                    gap_to_closed_form: row.gap_to_closed_form,
                    dual_path_deviation: row.dual_path_deviation,
                })
                .collect(),
        }
    }
}

pub fn series_table(r: &ResummationReport) -> Table {
    let mut t = Table::new(&[
        "order",
        "term_re",
        "term_im",
        "cumulative_re",
        "cumulative_im",
        "gap_to_closed_form",
        "dual_path_deviation",
    ]);
    for row in &r.rows {
        t.push(vec![
            row.order.to_string(),
            sci(row.term_value.re),
            sci(row.term_value.im),
            sci(row.cumulative.re),
            sci(row.cumulative.im),
            sci(row.gap_to_closed_form),
            sci(row.dual_path_deviation),
        ]);
    }
    t
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
