//! Result records and their JSON/CSV rendering.

use std::io::Write;

use gwloc_core::{fmt_decimal, fmt_q, InvariantKind, Route, Q};
use serde::Serialize;

use crate::args::Format;
use crate::config::RunConfig;

/// One named pass/fail outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// A table row that can be written as CSV.
pub trait CsvRow {
    fn header(decimal: bool) -> Vec<&'static str>;
    fn record(&self) -> Vec<String>;
}

/// One computed value with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct ValueRow {
    pub d: u32,
    pub kind: InvariantKind,
    pub value: String,
    pub route: Route,
    pub seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
}

impl ValueRow {
    pub fn new(
        d: u32,
        kind: InvariantKind,
        value: &Q,
        route: Route,
        seeds: Vec<u64>,
        digits: Option<usize>,
    ) -> Self {
        ValueRow {
            d,
            kind,
            value: fmt_q(value),
            route,
            seeds,
            decimal: digits.map(|k| fmt_decimal(value, k)),
        }
    }
}

impl CsvRow for ValueRow {
    fn header(decimal: bool) -> Vec<&'static str> {
        let mut h = vec!["d", "kind", "value", "route", "seeds"];
        if decimal {
            h.push("decimal");
        }
        h
    }

    fn record(&self) -> Vec<String> {
        let seeds = self
            .seeds
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(";");
        let mut r = vec![
            self.d.to_string(),
            self.kind.name().into(),
            self.value.clone(),
            self.route.name().into(),
            seeds,
        ];
        if let Some(x) = &self.decimal {
            r.push(x.clone());
        }
        r
    }
}

/// One genus-one intersection number or generating-function value.
#[derive(Clone, Debug, Serialize)]
pub struct HodgeRow {
    pub r: usize,
    pub exponents: Vec<u32>,
    pub value: String,
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
}

impl CsvRow for HodgeRow {
    fn header(decimal: bool) -> Vec<&'static str> {
        let mut h = vec!["r", "exponents", "value", "source"];
        if decimal {
            h.push("decimal");
        }
        h
    }

    fn record(&self) -> Vec<String> {
        let e = self
            .exponents
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        let mut r = vec![
            self.r.to_string(),
            e,
            self.value.clone(),
            self.source.into(),
        ];
        if let Some(x) = &self.decimal {
            r.push(x.clone());
        }
        r
    }
}

/// `{config, rows, checks}`.
#[derive(Debug, Serialize)]
pub struct Report<R> {
    pub config: RunConfig,
    pub rows: Vec<R>,
    pub checks: Vec<Check>,
}

impl<R: Serialize + CsvRow> Report<R> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Render in the configured format. CSV holds the rows, or the checks
    /// when the command produces no rows.
    pub fn render(&self) -> anyhow::Result<Vec<u8>> {
        match self.config.format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(self)?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if self.rows.is_empty() {
                    w.write_record(["name", "pass", "detail"])?;
                    for c in &self.checks {
                        w.write_record([
                            c.name.as_str(),
                            if c.pass { "true" } else { "false" },
                            c.detail.as_str(),
                        ])?;
                    }
                } else {
                    w.write_record(R::header(self.config.decimal.is_some()))?;
                    for r in &self.rows {
                        w.write_record(r.record())?;
                    }
                }
                Ok(w.into_inner()?)
            }
        }
    }

    /// Write the rendered report and a PASS/FAIL line per check on stderr.
    pub fn emit(&self) -> anyhow::Result<()> {
        let bytes = self.render()?;
        match &self.config.output {
            Some(path) => std::fs::write(path, bytes)?,
            None => std::io::stdout().lock().write_all(&bytes)?,
        }
        let mut err = std::io::stderr().lock();
        for c in &self.checks {
            writeln!(
                err,
                "{} {}: {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}
