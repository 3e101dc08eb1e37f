//! The report a command emits, and its JSON and CSV renderings.

use std::fs;
use std::io::Write;
use std::path::Path;

use haarlab_core::report::{CheckReport, Summary};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Format;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: Value,
    pub summary: Summary,
    /// Command-specific headline values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn new(command: String, seed: u64, config: Value, result: Option<Value>, checks: Vec<CheckReport>) -> Report {
        let mut summary = Summary::default();
        for c in &checks {
            summary.absorb(&c.summary());
        }
        Report { command, version: env!("CARGO_PKG_VERSION").into(), seed, config, summary, result, checks }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn case_count(&self) -> usize {
        self.checks.iter().map(|c| c.records.len()).sum()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per record.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "case", "label", "verdict", "residual", "inputs", "values", "note"])
            .expect("in-memory write");
        for c in &self.checks {
            for r in &c.records {
                let inputs = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join("; ");
                let values = r
                    .values
                    .iter()
                    .map(|q| match (&q.exact, &q.lo, &q.hi) {
                        (Some(x), _, _) => format!("{}={x}", q.name),
                        (None, Some(lo), Some(hi)) => format!("{}=[{lo}, {hi}]", q.name),
                        _ => format!("{}~{}", q.name, q.decimal),
                    })
                    .collect::<Vec<_>>()
                    .join("; ");
                let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
                w.write_record([
                    c.check.as_str(),
                    &r.case.to_string(),
                    &r.label,
                    verdict.as_str().unwrap_or_default(),
                    &r.residual.as_ref().map(|x| x.to_string()).unwrap_or_default(),
                    &inputs,
                    &values,
                    r.note.as_deref().unwrap_or_default(),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 fields")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    /// Writes to `out`, or stdout when absent.
    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), CliError> {
        let text = self.render(format);
        match out {
            Some(p) => fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Output(format!("stdout: {e}"))),
        }
    }
}
