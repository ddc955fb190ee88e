//! Machine-readable run reports.

use std::fmt::Write as _;
use std::path::Path;

use brstq_core::check::{CheckOutcome, ResidualSummary};
use serde::{Deserialize, Serialize};

use crate::config::{ScenarioConfig, Stage};

#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Not run because an earlier check failed, or not applicable.
    Skipped,
    /// Outside the scope of the scenario.
    NotAttempted,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
            Status::NotAttempted => "N/A",
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Residual {
    pub nonzero_coefficients: usize,
    pub max_degree: u32,
}

impl From<ResidualSummary> for Residual {
    fn from(s: ResidualSummary) -> Self {
        Residual { nonzero_coefficients: s.nonzero_coefficients, max_degree: s.max_degree }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub id: String,
    pub stage: Stage,
    /// The identity being checked.
    pub anchor: String,
    pub status: Status,
    pub probes: usize,
    pub residual: Residual,
    /// First offending input with one nonzero residual coefficient.
    pub witness: Option<String>,
    pub note: Option<String>,
    pub wall_time_ms: u64,
}

impl CheckRecord {
    pub fn from_outcome(id: &str, stage: Stage, anchor: &str, o: CheckOutcome, wall_time_ms: u64) -> Self {
        CheckRecord {
            id: id.into(),
            stage,
            anchor: anchor.into(),
            status: if o.passed { Status::Pass } else { Status::Fail },
            probes: o.probes,
            residual: o.residual.into(),
            witness: o.witness.map(abbreviate),
            note: None,
            wall_time_ms,
        }
    }

    pub fn without_run(id: &str, stage: Stage, anchor: &str, status: Status, note: String) -> Self {
        CheckRecord {
            id: id.into(),
            stage,
            anchor: anchor.into(),
            status,
            probes: 0,
            residual: Residual::default(),
            witness: None,
            note: Some(note),
            wall_time_ms: 0,
        }
    }
}

/// Long probe descriptions keep their head and the tail, which names the
/// offending coefficient.
fn abbreviate(w: String) -> String {
    const HEAD: usize = 160;
    const TAIL: usize = 240;
    let chars: Vec<char> = w.chars().collect();
    if chars.len() <= HEAD + TAIL + 16 {
        return w;
    }
    let head: String = chars[..HEAD].iter().collect();
    let tail: String = chars[chars.len() - TAIL..].iter().collect();
    format!("{head} ... [{} characters omitted] ... {tail}", chars.len() - HEAD - TAIL)
}

#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub scenario: String,
    pub engine_version: String,
    pub verdict: Verdict,
    pub config: ScenarioConfig,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Zeroes the timing fields.
    pub fn without_timing(mut self) -> Self {
        for c in &mut self.checks {
            c.wall_time_ms = 0;
        }
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "scenario {} (engine {}): {verdict}", self.scenario, self.engine_version);
        let _ = writeln!(out, "order N = {}, degree bound d = {}", self.config.order, self.config.degree);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<4} {:<28} {:<58} probes={:<5} residual={}/{} {}ms",
                c.status.label(),
                c.id,
                c.anchor,
                c.probes,
                c.residual.nonzero_coefficients,
                c.residual.max_degree,
                c.wall_time_ms
            );
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "       witness: {w}");
            }
            if let Some(n) = &c.note {
                let _ = writeln!(out, "       note: {n}");
            }
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }

    pub fn emit(&self, format: Format, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.render(format))
    }
}
