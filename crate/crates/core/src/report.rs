//! Structured verification reports: an ordered list of named checks with
//! status, residual rendering and provenance anchor.

use std::fmt;
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "fail"),
            CheckStatus::Skipped => write!(f, "skipped"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub id: String,
    pub title: String,
    /// Identity or data source this check certifies; `derived` when the
    /// expected value comes from one of the engine's own oracles.
    pub anchor: String,
    pub status: CheckStatus,
    /// Rendering of the residual: `0` on success, the offending class or a
    /// diagnostic otherwise.
    pub residual: String,
    pub wall: Duration,
}

impl CheckEntry {
    pub fn pass(id: &str, title: &str, anchor: &str) -> Self {
        CheckEntry {
            id: id.to_string(),
            title: title.to_string(),
            anchor: anchor.to_string(),
            status: CheckStatus::Pass,
            residual: "0".to_string(),
            wall: Duration::ZERO,
        }
    }

    pub fn fail(id: &str, title: &str, anchor: &str, residual: String) -> Self {
        CheckEntry {
            id: id.to_string(),
            title: title.to_string(),
            anchor: anchor.to_string(),
            status: CheckStatus::Fail,
            residual,
            wall: Duration::ZERO,
        }
    }

    pub fn skipped(id: &str, title: &str, anchor: &str, reason: String) -> Self {
        CheckEntry {
            id: id.to_string(),
            title: title.to_string(),
            anchor: anchor.to_string(),
            status: CheckStatus::Skipped,
            residual: reason,
            wall: Duration::ZERO,
        }
    }

    pub fn of(id: &str, title: &str, anchor: &str, ok: bool, residual: String) -> Self {
        if ok {
            CheckEntry::pass(id, title, anchor)
        } else {
            CheckEntry::fail(id, title, anchor, residual)
        }
    }

    /// One `key=value` record per line-oriented report body.
    pub fn render_line(&self, with_time: bool) -> String {
        let mut line = format!(
            "id={} status={} title={:?} anchor={:?} residual={:?}",
            self.id, self.status, self.title, self.anchor, self.residual
        );
        if with_time {
            line.push_str(&format!(" time_ms={}", self.wall.as_millis()));
        }
        line
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn new() -> Self {
        VerificationReport { entries: Vec::new() }
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, entries: Vec<CheckEntry>) {
        self.entries.extend(entries);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries
            .iter()
            .filter(|e| e.status == CheckStatus::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn find(&self, id: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}
