//! Report rendering: line-oriented records on stdout and an optional
//! machine-readable aggregate file.

use serde_json::json;
use tautring::report::VerificationReport;

pub fn render_lines(report: &VerificationReport, with_time: bool) -> String {
    let mut out = String::new();
    for entry in &report.entries {
        out.push_str(&entry.render_line(with_time));
        out.push('\n');
    }
    let fails = report.entries.iter().filter(|e| e.status.to_string() == "fail").count();
    let skips = report
        .entries
        .iter()
        .filter(|e| e.status.to_string() == "skipped")
        .count();
    out.push_str(&format!(
        "summary entries={} failures={} skipped={}\n",
        report.entries.len(),
        fails,
        skips
    ));
    out
}

pub fn to_json(report: &VerificationReport) -> serde_json::Value {
    json!({
        "entries": report
            .entries
            .iter()
            .map(|e| {
                json!({
                    "id": e.id,
                    "title": e.title,
                    "anchor": e.anchor,
                    "status": e.status.to_string(),
                    "residual": e.residual,
                    "time_ms": e.wall.as_millis() as u64,
                })
            })
            .collect::<Vec<_>>(),
        "all_passed": report.all_passed(),
    })
}
