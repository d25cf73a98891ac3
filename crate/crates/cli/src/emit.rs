//! Report rendering.

use std::fmt::Write as _;

use crate::config::Format;
use crate::run::RunReport;

pub fn emit_report(r: &RunReport, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Text => to_text(r),
    }
}

pub fn to_json(r: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports contain only finite numbers");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<RunReport> {
    serde_json::from_str(text)
}

/// JSON with the timestamp blanked, for determinism comparisons.
pub fn canonical_json(r: &RunReport) -> String {
    let mut c = r.clone();
    c.generated_at.clear();
    to_json(&c)
}

pub fn to_text(r: &RunReport) -> String {
    let mut out = String::new();
    let cfg = &r.config;
    let imm = cfg.immersion.as_ref().map_or_else(
        || "-".to_string(),
        |i| i.builtin.clone().unwrap_or_else(|| format!("expr({})", i.components.join(", "))),
    );
    let _ = writeln!(
        out,
        "ambient {} m={}  immersion {}  seed {}  tol-scale {}",
        cfg.ambient.kind, cfg.ambient.m, imm, r.seed, r.tol_scale
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<24} {:>7} {:>7} {:>7} {:>13}", "check", "records", "passed", "failed", "worst resid");
    let _ = writeln!(out, "{}", "-".repeat(62));
    for (check, worst) in &r.summary.worst_residual {
        let recs: Vec<_> = r.records.iter().filter(|x| &x.check == check).collect();
        let passed = recs.iter().filter(|x| x.pass).count();
        let _ = writeln!(
            out,
            "{:<24} {:>7} {:>7} {:>7} {:>13.3e}",
            check,
            recs.len(),
            passed,
            recs.len() - passed,
            worst
        );
    }
    let _ = writeln!(out, "{}", "-".repeat(62));
    let s = &r.summary;
    let _ = writeln!(out, "total {}  passed {}  failed {}", s.total, s.passed, s.failed);

    let failures: Vec<_> = r.records.iter().filter(|x| !x.pass).collect();
    if !failures.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "failures:");
        for f in failures {
            let at = f.point_index.map_or_else(|| "sample".to_string(), |i| format!("point {i}"));
            let _ = writeln!(out, "  {} @ {} {:?}", f.check, at, f.point);
            if let Some(e) = &f.error {
                let _ = writeln!(out, "    error: {e}");
            }
            for e in f.entries.iter().filter(|e| !e.pass) {
                let tol = e.tolerance.map_or_else(|| "-".to_string(), |t| format!("{t:.1e}"));
                let _ = writeln!(out, "    {:<28} {:>13.6e}  tol {}", e.label, e.value, tol);
            }
            for n in &f.notes {
                let _ = writeln!(out, "    note: {n}");
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{} record(s) failed; exit status {}", s.failed, r.exit_code());
    }
    out
}
