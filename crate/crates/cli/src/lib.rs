//! Config-driven batch verification of the `kaehler-core` checks.
//!
//! A run reads a TOML config, samples points on the chart (or the ambient
//! ball), evaluates every requested check at every point on a worker pool and
//! emits a schema-stable report. Records are sorted by check and then point
//! index, so a fixed config and seed give byte-identical JSON apart from
//! `generated_at`.

pub mod catalog;
pub mod config;
pub mod emit;
pub mod error;
pub mod run;

pub use config::{Format, RunConfig};
pub use error::{ConfigError, ConfigResult};
pub use run::{run_config, Record, RunOptions, RunReport, Summary};

use std::fmt::Write as _;

use kaehler_core::submanifold::BUILTINS;
use kaehler_core::AmbientKind;

/// Ambient kinds, builtin fixtures with their parameters, and the check catalog.
pub fn list_builtins() -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ambients (kind, m >= 2):");
    for k in AmbientKind::ALL {
        let _ = writeln!(out, "  {}", k.name());
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "builtin immersions:");
    for b in BUILTINS {
        let params = if b.params.is_empty() {
            "-".to_string()
        } else {
            b.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
        };
        let _ = writeln!(out, "  {:<8} params: {:<12} {}", b.name, params, b.summary);
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "checks:");
    for c in catalog::CATALOG {
        let tol = if c.default_tol > 0.0 {
            format!("{:.0e}", c.default_tol)
        } else {
            "-".to_string()
        };
        let _ = writeln!(out, "  {:<22} {:<12} tol {:<7} {}", c.name, c.scope.label(), tol, c.summary);
    }
    out
}
