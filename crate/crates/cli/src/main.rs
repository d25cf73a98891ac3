use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use kaehler_cli::emit::{emit_report, from_json, to_json};
use kaehler_cli::{list_builtins, run_config, Format, RunConfig, RunOptions};

/// Default directory for JSON reports when the config names no output path.
const OUT_DIR_ENV: &str = "KAEHLER_VERIFY_OUT_DIR";

#[derive(Parser)]
#[command(name = "kaehler-verify", version, about = "Numerical checks on submanifolds of complex space forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a config file; exit status 0 iff every record passes.
    Verify {
        config: PathBuf,
        /// Multiply every tolerance by this factor.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        /// Override the sample seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the output format.
        #[arg(long, value_parser = parse_format)]
        format: Option<Format>,
    },
    /// Print ambients, builtin immersions and the check catalog.
    List,
    /// Re-render a JSON report.
    Report {
        json: PathBuf,
        #[arg(long, value_parser = parse_format, default_value = "text")]
        format: Format,
    },
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    match s {
        "text" => Ok(Format::Text),
        "json" => Ok(Format::Json),
        _ => Err(format!("unknown format `{s}` (text|json)")),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::List => {
            print!("{}", list_builtins());
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { json, format } => {
            let text = std::fs::read_to_string(&json).with_context(|| format!("reading {}", json.display()))?;
            let report = from_json(&text).with_context(|| format!("parsing {}", json.display()))?;
            print!("{}", emit_report(&report, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            config,
            tol_scale,
            seed,
            jobs,
            format,
        } => {
            let cfg = RunConfig::load(&config)?;
            let report = run_config(&cfg, RunOptions { seed, tol_scale, jobs })?;
            if let Some(path) = output_path(&cfg, &config) {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                }
                std::fs::write(&path, to_json(&report)).with_context(|| format!("writing {}", path.display()))?;
            }
            print!("{}", emit_report(&report, format.unwrap_or(cfg.output.format)));
            Ok(ExitCode::from(report.exit_code() as u8))
        }
    }
}

/// `output.path` if set, else `$KAEHLER_VERIFY_OUT_DIR/<config stem>.json`.
fn output_path(cfg: &RunConfig, config: &Path) -> Option<PathBuf> {
    if let Some(p) = &cfg.output.path {
        return Some(p.clone());
    }
    let dir = std::env::var_os(OUT_DIR_ENV)?;
    let stem = config.file_stem().map_or_else(|| "report".into(), |s| s.to_os_string());
    let mut name = stem;
    name.push(".json");
    Some(PathBuf::from(dir).join(name))
}
