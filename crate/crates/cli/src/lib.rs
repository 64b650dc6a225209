//! Command-line front end: a text grammar for quasi-polynomials and
//! verification commands with deterministic JSON or text reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod parse;

use std::ffi::OsString;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Map, Value};

pub use commands::{run_command, Report};
pub use config::{Cli, Command, Format, Mode, RunConfig, SEED_ENV};
pub use error::CliError;
pub use parse::{parse_quasipoly, parse_quasipoly_list};

pub const SCHEMA: &str = "quasident/1";

/// What the process should print and return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `argv` (program name first), runs the command and renders the
/// report. `env_seed` is the value of `QUASIDENT_SEED`.
pub fn run<I, T>(argv: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Outcome {
                stdout: e.to_string(),
                stderr: String::new(),
                code: error::EXIT_PASS,
            };
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            let err = CliError::Usage(first);
            let doc = json!({ "schema": SCHEMA, "pass": false, "error": err.to_json() });
            return Outcome {
                stdout: format!("{doc}\n"),
                stderr: e.to_string(),
                code: err.exit_code(),
            };
        }
    };
    let name = cli.command.name();
    let cfg = match RunConfig::from_cli(&cli, env_seed) {
        Ok(cfg) => cfg,
        Err(err) => {
            let doc = json!({ "schema": SCHEMA, "command": name, "pass": false, "error": err.to_json() });
            return render_error(&doc, &err, cli.format);
        }
    };
    let start = Instant::now();
    let result = run_command(&cli.command, &cfg);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("command".into(), json!(name));
    doc.insert("config".into(), cfg.to_json());
    if cfg.timings {
        doc.insert("runtime_ms".into(), json!((elapsed_ms * 1e3).round() / 1e3));
    }
    match result {
        Ok(report) => {
            doc.insert("pass".into(), json!(report.pass));
            doc.extend(report.fields);
            let doc = Value::Object(doc);
            Outcome {
                stdout: render(&doc, cfg.format),
                stderr: String::new(),
                code: if report.pass { error::EXIT_PASS } else { error::EXIT_ASSERTION },
            }
        }
        Err(err) => {
            doc.insert("pass".into(), json!(false));
            doc.insert("error".into(), err.to_json());
            render_error(&Value::Object(doc), &err, cfg.format)
        }
    }
}

fn render_error(doc: &Value, err: &CliError, format: Format) -> Outcome {
    Outcome {
        stdout: render(doc, format),
        stderr: format!("error: {err}\n"),
        code: err.exit_code(),
    }
}

/// JSON (keys sorted) or `key: value` lines.
pub fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(doc).expect("serializable")),
        Format::Text => {
            let mut out = String::new();
            if let Value::Object(map) = doc {
                for (k, v) in map {
                    if k == "schema" {
                        continue;
                    }
                    let shown = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("{k}: {shown}\n"));
                }
            }
            out
        }
    }
}
