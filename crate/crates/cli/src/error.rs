use serde_json::{json, Value};
use thiserror::Error;

/// Failure of a command before a report could be produced.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("tr(...) at line {line}, column {column} needs the dimension; pass --n")]
    DimensionRequired { line: usize, column: usize },
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] quasident::Error),
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_COMPUTATION: i32 = 4;

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Syntax { .. } => "syntax_error",
            CliError::DimensionRequired { .. } => "dimension_required",
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Core(quasident::Error::BudgetExceeded { .. }) => "budget_exceeded",
            CliError::Core(_) => "computation",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } | CliError::DimensionRequired { .. } | CliError::Usage(_) | CliError::Io { .. } => {
                EXIT_USAGE
            }
            CliError::Core(quasident::Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(_) => EXIT_COMPUTATION,
        }
    }

    /// Moves a single-line position down by `lines`.
    pub(crate) fn shift_line(self, lines: usize) -> CliError {
        match self {
            CliError::Syntax { line, column, message } => CliError::Syntax {
                line: line + lines,
                column,
                message,
            },
            CliError::DimensionRequired { line, column } => CliError::DimensionRequired {
                line: line + lines,
                column,
            },
            e => e,
        }
    }

    /// The machine-readable `error` object.
    pub fn to_json(&self) -> Value {
        let mut obj = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Syntax { line, column, .. } | CliError::DimensionRequired { line, column } => {
                obj["line"] = json!(line);
                obj["column"] = json!(column);
            }
            CliError::Core(quasident::Error::BudgetExceeded { what, cost, budget }) => {
                obj["what"] = json!(what);
                obj["cost"] = json!(cost.to_string());
                obj["budget"] = json!(budget.to_string());
            }
            _ => {}
        }
        obj
    }
}
