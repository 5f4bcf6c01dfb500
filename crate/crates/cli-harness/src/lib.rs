//! Batch experiment runner, expression front end, and interactive
//! evaluator for the asymptotic toolkit.
//!
//! The library side carries everything the `asymptotica` binary does so it
//! stays testable in-process: configuration loading with CLI > file >
//! defaults precedence, the expression grammar over the truncated-series
//! field, the per-experiment dispatch that writes JSON summaries and CSV
//! series, and the read-eval-print loop.

pub mod config;
pub mod parser;
pub mod repl;
pub mod runner;

pub use config::{CliOverrides, ConfigError, ExperimentConfig, ExperimentId, PanelSpec, Tolerances};
pub use parser::{evaluate, parse, render, BinOp, EvalError, FieldExpr, FieldValue, Func, ParseError};
pub use repl::ReplSession;
pub use runner::{run_experiment, RunError, RunOutcome};
