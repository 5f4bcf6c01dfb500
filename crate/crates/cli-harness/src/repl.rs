//! Interactive evaluator for the truncated-series field.
//!
//! Each input line is parsed and evaluated at the session's truncation
//! window; the reply shows the canonical value, its scale classification,
//! and its standard part. Errors are reported inline and do not end the
//! session; a blank line, `quit`, or end of input does.

use crate::parser::{evaluate, parse, FieldValue};
use num::BigRational;
use std::io::{BufRead, Write};

/// Session settings carried across REPL lines.
#[derive(Debug, Clone, Copy)]
pub struct ReplSession {
    pub truncation: i64,
    pub exact: bool,
}

impl Default for ReplSession {
    fn default() -> Self {
        ReplSession {
            truncation: nonarch_core::DEFAULT_TRUNCATION,
            exact: true,
        }
    }
}

fn evaluate_line(session: &ReplSession, line: &str) -> Result<FieldValue, String> {
    let expr = parse(line).map_err(|e| e.to_string())?;
    if session.exact {
        evaluate::<BigRational>(&expr, session.truncation)
            .map(FieldValue::Exact)
            .map_err(|e| e.to_string())
    } else {
        evaluate::<f64>(&expr, session.truncation)
            .map(FieldValue::Float)
            .map_err(|e| e.to_string())
    }
}

/// Runs the loop until end of input or a quit command. Returns the number
/// of successfully evaluated expressions.
pub fn run<R: BufRead, W: Write>(
    session: ReplSession,
    input: R,
    mut output: W,
) -> std::io::Result<usize> {
    writeln!(
        output,
        "series field evaluator (truncation {}, {} coefficients); 'quit' to exit",
        session.truncation,
        if session.exact { "exact" } else { "float" }
    )?;
    let mut evaluated = 0;
    for line in input.lines() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text == "quit" || text == "exit" {
            break;
        }
        match evaluate_line(&session, text) {
            Ok(value) => {
                writeln!(output, "= {}", value.render())?;
                writeln!(output, "  class: {}", value.classification())?;
                writeln!(output, "  st: {}", value.standard_part())?;
                evaluated += 1;
            }
            Err(message) => {
                writeln!(output, "error: {message}")?;
            }
        }
    }
    Ok(evaluated)
}
