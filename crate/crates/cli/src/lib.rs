//! A small language for building compact automatic sets and asking questions
//! about them.
//!
//! ```text
//! workbench eval  "union(cantor, affine(cantor,[1],1,1))" --out set.sda
//! workbench query "verdict(load(\"set.sda\"))"
//! ```

pub mod eval;
pub mod parse;
pub mod query;
pub mod syntax;

use compact_automata::automaton::write_text;
use compact_automata::{Error, Limits};

pub use eval::{eval, shape, EvalError, Shape, TypeError};
pub use parse::{parse_expr, parse_query, ParseError};
pub use query::{run, Options, Report};
pub use syntax::{EsDesc, Expr, Query};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 when a state cap stopped a construction, 1 for every other diagnostic.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Eval(EvalError {
                source: Error::StateCap { .. },
                ..
            }) => 2,
            _ => 1,
        }
    }
}

/// Parses, checks and evaluates an expression, returning the automaton in the
/// text format.
pub fn eval_text(src: &str, limits: &Limits) -> Result<(Shape, String), CliError> {
    let e = parse_expr(src)?;
    let sh = shape(&e)?;
    let a = eval(&e, limits)?;
    Ok((sh, write_text(&a)))
}

pub fn query_text(src: &str, opts: &Options) -> Result<Report, CliError> {
    let q = parse_query(src)?;
    run(src, &q, opts)
}
