use thiserror::Error;

use crate::algebra::ParseError;
use crate::group::GroupError;
use crate::rchain::FlatnessReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("operands are over different groups")]
    GroupMismatch,
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("{0}")]
    InvalidInput(String),
    #[error("twists are not flat: {0}")]
    NotFlat(FlatnessReport),
    #[error("CSS condition fails: H_X * H_Z^T has {nonzero} nonzero entries{}", context.as_deref().map(|c| format!(" ({c})")).unwrap_or_default())]
    CssViolation {
        nonzero: usize,
        context: Option<String>,
    },
    #[error("no connection element assigned to nonzero base entry ({row}, {col})")]
    MissingConnection { row: usize, col: usize },
}
