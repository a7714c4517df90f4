use thiserror::Error;

use crate::coeffs::FieldError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("word or polynomial uses letters outside the alphabet")]
    AlphabetMismatch,
    #[error("tensor leg count mismatch: {0} vs {1}")]
    LegMismatch(usize, usize),
    #[error("leg {0} out of range for a tensor with {1} legs")]
    LegOutOfRange(usize, usize),
    #[error("rewriting exceeded the step budget of {0} reductions")]
    StepBudget(usize),
    #[error("degree {requested} is beyond the certified range (complete up to degree {certified})")]
    Uncertified { requested: usize, certified: usize },
    #[error("refused: {0}")]
    Refusal(String),
    #[error("{0}")]
    Semantic(String),
    #[error("{line}:{col}: {kind} error: {msg}")]
    Parse {
        kind: ParseErrorKind,
        line: usize,
        col: usize,
        msg: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    Semantic,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Lexical => "lexical",
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::Semantic => "semantic",
        })
    }
}

impl Error {
    /// Refusals are "cannot certify", as opposed to failures and bad input.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::Uncertified { .. } | Error::Refusal(_) | Error::StepBudget(_)
        )
    }

    pub fn refusal(msg: impl Into<String>) -> Self {
        Error::Refusal(msg.into())
    }
}
