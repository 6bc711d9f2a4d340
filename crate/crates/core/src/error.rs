use std::fmt;

use thiserror::Error;

/// The equivalence axiom a relation failed, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `(x, x)` is missing.
    Reflexivity(usize),
    /// `(x, y)` is present but `(y, x)` is not.
    Symmetry(usize, usize),
    /// `(x, y)` and `(y, z)` are present but `(x, z)` is not.
    Transitivity(usize, usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Reflexivity(x) => write!(f, "reflexivity fails at ({x},{x})"),
            Violation::Symmetry(x, y) => {
                write!(f, "symmetry fails: ({x},{y}) present, ({y},{x}) absent")
            }
            Violation::Transitivity(x, y, z) => write!(
                f,
                "transitivity fails: ({x},{y}) and ({y},{z}) present, ({x},{z}) absent"
            ),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("not an equivalence relation: {0}")]
    NotEquivalence(Violation),

    #[error("n = {n} exceeds the configured maximum of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("relations do not permute: ({0},{1}) lies in exactly one composition order")]
    NotPermuting(usize, usize),

    #[error("{0} is not a member of the lattice")]
    NotInLattice(String),

    #[error("lattice is not closed: {op} of {left} and {right} is {result}, which is missing")]
    NotClosed {
        op: &'static str,
        left: String,
        right: String,
        result: String,
    },

    #[error("time budget of {seconds}s exhausted after {cases} cases")]
    BudgetExceeded { seconds: f64, cases: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_sizes(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::SizeMismatch { left, right })
    }
}
