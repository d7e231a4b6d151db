use thiserror::Error;

use crate::cnf::{Literal, Var};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("clause contains the complementary pair {0} / {neg}", neg = .0.complement())]
    Tautology(Literal),
    #[error("literal set contains the complementary pair {0} / {neg}", neg = .0.complement())]
    ComplementaryLiterals(Literal),
    #[error("duplicate clause id {0}")]
    DuplicateClauseId(u32),
    #[error("variable {0} does not occur in the formula")]
    UnknownVariable(Var),
    #[error("formula is unsatisfiable")]
    UnsatInput,
    #[error("contradiction derived: the formula is unsatisfiable at the forced level")]
    UnsatDetected,
    #[error("formula is not {0}")]
    ClassViolation(&'static str),
    #[error("variable {var} occurs {count} times, more than the bound {bound}")]
    OccurrenceBound {
        var: Var,
        count: usize,
        bound: usize,
    },
    #[error("witness is not an unsatisfiable subset")]
    NotUnsatWitness,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("improper coloring: edge {0}-{1} joins two vertices of the same color")]
    ImproperColoring(usize, usize),
    #[error(transparent)]
    Dimacs(#[from] crate::dimacs::DimacsError),
}
