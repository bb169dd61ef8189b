//! Error types shared across the crate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum LaurentError {
    #[error("polynomial parse error: {0}")]
    Parse(String),
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("inexact division")]
    InexactDivision,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SpliceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("structural violation: {0}")]
    Structure(String),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("not a knot diagram: {0} components")]
    NotAKnot(usize),
    #[error("norm {0} admits no genus (degenerate or even)")]
    BadNorm(i64),
    #[error("cohomology class is zero")]
    ZeroClass,
    #[error("class length {got} does not match {want} components")]
    ClassLength { got: usize, want: usize },
    #[error("surplus vanishing factor in the denominator of the vertex product")]
    SurplusZeroDenominator,
    #[error("vertex product does not divide exactly: {0}")]
    MalformedFactorSet(String),
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GroupError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("class vector length {got} does not match abelianization rank {want}")]
    RankMismatch { got: usize, want: usize },
    #[error("declared class basis is not a basis of the free abelianization")]
    BadBasis,
    #[error("inconsistent arc references: {0}")]
    BadCrossing(String),
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TwistedError {
    #[error("representation parse error, line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no image for generator '{0}'")]
    MissingImage(String),
    #[error("character does not vanish on relator {0}")]
    CharacterNotBalanced(usize),
    #[error("no generator with nonzero character to delete")]
    NoAdmissibleColumn,
    #[error("the assignment is not a homomorphism")]
    NotAHomomorphism,
    #[error("{0}")]
    Laurent(#[from] LaurentError),
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SearchError {
    #[error("budget exhausted after {nodes} nodes, {homs} homomorphisms ({partitions_done} of {partitions} partitions complete)")]
    BudgetExhausted {
        nodes: u64,
        homs: u64,
        partitions_done: usize,
        partitions: usize,
    },
    #[error("{0}")]
    Twisted(#[from] TwistedError),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
}
