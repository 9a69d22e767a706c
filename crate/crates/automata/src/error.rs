//! Error types shared across the crate.
//!
//! Two layers: [`ParseError`] for anything that goes wrong while reading one
//! of the text formats (always carries a line number), and [`enum@Error`] for
//! domain failures on well-formed values (irreversibility, degree mismatches,
//! guard violations, protocol refusals).

use std::fmt;

use thiserror::Error;

/// Failure while reading one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number of the offending line (last line for EOF errors).
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Two distinct configurations with the same image under the combined map,
/// proving an automaton is not one-to-one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreversibleWitness {
    pub first: (String, String),
    pub second: (String, String),
    pub image: (String, String),
}

impl fmt::Display for IrreversibleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{}) and ({},{}) both map to ({},{})",
            self.first.0, self.first.1, self.second.0, self.second.1, self.image.0, self.image.1
        )
    }
}

/// Domain-level failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("automaton is not reversible: {0}")]
    Irreversible(Box<IrreversibleWitness>),
    #[error("malformed automaton: {0}")]
    MalformedAutomaton(String),
    #[error("unknown state token `{0}`")]
    UnknownState(String),
    #[error("unknown symbol token `{0}`")]
    UnknownSymbol(String),
    #[error("bad configuration `{input}`: {reason}")]
    BadConfiguration { input: String, reason: String },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("length mismatch: vector has {len} labels, permutation degree is {degree}")]
    LengthMismatch { len: usize, degree: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("matrix is not doubly stochastic: {0}")]
    NotDoublyStochastic(String),
    #[error("factorization mismatch: {states} states x {symbols} symbols != degree {degree}")]
    FactorizationMismatch {
        states: usize,
        symbols: usize,
        degree: usize,
    },
    #[error("word is empty")]
    EmptyWord,
    #[error("partition does not cover the universe: {0}")]
    PartitionMismatch(String),
    #[error("propositions {a} and {b} have no unique {bound}: not a lattice")]
    NotALattice { a: String, b: String, bound: String },
    #[error("inner and outer automata do not share a symbol alphabet")]
    AlphabetMismatch,
    #[error("cannot undo {steps} steps: only {performed} were performed")]
    UndoTooDeep { steps: usize, performed: usize },
    #[error("cannot undo step {step}: its record copy still exists; all information about the original measurement must be lost first")]
    UndoWithCopies { step: usize },
    #[error("cannot erase {requested} record entries: only {available} exist")]
    EraseTooMany { requested: usize, available: usize },
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("{0}")]
    BadArgument(String),
}

impl Error {
    pub fn irreversible(witness: IrreversibleWitness) -> Self {
        Error::Irreversible(Box::new(witness))
    }
}
