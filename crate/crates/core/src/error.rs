use thiserror::Error;

use crate::lattice::Move;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty HP sequence")]
    EmptySequence,

    #[error("invalid residue {found:?} at index {index} (expected 'H' or 'P')")]
    InvalidResidue { index: usize, found: char },

    #[error("line {line}: {source}")]
    SequenceFile {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("illegal move {mv:?} after {moves_played} moves")]
    IllegalMove { mv: Move, moves_played: usize },

    #[error("invalid move letter {0:?}")]
    InvalidMoveLetter(char),

    #[error("softmax choice over an empty move list")]
    EmptyChoice,

    #[error("softmax inputs differ in length ({moves} moves, {gains} gains)")]
    LengthMismatch { moves: usize, gains: usize },

    #[error("cannot aggregate an empty set of run records")]
    NoRecords,

    #[error("sequence of length {len} exceeds the enumeration bound of {max} residues in {dim}D")]
    EnumerationTooLarge { len: usize, max: usize, dim: usize },

    #[error("invalid conformation line {line}: {reason}")]
    Conformation { line: usize, reason: String },

    #[error("unknown benchmark molecule {0} (expected 1..=10)")]
    UnknownMolecule(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
