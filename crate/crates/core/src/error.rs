use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("letter {letter} is outside the alphabet of size {size}")]
    AlphabetMismatch { letter: usize, size: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("automaton is not invertible: state {state} does not act as a permutation on letters")]
    NotInvertible { state: usize },
    #[error("level with {points} points exceeds the configured bound of {bound}")]
    SizeBound { points: u128, bound: usize },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator {generator:?} is not finite-state within {cap} states")]
    NotFiniteState { generator: String, cap: usize },
    #[error("state count exceeded the cap of {cap}")]
    Exceeded { cap: usize },
    #[error("no rule of map {map} applies to {word}")]
    OutOfDomain { map: String, word: String },
    #[error("word {0} is not admissible")]
    Inadmissible(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    #[error("invalid digit system: {0}")]
    InvalidDigits(String),
    #[error("spectral radius test is indeterminate after {iterations} squarings")]
    Indeterminate { iterations: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },
    #[error("could not find a sample point away from the poles after {attempts} attempts")]
    Resampling { attempts: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
