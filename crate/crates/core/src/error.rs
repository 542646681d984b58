use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("state dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },

    #[error("vector is not normalized: norm {norm}")]
    Normalization { norm: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("basis vectors {i} and {j} are not orthogonal: |<b{i},b{j}>| = {overlap}")]
    Orthogonality { i: usize, j: usize, overlap: f64 },

    #[error("invalid basis labels: {0}")]
    Label(String),

    #[error("preference profile of player {player} is not a partition of the basis: {reason}")]
    Partition { player: usize, reason: String },

    #[error("invalid weights: {0}")]
    Weight(String),

    #[error("invalid play: {0}")]
    InvalidPlay(String),

    #[error("basis index {index} out of range for dimension {dim}")]
    InvalidBasisIndex { index: usize, dim: usize },

    #[error("matrix for player {player} strategy {strategy:?} is not unitary (max |U†U - I| = {deviation:e})")]
    NotUnitary {
        player: usize,
        strategy: String,
        deviation: f64,
    },

    #[error("invalid game: {0}")]
    Game(String),

    #[error("image state of play {play:?} is not a basis element")]
    NotBasisValued { play: Vec<usize> },

    #[error("operation requires a {expected} certificate")]
    CriterionMismatch { expected: &'static str },

    #[error("no Nash equilibrium exists under the {criterion} criterion")]
    NoEquilibrium { criterion: String },
}

pub type Result<T> = std::result::Result<T, Error>;
