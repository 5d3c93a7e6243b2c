//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, validation, sampling, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Two source points of a point-pair construction coincide.
    #[error("coincident source points")]
    CoincidentSourcePoints,

    /// An operation requiring a contraction received a map with ratio >= 1.
    #[error("not a contraction (ratio {ratio})")]
    NotContraction { ratio: f64 },

    /// A matrix failed the similarity condition A^T A = r^2 I.
    #[error("matrix is not a similarity (deviation {defect:.3e} from r^2 I)")]
    NotSimilarity { defect: f64 },

    /// Mismatched lengths between a partition, signature, or related vectors.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    /// A partition violates `0 = x_0 < x_1 < ... < x_m = 1`.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// A signature contains a value other than 0 or 1, or is empty.
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    /// A zipper map would need ratio >= 1 to satisfy its endpoint constraints.
    #[error("map {index} not contracting (endpoint span ratio {ratio})")]
    NonContractingMap { index: usize, ratio: f64 },

    /// A zipper map's endpoint images coincide, collapsing the map.
    #[error("degenerate map {index}: endpoint images coincide")]
    DegenerateMap { index: usize },

    /// An enumeration would exceed the configured point budget.
    #[error("depth budget exceeded: {needed} points over budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },

    /// An operation requiring points received an empty cloud.
    #[error("empty point cloud")]
    EmptyCloud,

    /// A curve parameter lies outside [0, 1].
    #[error("parameter {t} outside [0, 1]")]
    ParameterOutOfRange { t: f64 },

    /// A catalog lookup used an unknown name.
    #[error("unknown example '{name}'; valid names: {valid}")]
    UnknownExample { name: String, valid: String },

    /// Orientation search has too many maps for exhaustive search.
    #[error("orientation search supports at most {limit} maps (got {got})")]
    OrientationSearchTooLarge { got: usize, limit: usize },

    /// No orientation assignment reproduced the reference attractor.
    #[error("no orientation choice matches reference (best distance {best:.6})")]
    NoOrientationMatch { best: f64 },

    /// A disk removal deleted every node of a cell graph.
    #[error("removal swallowed graph")]
    RemovalSwallowedGraph,

    /// A rendering call received no geometry.
    #[error("nothing to render")]
    NothingToRender,

    /// Malformed structured data (CSV rows, address strings, and the like).
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A configuration file failed validation.
    #[error("config error: {0}")]
    Config(String),

    /// Malformed JSON in a configuration file.
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
