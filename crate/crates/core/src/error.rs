use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("player count {n} outside supported range {min}..={max}")]
    PlayerCount { n: usize, min: usize, max: usize },
    #[error("operation requires at least {required} players, got {n}")]
    PlayerCountTooSmall { n: usize, required: usize },
    #[error("coalition must be nonempty")]
    EmptyCoalition,
    #[error("coalition {0} is not a subset of the player set")]
    CoalitionOutOfRange(String),
    #[error("coalition must be a proper subset of the grand coalition")]
    NotProperSubset,
    #[error("coalition must contain at least two players, got {size}")]
    CoalitionTooSmall { size: usize },
    #[error("player {player} out of range for {n} players")]
    PlayerOutOfRange { player: usize, n: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("games have different player counts ({expected} vs {found})")]
    MixedPlayerCount { expected: usize, found: usize },
    #[error("worth table has {found} entries, expected {expected}")]
    WorthTableLength { expected: usize, found: usize },
    #[error("worth of the empty coalition must be zero")]
    NonZeroEmptySet,
    #[error("non-finite worth or payoff")]
    NonFinite,
    #[error("size {s} out of range 1..={n}")]
    SizeOutOfRange { s: usize, n: usize },
    #[error("weight vector has length {found}, expected {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("affine weights sum to {sum}, not 1")]
    WeightsNotAffine { sum: String },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("rule {rule} is not linear: {detail}")]
    NotLinear { rule: String, detail: String },
    #[error("coefficients are not sigma-representable: {0}")]
    NotSigmaRepresentable(String),
    #[error("least-square objective is degenerate: {0}")]
    DegenerateObjective(String),
    #[error("rule {rule} is undefined on this game: {reason}")]
    DomainGuardFailed { rule: String, reason: String },
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("unknown axiom {0:?}")]
    UnknownAxiom(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("missing worth for coalition {0}")]
    MissingCoalition(String),
    #[error("duplicate coalition key {0}")]
    DuplicateKey(String),
    #[error("invalid game file: {0}")]
    InvalidGameFile(String),
    #[error("invalid sampling plan: {0}")]
    InvalidPlan(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
