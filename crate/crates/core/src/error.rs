use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("character has a negative multiplicity; an effective character is required")]
    NegativeMultiplicity,
    #[error("unsupported root system label `{0}`")]
    UnsupportedLabel(String),
    #[error("Weyl group has more than {0} elements")]
    WeylBoundExceeded(usize),
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("module dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: u64, cap: u64 },
    #[error("invariant form is degenerate")]
    DegenerateForm,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("character is not invariant under the Weyl group")]
    NotWeylInvariant,
    #[error("unsupported invariant extractor `{0}`")]
    UnsupportedExtractor(String),
    #[error("det(1 - a b | n) vanishes; record lies outside the admissible chamber")]
    VanishingDenominator,
    #[error("eigenvalue list is empty")]
    EmptyEigenvalues,
    #[error("Harish-Chandra constant is zero")]
    ZeroConstant,
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("bound too large: {0}")]
    BoundTooLarge(String),
    #[error("Casimir operator is not a scalar matrix")]
    NotScalar,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, LefError>;
