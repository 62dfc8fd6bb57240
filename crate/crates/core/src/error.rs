use crate::rational::ParseRationalError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("a possibility space needs at least one outcome")]
    EmptySpace,
    #[error("duplicate outcome label `{0}`")]
    DuplicateOutcome(String),
    #[error("outcome label `{0}` contains the reserved separator `|`")]
    ReservedSeparator(String),
    #[error("unknown outcome `{outcome}` in space `{space}`")]
    UnknownOutcome { space: String, outcome: String },
    #[error("expected {expected} values for space `{space}`, got {got}")]
    LengthMismatch {
        space: String,
        expected: usize,
        got: usize,
    },
    #[error("operands live on different spaces (`{0}` vs `{1}`)")]
    SpaceMismatch(String, String),
    #[error("conditioning event must be non-empty")]
    EmptyEvent,
    #[error("the set of desirable gambles is incoherent")]
    IncoherentCone,
    #[error("the assessment is not Williams-coherent")]
    IncoherentAssessment,
    #[error("the gamble must be non-negative")]
    NegativeGamble,
    #[error("every dominating mass function gives the conditioning event probability zero")]
    ConditioningBeyondSupport,
    #[error("conditional prevision undefined: the conditioning event has probability zero")]
    ZeroProbability,
    #[error("mass function must be non-negative and sum to one")]
    InvalidMassFunction,
    #[error("this query is only defined for cones whose generators are all exact")]
    NeedsExactGenerators,
    #[error("duplicate assessment of the same (gamble, event) pair with different values")]
    ConflictingEntries,
    #[error(
        "gamble is not measurable with respect to the event family (level set at {level} fails)"
    )]
    NotMeasurable { level: String },
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
}

pub type Result<T> = std::result::Result<T, Error>;
