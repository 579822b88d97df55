use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("F_{0} is not a supported prime field (need a prime in 2..=97)")]
    InvalidField(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),

    #[error("permutation closure exceeded {0} elements")]
    ClosureBoundExceeded(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group validation failed: {0}")]
    ValidationFailure(String),

    #[error("action matrices violate a group relation at element {0}")]
    RelationViolation(usize),
    #[error("action matrix for generator {0} is singular")]
    SingularMatrix(usize),
    #[error("module kind unavailable: {0}")]
    KindUnavailable(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),

    #[error("differentials compose to nonzero at degree {degree}")]
    SquareNonzero { degree: i32 },
    #[error("complex leaves the degree window [{lo}, {hi}]")]
    WindowExceeded { lo: i32, hi: i32 },

    #[error("resolution did not reach a member within {cap} steps")]
    NotFinite { cap: usize },
    #[error("object dimension budget exceeded: {used} > {budget}")]
    DimensionBudgetExceeded { used: usize, budget: usize },
    #[error("ladder filler not well defined at step {step}")]
    WellDefinednessFailure { step: usize },
    #[error("conflation flags all set but cone of the comparison map is not stably zero")]
    ConditionalViolated,
    #[error("composite of consecutive chain maps is nonzero at step {step}")]
    CompositeNonzero { step: usize },
    #[error("precover factorization failed at step {step}")]
    FactorizationFailure { step: usize },

    #[error("brute-force search space {size} exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
