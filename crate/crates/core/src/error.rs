use alloc::string::String;

/// Errors produced by the perturbation and classification primitives.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("article body is empty")]
    EmptyBody,
    #[error("insertion sentence is empty")]
    EmptySentence,
    #[error("unit index {index} out of range for {units} units")]
    UnitIndexOutOfRange { index: usize, units: usize },
    #[error("seed unit {index} is the last unit; nothing follows to replace")]
    SeedAtEnd { index: usize },
    #[error("table shape mismatch: {left_rows}x{left_dims} vs {right_rows}x{right_dims}")]
    ShapeMismatch {
        left_rows: usize,
        left_dims: usize,
        right_rows: usize,
        right_dims: usize,
    },
    #[error("table data length {len} does not match {rows}x{dims}")]
    TableSize { rows: usize, dims: usize, len: usize },
    #[error("non-finite table value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("table has {rows} rows but vocabulary has {vocab} tokens")]
    TableVocabMismatch { rows: usize, vocab: usize },
    #[error("duplicate token {token:?}")]
    DuplicateToken { token: String },
    #[error("empty token at id {id}")]
    EmptyToken { id: usize },
    #[error("special id {id} out of range for vocabulary of size {size}")]
    SpecialIdOutOfRange { id: u32, size: usize },
    #[error("similarity threshold {value} outside [-1, 1]")]
    ThresholdOutOfRange { value: f64 },
    #[error("subjectivity weight {weight} for {term:?} outside [0, 1]")]
    WeightOutOfRange { term: String, weight: f64 },
    #[error("replacement maps token {id} to itself")]
    SelfReplacement { id: u32 },
    #[error("replacement destination {id} outside vocabulary of size {size}")]
    PlanDestinationOutOfRange { id: u32, size: usize },
    #[error("spectrum step {step} does not increase on previous step {prev}")]
    NonMonotonicStep { step: usize, prev: usize },
    #[error("perturbation fraction {fraction} outside [0, 1] or below previous {prev}")]
    InvalidFraction { fraction: f64, prev: f64 },
    #[error("probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },
    #[error("class probabilities {p_machine} + {p_human} do not sum to 1")]
    InconsistentVerdict { p_machine: f64, p_human: f64 },
    #[error("curve step {step} does not increase on previous step {prev}")]
    NonMonotonicCurve { step: usize, prev: usize },
}
