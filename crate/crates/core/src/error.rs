use thiserror::Error;

/// Errors raised by scenario construction and the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate measurement label `{0}`")]
    DuplicateMeasurement(String),
    #[error("measurement `{0}` has an empty outcome domain")]
    EmptyOutcomeDomain(String),
    #[error("duplicate outcome `{outcome}` for measurement `{measurement}`")]
    DuplicateOutcome {
        measurement: String,
        outcome: String,
    },
    #[error("unknown measurement `{0}`")]
    UnknownMeasurement(String),
    #[error("unknown outcome `{outcome}` for measurement `{measurement}`")]
    UnknownOutcome {
        measurement: String,
        outcome: String,
    },
    #[error("measurement index {0} out of range")]
    MeasurementIndex(usize),
    #[error("context {0} is empty")]
    EmptyContext(usize),
    #[error("context {0} is listed more than once")]
    DuplicateContext(usize),
    #[error("measurement `{0}` repeated inside a context")]
    RepeatedInContext(String),
    #[error("measurement `{0}` does not appear in any context")]
    UncoveredMeasurement(String),
    #[error("the cover is empty")]
    EmptyCover,
    #[error("context index {0} is not part of the cover")]
    UnknownContext(usize),
    #[error("{0} is not a subset of {1}")]
    NotSubset(String, String),
    #[error("section does not match context {0}")]
    SectionMismatch(String),
    #[error("distribution over {context} is not normalised: total weight {total}")]
    NotNormalised { context: String, total: String },
    #[error("negative weight {weight} in a nonnegative distribution over {context}")]
    NegativeWeight { context: String, weight: String },
    #[error("expected one table per context: {expected} contexts, {found} tables")]
    TableCount { expected: usize, found: usize },
    #[error("table {0} is not over the context it is paired with")]
    TableContext(usize),
    #[error("state space of {size} global assignments exceeds the bound {bound}")]
    BoundExceeded { size: String, bound: u64 },
    #[error(
        "model is not compatible (signalling): contexts {first} and {second} disagree on {section}"
    )]
    IncompatibleModel {
        first: usize,
        second: usize,
        section: String,
    },
    #[error("the formula family is jointly satisfiable, witness {0}")]
    SatisfiableFamily(String),
    #[error("formula refers to measurement `{measurement}` outside its context {context}")]
    FormulaOutsideContext { measurement: String, context: usize },
    #[error("formula parse error: {0}")]
    FormulaParse(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("vector is not normalised: norm {0}")]
    NotUnitVector(f64),
    #[error("angle must be finite")]
    NonFiniteAngle,
    #[error("invalid quantum measurement layout: {0}")]
    QuantumLayout(String),
    #[error("row normalisation repair of {0:e} exceeds tolerance")]
    NormalisationRepair(f64),
    #[error("measurement `{0}` does not have the binary outcome domain {{0, 1}}")]
    NonBinaryDomain(String),
    #[error("no vector given for measurement `{0}`")]
    MissingVector(String),
    #[error("the cover is cyclic (GYO reduction stalls)")]
    CyclicCover,
    #[error("relation {0} is empty")]
    EmptyRelation(usize),
    #[error("relation {0} does not match its schema element")]
    RelationSchema(usize),
    #[error("invalid rational literal `{0}`")]
    RationalLiteral(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
