use thiserror::Error;

/// Errors produced by the amoeba toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed polynomial: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("operation requires a polynomial with at least two terms")]
    Monomial,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty magnitude list")]
    EmptyList,

    #[error("phase {index} has modulus {modulus}, expected 1")]
    NonUnitPhase { index: usize, modulus: f64 },

    #[error("resultant budget exceeded at n = {n}: about {predicted} terms predicted, cap is {cap}")]
    BudgetExceeded { n: u64, predicted: f64, cap: f64 },

    #[error("precision exhausted: coefficient at {exponent:?} is {log2_ratio:.1} bits above its noise floor but should vanish")]
    PrecisionExhausted { exponent: Vec<i64>, log2_ratio: f64 },

    #[error("no n <= {cap} satisfies the bound inequality")]
    BoundCapExceeded { cap: u64 },

    #[error("lattice enumeration of {points} points exceeds the limit and the box fallback is disabled")]
    EnumerationOverflow { points: f64 },

    #[error("root finder did not converge for a degree {degree} polynomial")]
    RootFinding { degree: usize },

    #[error("point is too close to the amoeba: a root has modulus ratio {ratio} against the circle")]
    TooCloseToAmoeba { ratio: f64 },

    #[error("slice in variable {variable} is identically zero")]
    ZeroSlice { variable: usize },

    #[error("component index disagrees across random fibres: {first:?} vs {second:?}")]
    InconsistentIndex { first: Vec<i64>, second: Vec<i64> },

    #[error("Res_n[f] has no term at candidate exponent {0:?}")]
    NoCandidateTerm(Vec<i64>),

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("no feasible complement component at this n; the spine is undefined")]
    NoFeasibleComponents,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
