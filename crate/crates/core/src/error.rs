use thiserror::Error;

use crate::linalg::IntPolynomial;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NonPrimeModulus(u64),
    #[error("value {value} is not representable in F_{p}")]
    NotRepresentable { value: String, p: u64 },
    #[error("value {0} is not an integer")]
    NotAnInteger(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("composite differential d^{degree}∘d^{prev} is nonzero", prev = .degree - 1)]
    NotAComplex { degree: i64 },
    #[error("inexact polynomial division, remainder {remainder}")]
    InexactDivision { remainder: IntPolynomial },
    #[error("relation has a cycle: {}", .0.join(" <= "))]
    PosetCycle(Vec<String>),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("{x} is not below {y}")]
    NotComparable { x: String, y: String },
    #[error("restriction is not order-convex: {below} <= {middle} <= {above} with {middle} missing")]
    NonConvexRestriction { below: String, middle: String, above: String },
    #[error("rank function is not valid: {0} < {1} violates strict monotonicity")]
    InvalidRank(String, String),
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<String>),
    #[error("the void complex has no cohomology")]
    VoidComplex,
    #[error("hyperplane {0:?} has a zero normal")]
    ZeroNormal(String),
    #[error("hyperplanes {0:?} and {1:?} coincide")]
    RepeatedHyperplane(String, String),
    #[error("the subset {0:?} is not a flat")]
    NotAFlat(Vec<usize>),
    #[error("arrangement is not essential (rank {rank} < dimension {n})")]
    NotEssential { rank: usize, n: usize },
    #[error("rank-one system is not projective: product of weights is {0}")]
    NonProjective(String),
    #[error("weight for {0:?} is zero")]
    ZeroWeight(String),
    #[error("input exceeds supported size: {0}")]
    ScaleLimit(String),
    #[error("Salvetti boundary does not square to zero in degree {0}")]
    SalvettiBoundary(usize),
    #[error("field too small: {0}")]
    FieldTooSmall(String),
    #[error("translated elliptic arrangements are not supported here")]
    TranslatedArrangement,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
