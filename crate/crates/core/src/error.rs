use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rotation axis is not a unit vector (|u| = {norm})")]
    NonUnitAxis { norm: f64 },

    #[error("rotation angle {0} is outside the open interval (0, 2π)")]
    AngleOutOfRange(f64),

    #[error("matrix is not a proper rotation (orthogonality defect {defect:.3e}, det {det})")]
    NotARotation { defect: f64, det: f64 },

    #[error("half-dimensions must be positive and finite, got {0:?}")]
    InvalidDims([f64; 3]),

    #[error("parallelepiped map is singular (det = {0:e})")]
    SingularMap(f64),

    #[error("parallelepiped map reverses orientation (det = {0}); relabel the vertices so that det > 0")]
    NegativeOrientation(f64),

    #[error("the map is not diagonal; this operation is only defined for rectangular boxes")]
    NotDiagonal,

    #[error("axis indices must be distinct values in 1..=3, got {0:?}")]
    InvalidAxes(Vec<usize>),

    #[error("intermediate-kind motions do not exist for a half turn")]
    HalfTurnExcluded,

    #[error("axis coefficients must not both vanish")]
    ZeroAxis,

    #[error("third-kind axis infeasible at s = {s}: {reason}")]
    ThirdKindInfeasible { s: f64, reason: String },

    #[error("condition d_k = d_i d_j/√(d_i²+d_j²) not satisfied for k = {k}")]
    SixthKindCondition { k: usize },

    #[error("expected a {expected} translation set, found {found}")]
    UnexpectedSolution { expected: &'static str, found: String },

    #[error("value {0} outside the domain (1/3, 1]")]
    OutsideInverseDomain(f64),

    #[error("pyramid with n = {n} and edge ratio {ratio} does not exist (ratio must exceed {min})")]
    DegeneratePyramid { n: usize, ratio: f64, min: f64 },

    #[error("configuration violates its constraints (max violation {0:e})")]
    ConstraintViolation(f64),

    #[error("configuration has {found} coordinates, structure needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("reference volume for pairing {0} vanishes")]
    DegenerateReference(usize),

    #[error("{0}")]
    Invalid(String),
}
