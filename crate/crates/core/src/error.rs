use thiserror::Error;

/// Errors surfaced by the geometry engine.
///
/// Construction errors mean the input data is not a valid model; computation
/// errors mean a requested quantity does not exist in the chosen scalar
/// kernel or exceeds a structural limit.
#[derive(Debug, Error)]
pub enum GeomError {
    #[error("structure constants are not antisymmetric in the first two indices at ({i},{j},{k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },

    #[error("field is not unit length: |v|^2 = {norm2}")]
    NotUnitLength { norm2: f64 },

    #[error("field is numerically zero, cannot normalize")]
    ZeroField,

    #[error("tensor rank {rank} exceeds the supported maximum {max}")]
    RankOverflow { rank: usize, max: usize },

    #[error("tensor rank {rank} has no derivative slot left (maximum output rank {max})")]
    DerivativeOverflow { rank: usize, max: usize },

    #[error("{quantity} = {value} has no exact square root in the rational kernel")]
    NotExactlyRepresentable { quantity: &'static str, value: String },

    #[error("chart metric is singular or indefinite at ({x}, {y}, {z})")]
    SingularMetric { x: f64, y: f64, z: f64 },

    #[error("chart model '{name}' declares no frame, frame-level validation unavailable")]
    MissingFrame { name: String },

    #[error("step size must be positive, got {value}")]
    NonpositiveStep { value: f64 },

    #[error("catalog entry '{name}' is unknown")]
    UnknownCatalogEntry { name: String },

    #[error("monodromy matrix {0:?} must have determinant 1 and |trace| > 2")]
    NotAnosov([[i64; 2]; 2]),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
