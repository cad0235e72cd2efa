use thiserror::Error;

use crate::spaces::PositionKey;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coin vector has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("position {pos} is not a member of space `{space}`")]
    InvalidPosition { space: String, pos: PositionKey },

    #[error("space `{space}` has no displacement labelled `{label}`")]
    UnknownDisplacement { space: String, label: String },

    #[error("states or operators live on different spaces (`{left}` vs `{right}`)")]
    SpaceMismatch { left: String, right: String },

    #[error("coordinate overflow while displacing {pos}")]
    Overflow { pos: PositionKey },

    #[error("({k}, {l}) are not coprime (gcd = {gcd})")]
    NotCoprime { k: i64, l: i64, gcd: i64 },

    #[error("invalid modulus {0}; the circle needs at least one vertex")]
    InvalidModulus(i64),

    #[error("matrix is not unitary (max |C^dag C - I| = {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("projection map `{0}` carries no sigma homomorphism")]
    MissingSigma(String),

    #[error("projected state vanishes (norm {norm:e})")]
    NullProjection { norm: f64 },

    #[error("coin differs between equivalent positions {x} and {y}")]
    InhomogeneousCoin { x: PositionKey, y: PositionKey },

    #[error("cannot compose projections: target `{left}` is not source `{right}`")]
    IncompatibleComposition { left: String, right: String },

    #[error("phase grid of {samples} points cannot resolve a sigma window of width {required}")]
    GridTooCoarse { required: usize, samples: usize },

    #[error("phase sample {index} is {found}, expected grid value {expected}")]
    InconsistentGrid {
        index: usize,
        expected: f64,
        found: f64,
    },

    #[error("no sigma window supplied for target position {0}")]
    MissingFiber(i64),

    #[error("projection map `{0}` cannot lift (rho, sigma) coordinates back to the source")]
    NotInvertible(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coin does not leave span{{R, L, U}} invariant (leak {residual:e})")]
    SubspaceNotInvariant { residual: f64 },

    #[error("state has a |D> component of magnitude {magnitude:e} at {pos}")]
    StateOutsideSubspace { pos: PositionKey, magnitude: f64 },

    #[error("malformed state dump: {0}")]
    Format(String),
}
