//! Error type shared across the library.

use thiserror::Error;

/// Errors surfaced by pencil construction, linear algebra, quadrature,
/// path tracking, and the dynamical maps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Matrix determinant fell below the invertibility threshold
    /// (1e-8 times the Hadamard bound).
    #[error("matrix is numerically singular")]
    SingularMatrix,
    /// Adjacent path samples subtend more than pi/2 in argument; the caller
    /// must densify before tracking.
    #[error("path samples too coarse for argument tracking")]
    SampleTooCoarse,
    /// A path sample (or its image under the slice form) is within tolerance
    /// of zero, so the winding number is undefined.
    #[error("path passes through or too near zero")]
    PathHitsZero,
    /// Evaluation point length does not match the pencil arity.
    #[error("pencil arity {expected} but {got} coordinates given")]
    ArityMismatch { expected: usize, got: usize },
    /// Scalar argument outside the operation's domain.
    #[error("argument out of domain: {0}")]
    DomainError(String),
    /// Name does not match any built-in automaton.
    #[error("unknown automaton `{0}`")]
    UnknownAutomaton(String),
    /// Requested tree level exceeds the configured cap.
    #[error("level {level} exceeds cap {cap}")]
    LevelTooLarge { level: u32, cap: u32 },
    /// Slice radicand vanishes; the two solution curves merge at infinity.
    #[error("degenerate slice: radicand vanishes")]
    DegenerateSlice,
    /// A summand of the finite resolvent-trace sum has a pole within
    /// tolerance of the evaluation point.
    #[error("evaluation point is a pole of a summand")]
    PoleAtNode,
    /// The point lies in the joint spectrum, so the resolvent trace diverges.
    #[error("point lies in the joint spectrum")]
    PointInSpectrum,
    /// |4 - mu^2| is below threshold; the renormalization identity degenerates.
    #[error("renormalization pole: 4 - mu^2 too small")]
    RenormalizationPole,
    /// The rational map F has a pole on {mu^2 = 4}.
    #[error("pole of F at mu^2 = 4")]
    PoleAtMuSquaredFour,
    /// Psi is undefined at lambda = 0.
    #[error("psi undefined at lambda = 0")]
    LambdaZero,
}

pub type Result<T> = std::result::Result<T, Error>;
