use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The evaluation point lies inside the exclusion ball of a site.
    #[error("point lies within the exclusion radius of site {site}")]
    SingularPoint { site: usize },
    #[error("bodies {0} and {1} coincide")]
    CoincidentBodies(usize, usize),
    #[error("exponent {0} is odd but an even exponent is required")]
    OddExponent(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A configuration invariant does not hold; the message names it.
    #[error("validation failed: {0}")]
    Validation(String),
    /// More isolated critical points than the bound allows. Always a bug.
    #[error("found {count} isolated critical points but the bound is {bound}")]
    BoundViolation { count: usize, bound: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
