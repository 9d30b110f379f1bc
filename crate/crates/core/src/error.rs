use thiserror::Error;

use crate::numerics::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("square root of negative value {0}")]
    NegativeInput(Rational),
    #[error("enclosure width must be positive, got {0}")]
    InvalidWidth(Rational),
    #[error("division by zero or by an interval containing zero")]
    ZeroDenominator,
    #[error("level {level} needs {needed} points, above the cap of {cap}")]
    DepthTooLarge { level: u32, needed: u128, cap: u128 },
    #[error("{0} lies outside [0, 1]")]
    OutOfDomain(Rational),
    #[error("difference quotient needs distinct points, both are {0}")]
    CoincidentPoints(Rational),
    #[error("branch images overlap or are out of order near abscissa {0}")]
    InvalidIfs(Rational),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dilation factor must be positive, got {0}")]
    NonPositiveLambda(Rational),
    #[error("point is not in the subgroup W (x = 0, r = 0)")]
    NotInW,
    #[error("point is not on the intrinsic graph (x must vanish)")]
    NotGraphPoints,
    #[error(
        "target {target} is not bracketed by the quotient enclosures at the bracket endpoints"
    )]
    NotBracketed { target: Rational },
    #[error("could not certify tolerance {tol} within the depth budget")]
    TolTooTight { tol: Rational },
    #[error("no sample point is certified to lie in the ball of radius {0}")]
    EmptyAfterRestriction(Rational),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
