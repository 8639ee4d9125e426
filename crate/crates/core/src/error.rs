use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state angle {0} outside [0, pi/4]")]
    InvalidAngle(f64),

    #[error("measurement strength {0} outside [0, 1]")]
    InvalidStrength(f64),

    #[error("cloning coefficient b = {0} outside [0, 1/2]")]
    CoefficientOutOfRange(f64),

    #[error("outcome probability {p_yes:e} too small to normalize")]
    DegenerateOutcome { p_yes: f64 },

    #[error(
        "intermediate overlap {overlap} < 0 at xi = {xi}, p = {p}: states pushed past orthogonality \
         (p must be at least {threshold})"
    )]
    OrthogonalRegime {
        xi: f64,
        p: f64,
        overlap: f64,
        threshold: f64,
    },

    #[error("trial count must be at least 1")]
    InvalidTrialCount,
}
