//! Crate-wide error type.

use std::fmt;

/// Errors produced by the numerical operators in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the inputs was violated.
    Domain(String),
    /// An adaptive quadrature could not reach the requested tolerance.
    Tolerance { requested: f64, achieved: f64 },
    /// A closed-form expression was evaluated on the cusp line `x1 = 0`
    /// where a gamma derivative is not finite (`alpha < 1`).
    NonFiniteAtCusp { order: u8 },
    /// Fewer than three usable samples for a power-law fit.
    DegenerateFit { usable: usize },
    /// Two independent evaluations of the same functional disagree.
    CrossCheck { direct: f64, by_parts: f64, rel_err: f64, tol: f64 },
    /// The ball family for a BMO seminorm is empty.
    EmptyBallFamily,
    /// An operation that needs a non-constant grid function got a constant.
    DegenerateInput(String),
    /// The ODE step size collapsed before reaching either terminus.
    StepUnderflow { t: f64, h: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Tolerance { requested, achieved } => write!(
                f,
                "quadrature tolerance not reached: requested {requested:.3e}, achieved {achieved:.3e}"
            ),
            Error::NonFiniteAtCusp { order } => write!(
                f,
                "gamma derivative of order {order} is not finite on the cusp line x1 = 0"
            ),
            Error::DegenerateFit { usable } => write!(
                f,
                "power-law fit needs at least 3 usable samples, got {usable}"
            ),
            Error::CrossCheck { direct, by_parts, rel_err, tol } => write!(
                f,
                "pairing cross-check failed: direct {direct:.6e} vs by-parts {by_parts:.6e} \
                 (relative error {rel_err:.3e} > {tol:.3e})"
            ),
            Error::EmptyBallFamily => write!(f, "ball family is empty"),
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            Error::StepUnderflow { t, h } => write!(
                f,
                "ODE step size underflow at t = {t:.6e}, h = {h:.6e}"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
