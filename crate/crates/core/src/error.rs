use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "cutoff {cutoff} is insufficient: truncation deficit {deficit:.3e} exceeds {limit:.3e}"
    )]
    CutoffInsufficient {
        cutoff: usize,
        deficit: f64,
        limit: f64,
    },

    #[error("cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(usize, usize),

    #[error("curve has no fringe (visibility {visibility:.3e})")]
    NoFringe { visibility: f64 },

    #[error("half-maximum level is not crossed within one period")]
    WidthUndefined,

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("subspace is at stage {found:?}, expected {expected}")]
    StageOrder {
        found: crate::oracle::Stage,
        expected: &'static str,
    },

    #[error("photon number {0} exceeds the oracle limit of 6")]
    OrderTooLarge(usize),

    #[error("fringe width increased from {prev:.6} to {next:.6} between gamma^-1 = {at_prev} and {at_next}")]
    NonMonotone {
        at_prev: f64,
        at_next: f64,
        prev: f64,
        next: f64,
    },

    #[error("phase grids differ")]
    GridMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}
