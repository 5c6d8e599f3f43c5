//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by model construction, energy evaluation, and the
/// numeric routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor or operation was handed an out-of-range argument.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The scheme's active-mode duration does not fit in the frame.
    #[error("frame overrun: active duration {t_ac} s exceeds budget {budget} s")]
    FrameOverrun { t_ac: f64, budget: f64 },

    /// The requested symbol-error target cannot be met by the scheme's
    /// error-rate expression at any SNR.
    #[error("unattainable SER target {target} (must lie in (0, {limit}))")]
    UnattainableTarget { target: f64, limit: f64 },

    /// No constellation size satisfies the frame constraint.
    #[error("no feasible constellation: {0}")]
    NoFeasibleConstellation(String),

    /// An iterative routine ran out of budget before reaching tolerance.
    #[error("numeric non-convergence: {0}")]
    NonConvergence(String),

    /// The operation is not defined for the given scheme.
    #[error("unsupported scheme: {0}")]
    UnsupportedScheme(String),
}

pub type Result<T> = std::result::Result<T, Error>;
