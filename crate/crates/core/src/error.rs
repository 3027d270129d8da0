use thiserror::Error;

/// Failures raised by the physics core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A closed form that only exists for the transverse-field Ising chain was
    /// requested for another anisotropy.
    #[error("{method} is only defined for gamma = 1 (got gamma = {gamma})")]
    RequiresIsing { method: &'static str, gamma: f64 },

    #[error("only {found} samples inside the fit window, need at least {needed}")]
    InsufficientSamples { found: usize, needed: usize },

    #[error("strong-coupling guard violated: max |cos(alpha_+-)| = {max_cos:.3e} at k = {k} (limit 0.1)")]
    StrongCouplingGuard { max_cos: f64, k: usize },

    #[error("chain of {n} sites is too large for dense Fock-space diagonalisation (max {max})")]
    ChainTooLarge { n: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
