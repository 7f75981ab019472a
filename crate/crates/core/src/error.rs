use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("momentum {momentum} has single-particle energy {energy:e}; change the chain length or momentum offset")]
    ZeroMode { momentum: f64, energy: f64 },

    #[error("occupation eigenvalue {value} lies outside [0, 1] beyond tolerance")]
    SpectrumOutOfRange { value: f64 },

    #[error("eigendecomposition failed to converge")]
    EigenFailure,

    #[error("need at least {needed} points inside the fit window, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("{0}")]
    Domain(String),

    #[error("ground state is degenerate (gap {gap:e}); perturb the parameters")]
    DegenerateGroundState { gap: f64 },

    #[error("no momentum grid reproduces the exact ground state (energy {energy})")]
    SectorMismatch { energy: f64 },

    #[error("operator check failed: {0}")]
    Operator(String),
}

pub type Result<T> = std::result::Result<T, Error>;
