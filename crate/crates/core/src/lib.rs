//! Entanglement entropy of a block of the XX spin chain whose ground state is
//! constrained to carry an energy current.
//!
//! The chain maps onto free fermions, so the entropy of `L` contiguous sites
//! follows from the eigenvalues of an `L x L` Toeplitz correlation matrix.
//! [`oracle`] repeats the computation by exact diagonalization of small rings.

pub mod asymptotics;
pub mod cli;
pub mod correlations;
pub mod entropy;
pub mod error;
pub mod oracle;
pub mod spectrum;

pub use correlations::{
    build_correlation_matrix, correlator_finite, correlator_infinite, shift_wavenumbers,
    CorrelationMatrix, CorrelatorSequence, MomentumOffset,
};
pub use entropy::{block_entropy, entropy_pipeline, mode_occupations, EntropyValue, OccupationSpectrum};
pub use error::{Error, Result};
pub use spectrum::{
    characteristic_wavenumbers, classify_phase, current_density, dispersion, fermi_seas,
    FermiSeaDecomposition, ModelParams, Phase, PhaseLabel,
};
