//! Mode occupations of the block correlation matrix and the block entropy.

use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::{
    build_correlation_matrix, infinite_sequence, CorrelationMatrix, CorrelatorSequence, MAX_LAG,
};
use crate::error::{Error, Result};
use crate::spectrum::ModelParams;

/// Eigenvalues this close outside `[0, 1]` are clamped silently.
pub const CLAMP_WINDOW: f64 = 1e-10;
/// Eigenvalues further than this outside `[0, 1]` are a construction error.
pub const HARD_LIMIT: f64 = 1e-8;

/// Eigenvalues of `G_L`, ascending and clamped to `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OccupationSpectrum {
    values: Vec<f64>,
    /// Largest distance outside `[0, 1]` seen before clamping.
    clamp_excursion: f64,
}

impl OccupationSpectrum {
    /// Clamp raw eigenvalues into `[0, 1]`, failing on excursions beyond
    /// [`HARD_LIMIT`].
    pub fn from_eigenvalues(mut values: Vec<f64>) -> Result<Self> {
        let mut excursion = 0.0f64;
        for v in values.iter_mut() {
            let out = (-*v).max(*v - 1.0).max(0.0);
            if !v.is_finite() || out > HARD_LIMIT {
                return Err(Error::SpectrumOutOfRange { value: *v });
            }
            excursion = excursion.max(out);
            *v = v.clamp(0.0, 1.0);
        }
        values.sort_by(|a, b| a.total_cmp(b));
        Ok(Self { values, clamp_excursion: excursion })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn clamp_excursion(&self) -> f64 {
        self.clamp_excursion
    }

    /// True when some eigenvalue needed more than [`CLAMP_WINDOW`] of clamping.
    pub fn exceeded_clamp_window(&self) -> bool {
        self.clamp_excursion > CLAMP_WINDOW
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Occupations `1 - λ_n` of the complementary convention.
    pub fn complement(&self) -> Self {
        let mut values: Vec<f64> = self.values.iter().map(|v| 1.0 - v).collect();
        values.reverse();
        Self { values, clamp_excursion: self.clamp_excursion }
    }
}

/// Ascending eigenvalues of a Hermitian matrix (lower triangle is read).
pub fn hermitian_eigenvalues(mat: &Mat<Complex64>) -> Result<Vec<f64>> {
    mat.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::EigenFailure)
}

/// Ascending eigenvalues and matching unit eigenvectors (as columns).
pub fn hermitian_eigen(mat: &Mat<Complex64>) -> Result<(Vec<f64>, Mat<Complex64>)> {
    let evd = mat.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenFailure)?;
    let s = evd.S().column_vector();
    let values = (0..mat.nrows()).map(|i| s[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

pub fn mode_occupations(g: &CorrelationMatrix) -> Result<OccupationSpectrum> {
    if g.is_zero() {
        return OccupationSpectrum::from_eigenvalues(vec![0.0; g.order()]);
    }
    let values = if g.order() == 1 {
        vec![g.diagonal()]
    } else {
        hermitian_eigenvalues(&g.to_mat())?
    };
    OccupationSpectrum::from_eigenvalues(values)
}

/// `-x ln x - (1-x) ln(1-x)` with `0 ln 0 = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    term(x) + term(1.0 - x)
}

/// Block entropy in nats, the sum of binary entropies of the occupations.
pub fn block_entropy(occ: &OccupationSpectrum) -> f64 {
    occ.values.iter().map(|&v| binary_entropy(v)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyValue {
    /// Entropy in nats.
    pub entropy: f64,
    pub block: usize,
    pub params: ModelParams,
}

fn check_block(block: usize) -> Result<()> {
    if block == 0 || block > MAX_LAG + 1 {
        return Err(Error::InvalidParams(format!(
            "block size must lie in 1..={}, got {block}",
            MAX_LAG + 1
        )));
    }
    Ok(())
}

/// Entropy of a leading block of an arbitrary correlator sequence.
pub fn sequence_entropy(seq: &CorrelatorSequence, block: usize) -> Result<f64> {
    check_block(block)?;
    let g = build_correlation_matrix(block, seq);
    Ok(block_entropy(&mode_occupations(&g)?))
}

/// Infinite-chain entropy of an `L`-site block.
pub fn entropy_pipeline(p: &ModelParams, block: usize) -> Result<EntropyValue> {
    check_block(block)?;
    let seq = infinite_sequence(p, block - 1);
    let entropy = sequence_entropy(&seq, block)?;
    Ok(EntropyValue { entropy, block, params: *p })
}

/// Entropies for several block sizes at one parameter point. The correlator
/// sequence is generated once; blocks are evaluated in parallel and returned
/// in input order.
pub fn entropy_for_blocks(p: &ModelParams, blocks: &[usize]) -> Result<Vec<EntropyValue>> {
    for &b in blocks {
        check_block(b)?;
    }
    let Some(&largest) = blocks.iter().max() else {
        return Ok(Vec::new());
    };
    let seq = infinite_sequence(p, largest - 1);
    blocks
        .par_iter()
        .map(|&block| {
            sequence_entropy(&seq, block).map(|entropy| EntropyValue { entropy, block, params: *p })
        })
        .collect()
}
