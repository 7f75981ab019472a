//! Two-point fermion correlators `g_l` and the block correlation matrix.
//!
//! `g_l` is the Fourier coefficient of the indicator of the vacant modes, so
//! the infinite-chain coefficients are sums of closed-form integrals of
//! `e^{-ilθ}` over the complement of the Fermi seas.

use std::f64::consts::{PI, TAU};

use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{dispersion, fermi_seas, FermiSeaDecomposition, ModelParams};

/// Grid modes with `|Λ_k|` below this are ambiguous and rejected.
pub const ZERO_MODE_TOLERANCE: f64 = 1e-12;

/// Largest lag stored for a correlator sequence.
pub const MAX_LAG: usize = 1 << 14;

/// Momentum quantization `k_n = 2π(n + offset)/N` of a periodic chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentumOffset {
    /// `offset = 0`: periodic fermions.
    Integer,
    /// `offset = 1/2`: antiperiodic fermions.
    HalfInteger,
}

impl MomentumOffset {
    pub fn value(self) -> f64 {
        match self {
            MomentumOffset::Integer => 0.0,
            MomentumOffset::HalfInteger => 0.5,
        }
    }

    /// Momenta of an `n`-site ring, each mapped into `(-π, π]`.
    pub fn grid(self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| {
                let k = TAU * (j as f64 + self.value()) / n as f64;
                if k > PI {
                    k - TAU
                } else {
                    k
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CorrelatorSource {
    InfiniteChain,
    FiniteChain { sites: usize, offset: MomentumOffset },
}

/// Coefficients `g_l` for `0 <= l <= max_lag`; negative lags are conjugates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelatorSequence {
    coeffs: Vec<Complex64>,
    source: CorrelatorSource,
}

impl CorrelatorSequence {
    pub fn from_coefficients(coeffs: Vec<Complex64>, source: CorrelatorSource) -> Self {
        assert!(!coeffs.is_empty(), "a correlator sequence needs g_0");
        Self { coeffs, source }
    }

    /// Infinite-chain coefficients up to `max_lag` from a sea decomposition.
    pub fn infinite(seas: &FermiSeaDecomposition, max_lag: usize) -> Self {
        let vacant = seas.unoccupied();
        let coeffs = (0..=max_lag as i64).map(|l| interval_coefficient(l, &vacant)).collect();
        Self { coeffs, source: CorrelatorSource::InfiniteChain }
    }

    /// Finite-ring coefficients up to `max_lag`.
    pub fn finite(
        p: &ModelParams,
        sites: usize,
        offset: MomentumOffset,
        max_lag: usize,
    ) -> Result<Self> {
        let vacant = vacant_grid_momenta(p, sites, offset)?;
        let coeffs = (0..=max_lag as i64).map(|l| grid_coefficient(l, &vacant, sites)).collect();
        Ok(Self { coeffs, source: CorrelatorSource::FiniteChain { sites, offset } })
    }

    /// Coefficients `(1/N) Σ_{k vacant} e^{-ilk}` for an explicit set of
    /// vacant grid momenta, e.g. an excited or parity-constrained filling.
    pub fn from_vacant_momenta(
        vacant: &[f64],
        sites: usize,
        offset: MomentumOffset,
        max_lag: usize,
    ) -> Self {
        let coeffs = (0..=max_lag as i64).map(|l| grid_coefficient(l, vacant, sites)).collect();
        Self { coeffs, source: CorrelatorSource::FiniteChain { sites, offset } }
    }

    pub fn source(&self) -> CorrelatorSource {
        self.source
    }

    pub fn max_lag(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `g_l` for any `|l| <= max_lag`.
    pub fn get(&self, l: i64) -> Complex64 {
        let g = self.coeffs[l.unsigned_abs() as usize];
        if l < 0 {
            g.conj()
        } else {
            g
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }
}

fn interval_coefficient(l: i64, vacant: &[crate::spectrum::Interval]) -> Complex64 {
    let sum: Complex64 = vacant
        .iter()
        .map(|iv| {
            if l == 0 {
                Complex64::new(iv.length(), 0.0)
            } else {
                let lf = l as f64;
                let phase_b = Complex64::from_polar(1.0, -lf * iv.end);
                let phase_a = Complex64::from_polar(1.0, -lf * iv.start);
                Complex64::i() * (phase_b - phase_a) / lf
            }
        })
        .sum();
    sum / TAU
}

/// Single infinite-chain coefficient `g_l`.
pub fn correlator_infinite(l: i64, seas: &FermiSeaDecomposition) -> Complex64 {
    interval_coefficient(l, &seas.unoccupied())
}

fn vacant_grid_momenta(p: &ModelParams, sites: usize, offset: MomentumOffset) -> Result<Vec<f64>> {
    if sites < 2 {
        return Err(Error::InvalidParams(format!("ring needs at least 2 sites, got {sites}")));
    }
    let mut vacant = Vec::new();
    for k in offset.grid(sites) {
        let energy = dispersion(k, p);
        if energy.abs() < ZERO_MODE_TOLERANCE {
            return Err(Error::ZeroMode { momentum: k, energy });
        }
        if energy > 0.0 {
            vacant.push(k);
        }
    }
    Ok(vacant)
}

fn grid_coefficient(l: i64, vacant: &[f64], sites: usize) -> Complex64 {
    let sum: Complex64 = vacant.iter().map(|&k| Complex64::from_polar(1.0, -(l as f64) * k)).sum();
    sum / sites as f64
}

/// Single finite-ring coefficient: `(1/N) Σ_{Λ_k > 0} e^{-ilk}` over the grid.
pub fn correlator_finite(
    l: i64,
    sites: usize,
    p: &ModelParams,
    offset: MomentumOffset,
) -> Result<Complex64> {
    let vacant = vacant_grid_momenta(p, sites, offset)?;
    Ok(grid_coefficient(l, &vacant, sites))
}

/// Convenience: infinite-chain sequence for a parameter point.
pub fn infinite_sequence(p: &ModelParams, max_lag: usize) -> CorrelatorSequence {
    CorrelatorSequence::infinite(&fermi_seas(p), max_lag)
}

/// `L x L` Hermitian Toeplitz matrix with entry `(m, n) = g_{n-m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    order: usize,
    generator: Vec<Complex64>,
}

impl CorrelationMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        if n >= m {
            self.generator[n - m]
        } else {
            self.generator[m - n].conj()
        }
    }

    /// `g_0`, the common diagonal.
    pub fn diagonal(&self) -> f64 {
        self.generator[0].re
    }

    pub fn to_mat(&self) -> Mat<Complex64> {
        Mat::from_fn(self.order, self.order, |m, n| self.entry(m, n))
    }

    /// True when every generator coefficient is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.generator.iter().all(|g| g.re == 0.0 && g.im == 0.0)
    }
}

pub fn build_correlation_matrix(order: usize, seq: &CorrelatorSequence) -> CorrelationMatrix {
    assert!(order >= 1, "block size must be positive");
    assert!(
        order - 1 <= seq.max_lag(),
        "sequence covers lags up to {}, block of {order} needs {}",
        seq.max_lag(),
        order - 1
    );
    let mut generator = seq.coeffs[..order].to_vec();
    // g_0 is real by construction; drop roundoff in the imaginary part.
    generator[0].im = 0.0;
    CorrelationMatrix { order, generator }
}

/// Translate every sea by `phi`: `g_l -> e^{-ilφ} g_l`.
pub fn shift_wavenumbers(seq: &CorrelatorSequence, phi: f64) -> CorrelatorSequence {
    let coeffs = seq
        .coeffs
        .iter()
        .enumerate()
        .map(|(l, g)| g * Complex64::from_polar(1.0, -(l as f64) * phi))
        .collect();
    CorrelatorSequence { coeffs, source: seq.source }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::ModelParams;
    use proptest::prelude::*;

    fn params(h: f64, lambda: f64) -> ModelParams {
        ModelParams::new(h, lambda).unwrap()
    }

    /// Composite Gauss-Legendre (5-point) quadrature of the vacant-mode
    /// indicator times `e^{-ilθ}`, with panel breaks at the dispersion zeros.
    fn quadrature_coefficient(l: i64, p: &ModelParams) -> Complex64 {
        const NODES: [f64; 5] = [
            0.0,
            -0.538_469_310_105_683_1,
            0.538_469_310_105_683_1,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        const WEIGHTS: [f64; 5] = [
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
            0.236_926_885_056_189_1,
        ];
        let mut breaks = vec![-PI, PI];
        for s in fermi_seas(p).seas() {
            breaks.push(s.start);
            breaks.push(s.end);
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let panels = 2000;
        let mut sum = Complex64::new(0.0, 0.0);
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a <= 0.0 {
                continue;
            }
            let width = (b - a) / panels as f64;
            for j in 0..panels {
                let lo = a + width * j as f64;
                for (x, wt) in NODES.iter().zip(WEIGHTS) {
                    let t = lo + 0.5 * width * (x + 1.0);
                    if dispersion(t, p) > 0.0 {
                        sum += Complex64::from_polar(1.0, -(l as f64) * t) * (0.5 * width * wt);
                    }
                }
            }
        }
        sum / TAU
    }

    #[test]
    fn half_filling_coefficients() {
        let seas = fermi_seas(&params(0.0, 0.0));
        assert!((correlator_infinite(0, &seas).re - 0.5).abs() < 1e-15);
        let g1 = correlator_infinite(1, &seas);
        assert!((g1.re + 1.0 / PI).abs() < 1e-15);
        assert!(g1.im.abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for &(h, lambda) in &[(0.0, 0.0), (0.5, 1.3), (0.5, 1.1), (1.2, 1.5), (0.3, 4.0)] {
            let p = params(h, lambda);
            let seas = fermi_seas(&p);
            for l in [0, 1, 2, 5, 17, -3] {
                let exact = correlator_infinite(l, &seas);
                let quad = quadrature_coefficient(l, &p);
                assert!((exact - quad).norm() < 1e-12, "h={h} λ={lambda} l={l}: {exact} vs {quad}");
            }
        }
    }

    #[test]
    fn polarized_chain_has_no_vacancies() {
        let seas = fermi_seas(&params(1.5, 0.0));
        for l in 0..20 {
            assert_eq!(correlator_infinite(l, &seas), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn finite_ring_examples() {
        let p = params(0.0, 0.0);
        let g0 = correlator_finite(0, 4, &p, MomentumOffset::HalfInteger).unwrap();
        assert!((g0.re - 0.5).abs() < 1e-15);

        let p = params(0.5, 0.0);
        let g0 = correlator_finite(0, 100_001, &p, MomentumOffset::HalfInteger).unwrap();
        assert!((g0.re - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn finite_ring_by_direct_summation() {
        // 10-site ring, half-integer grid: momenta ±π/10, ±3π/10, ±π/2,
        // ±7π/10, ±9π/10 and vacant where Λ_k > 0.
        let p = params(0.5, 1.3);
        let mut expected = Complex64::new(0.0, 0.0);
        for j in 0..10 {
            let k = std::f64::consts::PI * (2 * j + 1) as f64 / 10.0;
            let k = if k > PI { k - TAU } else { k };
            let e = (-k.cos() - 0.5) * (1.0 - 1.3 * k.sin());
            if e > 0.0 {
                expected += Complex64::new((-k).cos(), (-k).sin());
            }
        }
        expected /= 10.0;
        let got = correlator_finite(1, 10, &p, MomentumOffset::HalfInteger).unwrap();
        assert!((got - expected).norm() < 1e-15);
        // Vacant set {3π/10, π/2, 9π/10, -7π/10, -9π/10}.
        assert!((got.re - (-0.190_211_303_259_030_7)).abs() < 1e-14, "{got}");
        assert!((got.im - (-0.1)).abs() < 1e-14, "{got}");
    }

    #[test]
    fn zero_mode_is_reported() {
        // h = 0 puts k = ±π/2 on the integer grid of an 8-site ring.
        let err = correlator_finite(0, 8, &params(0.0, 0.0), MomentumOffset::Integer).unwrap_err();
        assert!(matches!(err, Error::ZeroMode { .. }));
        assert!(correlator_finite(0, 8, &params(0.0, 0.0), MomentumOffset::HalfInteger).is_ok());
    }

    #[test]
    fn finite_ring_converges_to_infinite_chain() {
        // Away from half filling, so that g_0 is not exact on every grid.
        let p = params(0.5, 1.1);
        let seas = fermi_seas(&p);
        for l in [0i64, 1, 4] {
            let exact = correlator_infinite(l, &seas);
            let errs: Vec<f64> = [100usize, 1000, 10000]
                .iter()
                .map(|&n| (correlator_finite(l, n, &p, MomentumOffset::HalfInteger).unwrap() - exact).norm())
                .collect();
            assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
            assert!(errs[2] < 1e-3);
        }
    }

    #[test]
    fn matrix_layout() {
        let seq = infinite_sequence(&params(0.0, 0.0), 4);
        let one = build_correlation_matrix(1, &seq);
        assert_eq!(one.entry(0, 0), seq.get(0));

        let two = build_correlation_matrix(2, &seq);
        assert!((two.entry(0, 0).re - 0.5).abs() < 1e-15);
        assert!((two.entry(0, 1).re + 1.0 / PI).abs() < 1e-15);
        assert!((two.entry(1, 0).re + 1.0 / PI).abs() < 1e-15);

        let zero = build_correlation_matrix(3, &infinite_sequence(&params(1.5, 0.0), 4));
        assert!(zero.is_zero());

        let asym = build_correlation_matrix(4, &infinite_sequence(&params(0.5, 1.3), 4));
        for m in 0..4 {
            for n in 0..4 {
                assert_eq!(asym.entry(m, n), seq_get(&asym, n as i64 - m as i64));
                assert_eq!(asym.entry(m, n), asym.entry(n, m).conj());
            }
        }
    }

    fn seq_get(g: &CorrelationMatrix, l: i64) -> Complex64 {
        if l >= 0 {
            g.generator[l as usize]
        } else {
            g.generator[(-l) as usize].conj()
        }
    }

    #[test]
    fn shift_by_zero_and_pi() {
        let seq = infinite_sequence(&params(0.0, 0.0), 8);
        assert_eq!(shift_wavenumbers(&seq, 0.0), seq);
        let flipped = shift_wavenumbers(&seq, PI);
        for l in 0..=8i64 {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            assert!((flipped.get(l) - seq.get(l) * sign).norm() < 1e-14);
        }
    }

    #[test]
    fn quarter_shift_symmetrizes_the_symmetric_line() {
        for inv in [0.3, 0.6, 0.9] {
            let p = ModelParams::symmetric_line(inv).unwrap();
            let shifted = shift_wavenumbers(&infinite_sequence(&p, 64), PI / 4.0);
            for l in 0..=64 {
                assert!(shifted.get(l).im.abs() < 1e-12, "λ^-1={inv} l={l}: {}", shifted.get(l));
            }
        }
    }

    #[test]
    fn shift_matches_translated_seas() {
        // A shifted sequence equals the Fourier coefficients of the
        // translated vacant set.
        let p = params(0.5, 1.3);
        let phi = 0.37;
        let vacant: Vec<_> = fermi_seas(&p)
            .unoccupied()
            .iter()
            .map(|iv| crate::spectrum::Interval { start: iv.start + phi, end: iv.end + phi })
            .collect();
        let shifted = shift_wavenumbers(&infinite_sequence(&p, 10), phi);
        for l in 0..=10 {
            assert!((shifted.get(l) - interval_coefficient(l, &vacant)).norm() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn coefficients_bounded_by_vacant_measure(h in 0.0..2.0f64, lambda in 0.0..4.0f64, l in -200i64..200) {
            let seas = fermi_seas(&params(h, lambda));
            let bound = (TAU - seas.occupied_measure()) / TAU;
            let g = correlator_infinite(l, &seas);
            prop_assert!(g.norm() <= bound + 1e-12);
            if l == 0 {
                prop_assert!((g.re - bound).abs() < 1e-12);
                prop_assert!((0.0..=1.0).contains(&g.re));
            }
            prop_assert!((correlator_infinite(-l, &seas) - g.conj()).norm() < 1e-13);
        }
    }
}
