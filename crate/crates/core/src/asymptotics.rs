//! Logarithmic growth fits, the closed-form constant on the `hλ = 1` line, and
//! finite-size scaling near transition lines.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, LN_2};

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{entropy_for_blocks, entropy_pipeline};
use crate::error::{Error, Result};
use crate::spectrum::ModelParams;

/// Minimum number of raw points inside a fit window.
pub const MIN_FIT_POINTS: usize = 8;

/// Points on the default geometric fit grid.
pub const DEFAULT_GRID_POINTS: usize = 24;

/// Samples per side of a scaling curve.
pub const DEFAULT_COLLAPSE_POINTS: usize = 64;

/// Fraction of the distance to the next transition line covered by the
/// default scaling window.
pub const SCALING_WINDOW_FRACTION: f64 = 0.1;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Numerically evaluated integral entering the constant `C`.
pub const OFFSET_INTEGRAL: f64 = 0.022_160_3;

/// `C = 1 + γ_E - 6 I ln 2`.
pub fn offset_constant() -> f64 {
    1.0 + EULER_GAMMA - 6.0 * OFFSET_INTEGRAL * LN_2
}

/// Tabulated `(L, S_L)` at one parameter point, `L` strictly increasing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropySeries {
    params: ModelParams,
    points: Vec<(usize, f64)>,
}

impl EntropySeries {
    pub fn new(params: ModelParams, points: Vec<(usize, f64)>) -> Result<Self> {
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidParams(
                    "block sizes in a series must be strictly increasing".into(),
                ));
            }
        }
        if let Some(&(l, s)) = points.iter().find(|(l, s)| *l == 0 || !(*s >= 0.0)) {
            return Err(Error::InvalidParams(format!("invalid series point (L={l}, S={s})")));
        }
        Ok(Self { params, points })
    }

    /// Evaluate the infinite-chain entropy at every block size (sorted and
    /// deduplicated first).
    pub fn compute(params: ModelParams, blocks: &[usize]) -> Result<Self> {
        let mut blocks = blocks.to_vec();
        blocks.sort_unstable();
        blocks.dedup();
        let values = entropy_for_blocks(&params, &blocks)?;
        let points = values.into_iter().map(|v| (v.block, v.entropy)).collect();
        Self::new(params, points)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn points(&self) -> &[(usize, f64)] {
        &self.points
    }
}

/// `count` block sizes spaced geometrically over `[min, max]`, rounded and
/// deduplicated. Both ends are included.
pub fn geometric_grid(min: usize, max: usize, count: usize) -> Vec<usize> {
    assert!(min >= 1 && max >= min, "invalid grid bounds {min}..{max}");
    if count <= 1 || min == max {
        return vec![max];
    }
    let ratio = (max as f64 / min as f64).ln() / (count - 1) as f64;
    let mut grid: Vec<usize> = (0..count)
        .map(|i| ((min as f64).ln() + ratio * i as f64).exp().round() as usize)
        .collect();
    grid[0] = min;
    grid[count - 1] = max;
    grid.dedup();
    grid
}

/// Each grid size together with its neighbour (`L + 1`, or `L - 1` at the
/// top of the grid) so that consecutive pairs can be averaged.
pub fn paired_blocks(grid: &[usize]) -> Vec<usize> {
    let top = grid.iter().copied().max().unwrap_or(0);
    let mut out: Vec<usize> = grid
        .iter()
        .flat_map(|&l| if l < top { [l, l + 1] } else { [l.saturating_sub(1).max(1), l] })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FitWindow {
    pub min: usize,
    pub max: usize,
}

impl FitWindow {
    /// `[max/10, max]`.
    pub fn default_for(max: usize) -> Self {
        Self { min: (max / 10).max(1), max }
    }

    pub fn contains(&self, l: usize) -> bool {
        (self.min..=self.max).contains(&l)
    }

    /// Block sizes to evaluate for a default fit over this window.
    pub fn default_blocks(&self) -> Vec<usize> {
        paired_blocks(&geometric_grid(self.min, self.max, DEFAULT_GRID_POINTS))
    }
}

/// Least-squares fit `S = a ln L + b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogFit {
    pub prefactor: f64,
    pub offset: f64,
    pub window: FitWindow,
    /// RMS residual of the pair-averaged points the fit was made on.
    pub residual_rms: f64,
    /// RMS residual of the raw points against the same line.
    pub raw_residual_rms: f64,
    pub points_used: usize,
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

fn rms(points: &[(f64, f64)], slope: f64, intercept: f64) -> f64 {
    let ss: f64 = points.iter().map(|&(x, y)| (y - slope * x - intercept).powi(2)).sum();
    (ss / points.len() as f64).sqrt()
}

/// Fit the logarithmic growth law inside `window`. Points at `L` and `L + 1`
/// are averaged (in `ln L` and in `S`) before fitting, which suppresses the
/// oscillation of free-fermion entropies with block size.
pub fn fit_log_growth(series: &EntropySeries, window: FitWindow) -> Result<LogFit> {
    let raw: Vec<(usize, f64)> =
        series.points.iter().copied().filter(|(l, _)| window.contains(*l)).collect();
    if raw.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints { needed: MIN_FIT_POINTS, found: raw.len() });
    }

    let mut damped = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        let (l, s) = raw[i];
        match raw.get(i + 1) {
            Some(&(next, s_next)) if next == l + 1 => {
                let x = 0.5 * ((l as f64).ln() + (next as f64).ln());
                damped.push((x, 0.5 * (s + s_next)));
                i += 2;
            }
            _ => {
                damped.push(((l as f64).ln(), s));
                i += 1;
            }
        }
    }

    let (prefactor, offset) = least_squares(&damped);
    let raw_xy: Vec<(f64, f64)> = raw.iter().map(|&(l, s)| ((l as f64).ln(), s)).collect();
    Ok(LogFit {
        prefactor,
        offset,
        window,
        residual_rms: rms(&damped, prefactor, offset),
        raw_residual_rms: rms(&raw_xy, prefactor, offset),
        points_used: damped.len(),
    })
}

/// Which of the two closed forms applies on the `hλ = 1` line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetricBranch {
    /// `k_λ < k_h`, i.e. `λ^{-1} ∈ (1/√2, 1)`.
    LambdaBelowField,
    /// `k_λ > k_h`, i.e. `λ^{-1} ∈ (0, 1/√2)`.
    LambdaAboveField,
}

impl SymmetricBranch {
    /// Branch of the symmetric line at driving field `lambda`, or `None` on
    /// the branch boundary `λ^{-1} = 1/√2` and outside `λ > 1`.
    pub fn for_lambda(lambda: f64) -> Option<Self> {
        let inv = 1.0 / lambda;
        if !(lambda > 1.0) || inv == FRAC_1_SQRT_2 {
            None
        } else if inv > FRAC_1_SQRT_2 {
            Some(SymmetricBranch::LambdaBelowField)
        } else {
            Some(SymmetricBranch::LambdaAboveField)
        }
    }
}

fn scaling_radicand(lambda: f64, branch: SymmetricBranch) -> Result<f64> {
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("symmetric-line formulas need λ > 1, got {lambda}")));
    }
    let u = lambda.powi(-2);
    let consistent = match branch {
        SymmetricBranch::LambdaBelowField => 2.0 * u >= 1.0 - 1e-14,
        SymmetricBranch::LambdaAboveField => 2.0 * u <= 1.0 + 1e-14,
    };
    if !consistent {
        return Err(Error::Domain(format!("λ = {lambda} lies on the other branch")));
    }
    let r = match branch {
        SymmetricBranch::LambdaBelowField => 4.0 * (1.0 - u) * (2.0 * u - 1.0),
        SymmetricBranch::LambdaAboveField => (1.0 - 2.0 * u) / (1.0 - u),
    };
    Ok(if r.abs() < 1e-14 { 0.0 } else { r })
}

/// Factor `𝓛 / L` of the scaling length on the `hλ = 1` line.
pub fn scaling_length(lambda: f64, branch: SymmetricBranch) -> Result<f64> {
    let r = scaling_radicand(lambda, branch)?;
    if r < 0.0 {
        return Err(Error::Domain(format!("negative radicand {r} at λ = {lambda}")));
    }
    Ok(r.sqrt())
}

/// Closed-form `L`-independent term of the entropy on the `hλ = 1` line.
pub fn analytic_s0(lambda: f64, branch: SymmetricBranch) -> Result<f64> {
    let r = scaling_radicand(lambda, branch)?;
    if r <= 0.0 {
        return Err(Error::Domain(format!("non-positive radicand {r} at λ = {lambda}")));
    }
    Ok(2.0 / 3.0 * (r.sqrt().ln() + offset_constant()))
}

/// Transition line approached by a scaling path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transition {
    /// `k_h = k_λ`; paths at fixed `h`, varying `λ`.
    HighSymmetry,
    /// `k_h = 0`; paths at fixed `λ`, varying `h`.
    FieldZero,
    /// `k_λ = 0`; paths at fixed `h`, varying `λ`.
    LambdaZero,
}

impl Transition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Transition::HighSymmetry => "kh-klambda",
            Transition::FieldZero => "kh-zero",
            Transition::LambdaZero => "klambda-zero",
        }
    }

    pub fn sides(&self) -> &'static [Side] {
        match self {
            Transition::HighSymmetry => &[Side::Below, Side::Above],
            Transition::FieldZero | Transition::LambdaZero => &[Side::Above],
        }
    }
}

/// Side of the transition: for `HighSymmetry`, `Below` means `k_λ < k_h`.
/// The other transitions are only approached from above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Below,
    Above,
}

impl Side {
    pub fn sign(&self) -> f64 {
        match self {
            Side::Below => 1.0,
            Side::Above => -1.0,
        }
    }
}

fn validate_path(transition: Transition, path: f64) -> Result<()> {
    let ok = match transition {
        Transition::HighSymmetry | Transition::LambdaZero => path > 0.0 && path < 1.0,
        Transition::FieldZero => path > 1.0 && path.is_finite(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "path value {path} does not cross the {} transition",
            transition.as_str()
        )))
    }
}

/// Parameters at scaling variable `x` along a path (`x = 0` is the crossing).
pub fn path_params(transition: Transition, side: Side, path: f64, block: usize, x: f64) -> Result<ModelParams> {
    let dk = x / block as f64;
    match transition {
        Transition::HighSymmetry => {
            let k_lambda = path.asin() - side.sign() * dk;
            ModelParams::new(path, 1.0 / k_lambda.cos())
        }
        Transition::LambdaZero => ModelParams::new(path, 1.0 / dk.cos()),
        Transition::FieldZero => ModelParams::new(dk.sin(), path),
    }
}

/// Wavenumber distance from the crossing to the next transition line on
/// the given side.
fn distance_to_next_line(transition: Transition, side: Side, path: f64) -> f64 {
    match (transition, side) {
        (Transition::HighSymmetry, Side::Below) => path.asin(),
        (Transition::HighSymmetry, Side::Above) => FRAC_PI_2 - path.asin(),
        (Transition::LambdaZero, _) => path.asin(),
        (Transition::FieldZero, _) => (1.0 / path).acos(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollapseConfig {
    pub transition: Transition,
    /// Fixed coordinate of each path: `h` for `HighSymmetry` and
    /// `LambdaZero`, `λ` for `FieldZero`.
    pub paths: Vec<f64>,
    pub blocks: Vec<usize>,
    pub grid_points: usize,
    /// Upper end of the shared `x` grid. `None` selects
    /// [`SCALING_WINDOW_FRACTION`] of the smallest `L · distance` to the
    /// next transition line.
    pub x_max: Option<f64>,
}

impl CollapseConfig {
    pub fn new(transition: Transition, paths: Vec<f64>, blocks: Vec<usize>) -> Self {
        Self { transition, paths, blocks, grid_points: DEFAULT_COLLAPSE_POINTS, x_max: None }
    }

    pub fn default_x_max(&self) -> f64 {
        let mut best = f64::INFINITY;
        for &path in &self.paths {
            for &block in &self.blocks {
                for &side in self.transition.sides() {
                    let d = distance_to_next_line(self.transition, side, path);
                    best = best.min(SCALING_WINDOW_FRACTION * block as f64 * d);
                }
            }
        }
        best
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingSample {
    pub x: f64,
    pub params: ModelParams,
    pub entropy: f64,
    /// `S_L - S_L^c`.
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingCurve {
    pub transition: Transition,
    pub side: Side,
    pub path: f64,
    pub block: usize,
    pub critical: ModelParams,
    pub critical_entropy: f64,
    pub samples: Vec<ScalingSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollapseResult {
    pub x_grid: Vec<f64>,
    pub curves: Vec<ScalingCurve>,
    /// Sup over the grid of the largest difference between curves on the
    /// same side, maximized over sides.
    pub spread: f64,
}

/// Sample `S_L - S_L^c` on a shared `x` grid for every (path, block, side).
pub fn scaling_collapse(config: &CollapseConfig) -> Result<CollapseResult> {
    if config.paths.is_empty() || config.blocks.is_empty() || config.grid_points < 2 {
        return Err(Error::InvalidParams("collapse needs paths, block sizes and >= 2 grid points".into()));
    }
    for &p in &config.paths {
        validate_path(config.transition, p)?;
    }
    if let Some(&b) = config.blocks.iter().find(|&&b| b == 0) {
        return Err(Error::InvalidParams(format!("invalid block size {b}")));
    }
    let x_max = config.x_max.unwrap_or_else(|| config.default_x_max());
    if !(x_max > 0.0) || x_max > config.default_x_max() / SCALING_WINDOW_FRACTION {
        return Err(Error::InvalidParams(format!(
            "x_max = {x_max} leaves the adjacent phase for some path"
        )));
    }
    let n = config.grid_points;
    let x_grid: Vec<f64> = (0..n).map(|i| x_max * i as f64 / (n - 1) as f64).collect();

    let mut keys = Vec::new();
    for &side in config.transition.sides() {
        for &path in &config.paths {
            for &block in &config.blocks {
                keys.push((side, path, block));
            }
        }
    }

    let curves = keys
        .par_iter()
        .map(|&(side, path, block)| {
            let critical = path_params(config.transition, side, path, block, 0.0)?;
            let critical_entropy = entropy_pipeline(&critical, block)?.entropy;
            let samples = x_grid
                .iter()
                .map(|&x| {
                    let params = path_params(config.transition, side, path, block, x)?;
                    let entropy = entropy_pipeline(&params, block)?.entropy;
                    Ok(ScalingSample { x, params, entropy, delta: entropy - critical_entropy })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ScalingCurve {
                transition: config.transition,
                side,
                path,
                block,
                critical,
                critical_entropy,
                samples,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let spread = collapse_spread(&curves);
    Ok(CollapseResult { x_grid, curves, spread })
}

/// Sup-norm spread among curves of the same side on their shared grid.
pub fn collapse_spread(curves: &[ScalingCurve]) -> f64 {
    let mut spread = 0.0f64;
    for side in [Side::Below, Side::Above] {
        let group: Vec<&ScalingCurve> = curves.iter().filter(|c| c.side == side).collect();
        let Some(first) = group.first() else { continue };
        for i in 0..first.samples.len() {
            let (lo, hi) = group.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
                let d = c.samples[i].delta;
                (lo.min(d), hi.max(d))
            });
            spread = spread.max(hi - lo);
        }
    }
    spread
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(h: f64, lambda: f64) -> ModelParams {
        ModelParams::new(h, lambda).unwrap()
    }

    #[test]
    fn constant_c_value() {
        assert!((offset_constant() - 1.485_054_3).abs() < 1e-6);
    }

    #[test]
    fn s0_examples() {
        // (2/3)(ln √0.4375 + C) and (2/3)(ln √0.4712 + C).
        let c = offset_constant();
        let a = analytic_s0(1.0 / 0.6, SymmetricBranch::LambdaAboveField).unwrap();
        assert!((a - 2.0 / 3.0 * (0.4375f64.sqrt().ln() + c)).abs() < 1e-12);
        assert!((a - 0.7145).abs() < 1e-3, "{a}");
        let b = analytic_s0(1.0 / 0.9, SymmetricBranch::LambdaBelowField).unwrap();
        assert!((b - 2.0 / 3.0 * (0.4712f64.sqrt().ln() + c)).abs() < 1e-12);
        assert!((b - 0.7392).abs() < 1e-3, "{b}");
    }

    #[test]
    fn s0_diverges_at_branch_boundary() {
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
            let lo = analytic_s0(1.0 / (FRAC_1_SQRT_2 - eps), SymmetricBranch::LambdaAboveField).unwrap();
            let hi = analytic_s0(1.0 / (FRAC_1_SQRT_2 + eps), SymmetricBranch::LambdaBelowField).unwrap();
            assert!(lo < prev && hi < prev);
            prev = lo.max(hi);
        }
        assert!(prev < -4.0);
    }

    #[test]
    fn wrong_branch_is_a_domain_error() {
        assert!(matches!(
            analytic_s0(1.0 / 0.6, SymmetricBranch::LambdaBelowField),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            analytic_s0(1.0 / 0.9, SymmetricBranch::LambdaAboveField),
            Err(Error::Domain(_))
        ));
        assert!(analytic_s0(1.0, SymmetricBranch::LambdaBelowField).is_err());
        assert!(analytic_s0(0.5, SymmetricBranch::LambdaAboveField).is_err());
    }

    #[test]
    fn scaling_length_examples() {
        let f = scaling_length(1.0 / 0.6, SymmetricBranch::LambdaAboveField).unwrap();
        assert!((f - 0.4375f64.sqrt()).abs() < 1e-15);
        assert!((f - 0.6614).abs() < 1e-4);
        let edge = 1.0 / FRAC_1_SQRT_2;
        assert_eq!(scaling_length(edge, SymmetricBranch::LambdaAboveField).unwrap(), 0.0);
        assert_eq!(scaling_length(edge, SymmetricBranch::LambdaBelowField).unwrap(), 0.0);
    }

    #[test]
    fn branch_selection() {
        assert_eq!(SymmetricBranch::for_lambda(1.0 / 0.9), Some(SymmetricBranch::LambdaBelowField));
        assert_eq!(SymmetricBranch::for_lambda(1.0 / 0.3), Some(SymmetricBranch::LambdaAboveField));
        assert_eq!(SymmetricBranch::for_lambda(0.9), None);
    }

    #[test]
    fn zero_series_fits_to_zero() {
        let blocks = FitWindow::default_for(400).default_blocks();
        let series = EntropySeries::compute(params(1.5, 0.0), &blocks).unwrap();
        let fit = fit_log_growth(&series, FitWindow::default_for(400)).unwrap();
        assert_eq!((fit.prefactor, fit.offset, fit.residual_rms), (0.0, 0.0, 0.0));
    }

    #[test]
    fn too_few_points() {
        let series = EntropySeries::new(params(0.5, 0.0), (1..=7).map(|l| (l * 10, 1.0)).collect()).unwrap();
        let err = fit_log_growth(&series, FitWindow { min: 1, max: 100 }).unwrap_err();
        assert_eq!(err, Error::InsufficientPoints { needed: 8, found: 7 });
    }

    #[test]
    fn series_validation() {
        assert!(EntropySeries::new(params(0.5, 0.0), vec![(3, 1.0), (3, 1.0)]).is_err());
        assert!(EntropySeries::new(params(0.5, 0.0), vec![(3, -1.0)]).is_err());
    }

    #[test]
    fn grids() {
        let g = geometric_grid(200, 2048, 24);
        assert_eq!(g.len(), 24);
        assert_eq!((g[0], g[23]), (200, 2048));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let p = paired_blocks(&g);
        assert_eq!(p.len(), 48);
        assert!(p.contains(&2047) && p.contains(&201));
    }

    #[test]
    fn moderate_blocks_give_one_third_without_current() {
        let window = FitWindow { min: 40, max: 400 };
        let series = EntropySeries::compute(params(0.5, 0.0), &window.default_blocks()).unwrap();
        let fit = fit_log_growth(&series, window).unwrap();
        assert!((fit.prefactor - 1.0 / 3.0).abs() < 0.02, "{fit:?}");
        assert!(fit.raw_residual_rms >= fit.residual_rms * 0.5);
    }

    #[test]
    fn critical_point_has_zero_shift() {
        let mut config = CollapseConfig::new(Transition::HighSymmetry, vec![0.5], vec![40]);
        config.grid_points = 4;
        let result = scaling_collapse(&config).unwrap();
        assert_eq!(result.curves.len(), 2);
        for c in &result.curves {
            assert_eq!(c.samples[0].x, 0.0);
            assert_eq!(c.samples[0].delta, 0.0);
            assert_eq!(
                crate::spectrum::classify_phase(&c.critical).phase,
                crate::spectrum::Phase::BoundaryHighSymmetry
            );
        }
    }

    #[test]
    fn path_parameters_stay_in_adjacent_phase() {
        use crate::spectrum::{classify_phase, Phase};
        let config = CollapseConfig::new(Transition::HighSymmetry, vec![0.3, 0.7], vec![300, 600]);
        let x_max = config.default_x_max();
        for &h in &config.paths {
            for &l in &config.blocks {
                let below = path_params(Transition::HighSymmetry, Side::Below, h, l, x_max).unwrap();
                let above = path_params(Transition::HighSymmetry, Side::Above, h, l, x_max).unwrap();
                assert_eq!(classify_phase(&below).phase, Phase::Phase1);
                assert_eq!(classify_phase(&above).phase, Phase::Phase2);
            }
        }
        let p = path_params(Transition::LambdaZero, Side::Above, 0.5, 100, 3.0).unwrap();
        assert!(p.lambda() > 1.0);
        let p = path_params(Transition::FieldZero, Side::Above, 1.5, 100, 3.0).unwrap();
        assert!((p.h() - 0.03f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn rejects_paths_that_miss_the_transition() {
        let config = CollapseConfig::new(Transition::HighSymmetry, vec![1.2], vec![100]);
        assert!(scaling_collapse(&config).is_err());
        let config = CollapseConfig::new(Transition::FieldZero, vec![0.5], vec![100]);
        assert!(scaling_collapse(&config).is_err());
    }

    proptest! {
        #[test]
        fn exact_log_data_is_recovered(a in -2.0..2.0f64, b in -5.0..5.0f64, max in 100usize..5000) {
            let window = FitWindow::default_for(max);
            let points: Vec<(usize, f64)> = window
                .default_blocks()
                .into_iter()
                .map(|l| (l, a * (l as f64).ln() + b + 30.0))
                .collect();
            let series = EntropySeries::new(params(0.5, 0.0), points).unwrap();
            let fit = fit_log_growth(&series, window).unwrap();
            prop_assert!((fit.prefactor - a).abs() < 1e-12);
            prop_assert!((fit.offset - b - 30.0).abs() < 1e-11);
        }

        #[test]
        fn s0_matches_scaling_length(inv in 0.05..0.999f64, block in 1usize..100_000) {
            prop_assume!((inv - FRAC_1_SQRT_2).abs() > 1e-3);
            let lambda = 1.0 / inv;
            let branch = SymmetricBranch::for_lambda(lambda).unwrap();
            let factor = scaling_length(lambda, branch).unwrap();
            let l = block as f64;
            let lhs = 2.0 / 3.0 * ((factor * l).ln() + offset_constant());
            let rhs = 2.0 / 3.0 * l.ln() + analytic_s0(lambda, branch).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
