//! Single-particle spectrum of the current-carrying XX chain.
//!
//! After the Jordan-Wigner transformation the driven Hamiltonian is a sum of
//! free fermion modes with energy `(-cos k - h)(1 - λ sin k)`. The ground state
//! fills every mode of negative energy; the filled modes form one or two arcs
//! ("Fermi seas") on the Brillouin zone circle.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arcs (and distances between zeros) shorter than this are treated as a
/// single coincident zero.
pub const SEA_TOLERANCE: f64 = 1e-10;

/// Absolute tolerance on `|k_h - k_λ|` for the high-symmetry line.
pub const PHASE_TOLERANCE: f64 = 1e-9;

/// Transverse field `h` and current driving field `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    h: f64,
    lambda: f64,
}

impl ModelParams {
    pub fn new(h: f64, lambda: f64) -> Result<Self> {
        if !h.is_finite() || h < 0.0 {
            return Err(Error::InvalidParams(format!(
                "transverse field h must be finite and >= 0, got {h}"
            )));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParams(format!(
                "driving field lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self { h, lambda })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Point on the `hλ = 1` line with the given `λ^{-1}`.
    pub fn symmetric_line(inverse_lambda: f64) -> Result<Self> {
        if !(inverse_lambda > 0.0) {
            return Err(Error::InvalidParams(format!(
                "inverse driving field must be positive, got {inverse_lambda}"
            )));
        }
        Self::new(inverse_lambda, 1.0 / inverse_lambda)
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={}, lambda={}", self.h, self.lambda)
    }
}

/// Single-particle energy `Λ_k = (-cos k - h)(1 - λ sin k)`.
pub fn dispersion(k: f64, p: &ModelParams) -> f64 {
    (-k.cos() - p.h) * (1.0 - p.lambda * k.sin())
}

/// Open wavenumber interval `(start, end)` with `-π <= start < end <= π`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, k: f64) -> bool {
        k > self.start && k < self.end
    }
}

/// Occupied arcs of the Brillouin zone in the ground state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FermiSeaDecomposition {
    seas: Vec<Interval>,
    count: usize,
    coincident_zeros: Vec<f64>,
}

impl FermiSeaDecomposition {
    /// Occupied intervals in `(-π, π]`, sorted by left endpoint. A sea that
    /// wraps through `±π` appears as two intervals.
    pub fn seas(&self) -> &[Interval] {
        &self.seas
    }

    /// Number of Fermi seas `R`, counting a sea that wraps through `±π` once.
    pub fn count(&self) -> usize {
        self.count
    }

    /// True when zeros of the dispersion coincided and the zero-length arc
    /// between them was dropped.
    pub fn is_degenerate(&self) -> bool {
        !self.coincident_zeros.is_empty()
    }

    pub fn coincident_zeros(&self) -> &[f64] {
        &self.coincident_zeros
    }

    pub fn occupied_measure(&self) -> f64 {
        self.seas.iter().map(Interval::length).sum()
    }

    pub fn is_occupied(&self, k: f64) -> bool {
        self.seas.iter().any(|s| s.contains(k))
    }

    /// Complement of the seas in `[-π, π]`, i.e. the vacant modes.
    pub fn unoccupied(&self) -> Vec<Interval> {
        let mut out = Vec::with_capacity(self.seas.len() + 1);
        let mut cursor = -PI;
        for sea in &self.seas {
            if sea.start > cursor {
                out.push(Interval { start: cursor, end: sea.start });
            }
            cursor = sea.end;
        }
        if cursor < PI {
            out.push(Interval { start: cursor, end: PI });
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
struct Arc {
    start: f64,
    end: f64,
    occupied: bool,
}

/// Analytic zeros of both factors of the dispersion, mapped into `(-π, π]`.
fn dispersion_zeros(p: &ModelParams) -> Vec<f64> {
    let mut roots = Vec::with_capacity(4);
    if p.h <= 1.0 {
        // cos k = -h
        let a = (-p.h).acos();
        roots.push(a);
        roots.push(-a);
    }
    if p.lambda >= 1.0 {
        // sin k = 1/λ
        let b = (1.0 / p.lambda).asin();
        roots.push(b);
        roots.push(PI - b);
    }
    for r in roots.iter_mut() {
        if *r <= -PI {
            *r += TAU;
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    roots
}

pub fn fermi_seas(p: &ModelParams) -> FermiSeaDecomposition {
    let mut zeros: Vec<f64> = Vec::with_capacity(4);
    let mut coincident = Vec::new();
    for r in dispersion_zeros(p) {
        match zeros.last() {
            Some(&last) if r - last < SEA_TOLERANCE => coincident.push(r),
            _ => zeros.push(r),
        }
    }
    if zeros.len() > 1 {
        let first = zeros[0];
        let last = zeros[zeros.len() - 1];
        if first + TAU - last < SEA_TOLERANCE {
            coincident.push(first);
            zeros.remove(0);
        }
    }

    if zeros.is_empty() {
        // No sign change anywhere on the circle.
        let full = dispersion(0.0, p) < 0.0;
        return FermiSeaDecomposition {
            seas: if full { vec![Interval { start: -PI, end: PI }] } else { Vec::new() },
            count: usize::from(full),
            coincident_zeros: coincident,
        };
    }

    let m = zeros.len();
    let mut arcs: Vec<Arc> = (0..m)
        .map(|i| {
            let start = zeros[i];
            let end = if i + 1 < m { zeros[i + 1] } else { zeros[0] + TAU };
            let mid = 0.5 * (start + end);
            Arc { start, end, occupied: dispersion(mid, p) < 0.0 }
        })
        .collect();

    // Rotate so the list begins with a vacant arc; then runs of occupied arcs
    // never straddle the end of the list.
    match arcs.iter().position(|a| !a.occupied) {
        None => {
            return FermiSeaDecomposition {
                seas: vec![Interval { start: -PI, end: PI }],
                count: 1,
                coincident_zeros: coincident,
            };
        }
        Some(pos) => {
            arcs.rotate_left(pos);
            for a in arcs.iter_mut().skip(m - pos) {
                a.start += TAU;
                a.end += TAU;
            }
        }
    }

    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut previous_occupied = false;
    for a in &arcs {
        if a.occupied {
            if previous_occupied {
                merged.last_mut().expect("run in progress").1 = a.end;
            } else {
                merged.push((a.start, a.end));
            }
        }
        previous_occupied = a.occupied;
    }

    let mut seas = Vec::with_capacity(merged.len() + 1);
    for &(mut s, mut e) in &merged {
        while s > PI {
            s -= TAU;
            e -= TAU;
        }
        while s <= -PI {
            s += TAU;
            e += TAU;
        }
        if e > PI {
            if s < PI {
                seas.push(Interval { start: s, end: PI });
            }
            seas.push(Interval { start: -PI, end: e - TAU });
        } else {
            seas.push(Interval { start: s, end: e });
        }
    }
    seas.sort_by(|a, b| a.start.partial_cmp(&b.start).unwrap_or(Ordering::Equal));

    FermiSeaDecomposition { seas, count: merged.len(), coincident_zeros: coincident }
}

/// `k_h = arcsin h` (for `h <= 1`) and `k_λ = arccos(1/λ)` (for `λ >= 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CharacteristicWavenumbers {
    pub k_h: Option<f64>,
    pub k_lambda: Option<f64>,
}

pub fn characteristic_wavenumbers(p: &ModelParams) -> CharacteristicWavenumbers {
    CharacteristicWavenumbers {
        k_h: (p.h <= 1.0).then(|| p.h.asin()),
        k_lambda: (p.lambda >= 1.0).then(|| (1.0 / p.lambda).acos()),
    }
}

// Antiderivative of the per-mode current (-cos k - h) sin k.
fn current_antiderivative(k: f64, h: f64) -> f64 {
    let c = k.cos();
    0.5 * c * c + h * c
}

/// Energy current density `j^E = (1/2π) ∫_occupied (-cos k - h) sin k dk`.
pub fn current_density(p: &ModelParams) -> f64 {
    current_density_of(&fermi_seas(p), p.h)
}

fn current_density_of(seas: &FermiSeaDecomposition, h: f64) -> f64 {
    seas.seas()
        .iter()
        .map(|s| current_antiderivative(s.end, h) - current_antiderivative(s.start, h))
        .sum::<f64>()
        / TAU
}

/// Transverse magnetization per site in spin-1/2 units, `ν - 1/2` with `ν`
/// the filling fraction.
pub fn magnetization(p: &ModelParams) -> f64 {
    fermi_seas(p).occupied_measure() / TAU - 0.5
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    NoCurrentCritical,
    NoCurrentPolarized,
    Phase1,
    Phase2,
    Phase3,
    BoundaryHighSymmetry,
    /// The `k_h = 0` line inside the current-carrying region.
    BoundaryOther,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::NoCurrentCritical => "no-current-critical",
            Phase::NoCurrentPolarized => "no-current-polarized",
            Phase::Phase1 => "phase-1",
            Phase::Phase2 => "phase-2",
            Phase::Phase3 => "phase-3",
            Phase::BoundaryHighSymmetry => "boundary-high-symmetry",
            Phase::BoundaryOther => "boundary-other",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseLabel {
    pub phase: Phase,
    pub current_density: f64,
    pub magnetization: f64,
}

pub fn classify_phase(p: &ModelParams) -> PhaseLabel {
    let seas = fermi_seas(p);
    let current_density = current_density_of(&seas, p.h);
    let magnetization = seas.occupied_measure() / TAU - 0.5;

    let phase = if p.lambda <= 1.0 {
        if p.h < 1.0 {
            Phase::NoCurrentCritical
        } else {
            Phase::NoCurrentPolarized
        }
    } else if p.h >= 1.0 {
        Phase::Phase3
    } else {
        let k_h = p.h.asin();
        let k_lambda = (1.0 / p.lambda).acos();
        if (k_h - k_lambda).abs() <= PHASE_TOLERANCE {
            Phase::BoundaryHighSymmetry
        } else if k_h <= PHASE_TOLERANCE {
            Phase::BoundaryOther
        } else if k_lambda < k_h {
            Phase::Phase1
        } else {
            Phase::Phase2
        }
    };
    PhaseLabel { phase, current_density, magnetization }
}
