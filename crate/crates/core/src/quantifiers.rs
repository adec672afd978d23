//! Concurrence, entropies, the quantum-memory entropic uncertainty relation
//! and the witness windows where its lower bound drops below one bit.
//!
//! Entropies are in bits. The measured observables are `σ_x` and `σ_y` on
//! qubit A, whose eigenbases have overlap `c = 1/2`, so the bound reads
//! `LEU = 1 + S(A|B)`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::amplitude::{amplitude_ode, AmplitudeSolver};
use crate::linalg::{
    hermitian_eigenvalues, partial_trace_first, projector, psd_sqrt, shannon_bits, validate_density, CMatrix,
    DENSITY_TOL,
};
use crate::roots::{bisect, bisect_predicate};
use crate::two_qubit::{bell_xstate, XStateDensity};
use crate::{Error, ReservoirParams, Result, TimeGrid};

/// Absolute time resolution of refined window boundaries.
pub const WINDOW_TIME_TOL: f64 = 1e-9;

fn to_dynamic(m: &Matrix4<Complex64>) -> CMatrix {
    CMatrix::from_iterator(4, 4, m.iter().copied())
}

fn sigma_y_sigma_y() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    let one = Complex64::new(1.0, 0.0);
    m[(0, 3)] = -one;
    m[(1, 2)] = one;
    m[(2, 1)] = one;
    m[(3, 0)] = -one;
    m
}

/// Wootters concurrence `max{0, √β₁ - √β₂ - √β₃ - √β₄}` with `β` the
/// eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)` in decreasing order.
///
/// The `√β` are taken directly as the singular values of `√ρ √ρ̃`, which
/// avoids square roots of round-off in the vanishing `β`.
pub fn concurrence_wootters(rho: &Matrix4<Complex64>) -> Result<f64> {
    let rho = to_dynamic(rho);
    validate_density(&rho, DENSITY_TOL)?;
    let yy = sigma_y_sigma_y();
    let root = psd_sqrt(&rho);
    let flipped_root = &yy * root.map(|z| z.conj()) * &yy;
    let mut sv: Vec<f64> = (&root * flipped_root).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).clamp(0.0, 1.0))
}

/// X-state shortcut `2 max{0, |ρ₂₃| - √(ρ₁₁ρ₄₄)}`.
pub fn concurrence_x(rho: &XStateDensity) -> f64 {
    2.0 * (rho.rho23.norm() - (rho.rho11 * rho.rho44).sqrt()).max(0.0)
}

/// `-Tr ρ log₂ ρ` for a density matrix of any dimension.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    validate_density(rho, DENSITY_TOL)?;
    Ok(entropy_unchecked(rho))
}

fn entropy_unchecked(rho: &CMatrix) -> f64 {
    shannon_bits(&hermitian_eigenvalues(rho))
}

/// `S(A|B) = S(ρ_AB) - S(ρ_B)` for a two-qubit state.
pub fn conditional_entropy(rho_ab: &CMatrix) -> Result<f64> {
    validate_density(rho_ab, DENSITY_TOL)?;
    if rho_ab.nrows() != 4 {
        return Err(Error::DimensionMismatch(rho_ab.nrows(), 4));
    }
    let rho_b = partial_trace_first(rho_ab, 2, 2);
    Ok(entropy_unchecked(rho_ab) - entropy_unchecked(&rho_b))
}

/// Eigenbasis of `σ_x` (`|±⟩`) or `σ_y` (`|±i⟩`) in the `|e⟩, |g⟩` basis.
fn measurement_basis(phase: Complex64) -> [[Complex64; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e = Complex64::new(h, 0.0);
    [[e, phase * h], [e, -phase * h]]
}

/// Post-measurement state `Σ_l (|ψ_l⟩⟨ψ_l| ⊗ I) ρ (|ψ_l⟩⟨ψ_l| ⊗ I)`.
fn measure_first_qubit(rho_ab: &CMatrix, basis: &[[Complex64; 2]; 2]) -> CMatrix {
    let id = CMatrix::identity(2, 2);
    basis
        .iter()
        .map(|v| {
            let p = projector(v).kronecker(&id);
            &p * rho_ab * &p
        })
        .fold(CMatrix::zeros(4, 4), |acc, m| acc + m)
}

/// `S(σ_x|B) + S(σ_y|B)` for a two-qubit density matrix.
pub fn eur_lhs_matrix(rho_ab: &CMatrix) -> Result<f64> {
    validate_density(rho_ab, DENSITY_TOL)?;
    if rho_ab.nrows() != 4 {
        return Err(Error::DimensionMismatch(rho_ab.nrows(), 4));
    }
    let s_b = entropy_unchecked(&partial_trace_first(rho_ab, 2, 2));
    let total = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
        .into_iter()
        // S(X|B) of a classical-quantum state is non-negative; clip round-off.
        .map(|phase| (entropy_unchecked(&measure_first_qubit(rho_ab, &measurement_basis(phase))) - s_b).max(0.0))
        .sum();
    Ok(total)
}

/// Left side of the uncertainty relation for an X state.
pub fn eur_lhs(rho: &XStateDensity) -> f64 {
    eur_lhs_matrix(&to_dynamic(&rho.to_matrix())).expect("X states are valid density matrices")
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Closed-form lower bound `1 + S(A|B)` for the Bell-type X state of
/// concurrence `c`.
pub fn leu(concurrence: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&concurrence) {
        return Err(Error::OutOfRange {
            value: concurrence,
            range: "[0, 1]",
        });
    }
    let c = concurrence;
    let half = 0.5 * c;
    Ok(-xlog2x(1.0 - c) - xlog2x(c) + xlog2x(1.0 - half) + xlog2x(half) + 1.0)
}

fn leu_clamped(c: f64) -> f64 {
    leu(c.clamp(0.0, 1.0)).expect("clamped into range")
}

/// Concurrence above which the bound is below one bit: the root of
/// `leu(C) = 1` in `(0, 1)`.
///
/// `leu - 1` vanishes at `C = 0`, is positive up to the root and negative
/// beyond it; the bracket `[1/2, 1]` sits past the interior maximum.
pub fn witness_threshold() -> f64 {
    bisect(|c| leu_clamped(c) - 1.0, 0.5, 1.0, 1e-15).expect("leu - 1 changes sign on [1/2, 1]")
}

/// Maximal time interval on which the bound is below one bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessWindow {
    pub t_start: f64,
    pub t_end: f64,
    /// Smallest sampled bound inside the window.
    pub min_leu: f64,
}

impl WitnessWindow {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// Extracts witness windows from a sampled concurrence series.
///
/// Each boundary between a witnessed and an unwitnessed sample is refined by
/// bisection on `continuous` (concurrence as a function of time) when given,
/// or by linear interpolation of the bound between the two samples.
/// Samples with `leu == 1` are not witnessed.
pub fn witness_windows(
    times: &[f64],
    concurrence: &[f64],
    continuous: Option<&(dyn Fn(f64) -> f64 + Sync)>,
) -> Vec<WitnessWindow> {
    let leus: Vec<f64> = concurrence.iter().map(|&c| leu_clamped(c)).collect();
    windows_from_bound(times, &leus, continuous)
}

pub(crate) fn windows_from_bound(
    times: &[f64],
    leus: &[f64],
    continuous: Option<&(dyn Fn(f64) -> f64 + Sync)>,
) -> Vec<WitnessWindow> {
    let witnessed = |k: usize| leus[k] < 1.0;
    let boundary = |k: usize| -> f64 {
        // Transition between samples k and k+1.
        let (t0, t1) = (times[k], times[k + 1]);
        match continuous {
            Some(f) => bisect_predicate(|t| leu_clamped(f(t)) < 1.0, t0, t1, WINDOW_TIME_TOL),
            None => {
                let (a, b) = (leus[k] - 1.0, leus[k + 1] - 1.0);
                if a == b {
                    0.5 * (t0 + t1)
                } else {
                    t0 + (t1 - t0) * a / (a - b)
                }
            }
        }
    };

    let mut windows = Vec::new();
    let n = times.len().min(leus.len());
    let mut k = 0;
    while k < n {
        if !witnessed(k) {
            k += 1;
            continue;
        }
        let start_idx = k;
        while k + 1 < n && witnessed(k + 1) {
            k += 1;
        }
        let end_idx = k;
        let t_start = if start_idx == 0 { times[0] } else { boundary(start_idx - 1) };
        let t_end = if end_idx + 1 == n { times[end_idx] } else { boundary(end_idx) };
        let min_leu = leus[start_idx..=end_idx].iter().copied().fold(f64::INFINITY, f64::min);
        windows.push(WitnessTrace::window(t_start, t_end, min_leu));
        k += 1;
    }
    windows
}

/// Concurrence, bound and measured uncertainty on a time grid, with the
/// extracted witness windows.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessTrace {
    pub times: Vec<f64>,
    pub concurrence: Vec<f64>,
    pub leu: Vec<f64>,
    pub eur_lhs: Vec<f64>,
    pub windows: Vec<WitnessWindow>,
}

impl WitnessTrace {
    fn window(t_start: f64, t_end: f64, min_leu: f64) -> WitnessWindow {
        WitnessWindow {
            t_start,
            t_end,
            min_leu,
        }
    }

    /// Fills the bound and the measured uncertainty for each concurrence
    /// sample of the Bell-type X state. Windows are left empty.
    pub fn from_concurrence(times: Vec<f64>, concurrence: Vec<f64>) -> Result<Self> {
        if times.len() != concurrence.len() {
            return Err(Error::DimensionMismatch(times.len(), concurrence.len()));
        }
        let rows: Vec<(f64, f64)> = concurrence
            .par_iter()
            .map(|&c| {
                let x = bell_xstate(c.clamp(0.0, 1.0))?;
                Ok((leu_clamped(concurrence_x(&x)), eur_lhs(&x)))
            })
            .collect::<Result<_>>()?;
        let (leu, eur_lhs) = rows.into_iter().unzip();
        Ok(Self {
            times,
            concurrence,
            leu,
            eur_lhs,
            windows: Vec::new(),
        })
    }

    pub fn first_window_end(&self) -> Option<f64> {
        self.windows.first().map(|w| w.t_end)
    }
}

/// Witness trace of the unmeasured dynamics: concurrence equals `|M₁(t)|²`.
pub fn witness_trace(params: &ReservoirParams, grid: &TimeGrid) -> Result<WitnessTrace> {
    let solver = AmplitudeSolver::excited(params, grid.horizon())?;
    let survival: Vec<f64> = match &solver {
        AmplitudeSolver::Residue(r) => grid.times().par_iter().map(|&t| r.amplitude(t).norm_sqr()).collect(),
        AmplitudeSolver::Ode(_) => amplitude_ode(grid, params, Complex64::new(1.0, 0.0))?.survival,
    };
    let concurrence: Vec<f64> = survival.iter().map(|s| s.clamp(0.0, 1.0)).collect();
    let mut trace = WitnessTrace::from_concurrence(grid.times().to_vec(), concurrence)?;
    let continuous = |t: f64| solver.survival(t);
    trace.windows = windows_from_bound(&trace.times, &trace.leu, Some(&continuous));
    Ok(trace)
}
