//! Excited-state amplitude `M₁(t)` of the atom.
//!
//! Two independent solvers are provided: [`amplitude_residue`] inverts the
//! Laplace-domain solution through the roots of the characteristic cubic, and
//! [`amplitude_ode`] integrates the pseudomode equations
//!
//! ```text
//! dM₁/dt  = -i (ḡ₁ P̄₁ + ḡ₂ P̄₂)
//! dP̄_j/dt = -λ_j P̄_j - i ḡ_j M₁
//! ```
//!
//! directly. [`AmplitudeSolver`] picks the residue path when the roots are
//! simple and falls back to the ODE otherwise.

mod cubic;
mod ode;
mod residue;

use num_complex::Complex64;

pub use cubic::{characteristic_cubic, CubicSolution, DEGENERACY_TOL};
pub use ode::{amplitude_ode, OdeAmplitude};
pub use residue::{amplitude_residue, ResidueAmplitude};

use crate::{Error, ReservoirParams, Result};

/// Atom and pseudomode amplitudes at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudomodeState {
    pub m1: Complex64,
    pub p1: Complex64,
    pub p2: Complex64,
}

impl PseudomodeState {
    pub fn survival(&self) -> f64 {
        self.m1.norm_sqr()
    }

    /// Time derivative of each amplitude from the pseudomode equations.
    pub fn derivative(&self, params: &ReservoirParams) -> PseudomodeState {
        let [g1, g2] = params.couplings();
        let [l1, l2] = params.lambdas();
        let minus_i = Complex64::new(0.0, -1.0);
        PseudomodeState {
            m1: minus_i * (self.p1 * g1 + self.p2 * g2),
            p1: -self.p1 * l1 + minus_i * g1 * self.m1,
            p2: -self.p2 * l2 + minus_i * g2 * self.m1,
        }
    }

    /// `d|M₁|²/dt`.
    pub fn survival_rate(&self, params: &ReservoirParams) -> f64 {
        2.0 * (self.m1.conj() * self.derivative(params).m1).re
    }

    /// Growth rate of the ground-state population computed two ways: from
    /// the atom (`-d|M₁|²/dt`) and from the pseudomodes (their population
    /// growth plus what they leak, `d|P̄_j|²/dt + 2λ_j|P̄_j|²`).
    pub fn ground_population_rates(&self, params: &ReservoirParams) -> (f64, f64) {
        let d = self.derivative(params);
        let [l1, l2] = params.lambdas();
        let direct = -2.0 * (self.m1.conj() * d.m1).re;
        let via_modes = 2.0 * (self.p1.conj() * d.p1).re
            + 2.0 * (self.p2.conj() * d.p2).re
            + 2.0 * l1 * self.p1.norm_sqr()
            + 2.0 * l2 * self.p2.norm_sqr();
        (direct, via_modes)
    }
}

/// Amplitudes sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory {
    pub times: Vec<f64>,
    pub m1: Vec<Complex64>,
    pub p1: Vec<Complex64>,
    pub p2: Vec<Complex64>,
    /// `|M₁(t)|²`.
    pub survival: Vec<f64>,
    /// `2λ₁ ∫₀ᵗ |P̄₁|² dt'`.
    pub loss1: Vec<f64>,
    /// `2λ₂ ∫₀ᵗ |P̄₂|² dt'`.
    pub loss2: Vec<f64>,
}

impl AmplitudeTrajectory {
    /// Total probability at index `k`: atom, both pseudomodes and what the
    /// pseudomodes have leaked.
    pub fn population_total(&self, k: usize) -> f64 {
        self.survival[k] + self.p1[k].norm_sqr() + self.p2[k].norm_sqr() + self.loss1[k] + self.loss2[k]
    }

    /// Largest deviation of [`Self::population_total`] from its initial value.
    pub fn max_population_defect(&self) -> f64 {
        let initial = self.population_total(0);
        (0..self.times.len())
            .map(|k| (self.population_total(k) - initial).abs())
            .fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Evaluates the amplitude at arbitrary times using whichever solver is valid
/// for the parameters.
#[derive(Debug, Clone)]
pub enum AmplitudeSolver {
    Residue(ResidueAmplitude),
    Ode(OdeAmplitude),
}

impl AmplitudeSolver {
    /// Residue solution when the roots are simple, otherwise an ODE solution
    /// checkpointed over `[0, horizon]`.
    pub fn new(params: &ReservoirParams, m1_0: Complex64, horizon: f64) -> Result<Self> {
        match ResidueAmplitude::new(params, m1_0) {
            Ok(r) => Ok(Self::Residue(r)),
            Err(Error::DegenerateRoots) => Ok(Self::Ode(OdeAmplitude::new(params, m1_0, horizon)?)),
            Err(e) => Err(e),
        }
    }

    /// Solver for an atom starting fully excited.
    pub fn excited(params: &ReservoirParams, horizon: f64) -> Result<Self> {
        Self::new(params, Complex64::new(1.0, 0.0), horizon)
    }

    pub fn is_residue(&self) -> bool {
        matches!(self, Self::Residue(_))
    }

    pub fn state(&self, t: f64) -> PseudomodeState {
        match self {
            Self::Residue(r) => r.state(t),
            Self::Ode(o) => o.state(t),
        }
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        match self {
            Self::Residue(r) => r.amplitude(t),
            Self::Ode(o) => o.state(t).m1,
        }
    }

    pub fn survival(&self, t: f64) -> f64 {
        self.amplitude(t).norm_sqr()
    }

    pub fn survival_rate(&self, t: f64, params: &ReservoirParams) -> f64 {
        match self {
            Self::Residue(r) => 2.0 * (r.amplitude(t).conj() * r.amplitude_derivative(t)).re,
            Self::Ode(o) => o.state(t).survival_rate(params),
        }
    }
}
