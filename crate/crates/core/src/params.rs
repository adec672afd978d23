//! Reservoir parameters and the double-Lorentzian spectral density.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// The five numbers defining the double-Lorentzian bath.
///
/// `gamma_j` is the weight of the j-th Lorentzian and `lambda_j` its width,
/// which is also the loss rate of the j-th pseudomode. `omega0` is carried
/// along but drops out of every observable since dynamics are computed in the
/// rotating frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirParams {
    gamma1: f64,
    gamma2: f64,
    lambda1: f64,
    lambda2: f64,
    omega0: f64,
}

impl ReservoirParams {
    pub fn new(gamma1: f64, gamma2: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        Self::with_omega0(gamma1, gamma2, lambda1, lambda2, 0.0)
    }

    pub fn with_omega0(
        gamma1: f64,
        gamma2: f64,
        lambda1: f64,
        lambda2: f64,
        omega0: f64,
    ) -> Result<Self> {
        let finite = [gamma1, gamma2, lambda1, lambda2, omega0]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if gamma1 < 0.0 || gamma2 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma1 and gamma2 must be >= 0 (got {gamma1}, {gamma2})"
            )));
        }
        if lambda1 <= 0.0 || lambda2 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "lambda1 and lambda2 must be > 0 (got {lambda1}, {lambda2})"
            )));
        }
        Ok(Self {
            gamma1,
            gamma2,
            lambda1,
            lambda2,
            omega0,
        })
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Squared atom-pseudomode couplings `γ_j λ_j / 2`.
    pub fn coupling_squared(&self) -> [f64; 2] {
        [
            0.5 * self.gamma1 * self.lambda1,
            0.5 * self.gamma2 * self.lambda2,
        ]
    }

    /// Atom-pseudomode couplings `sqrt(γ_j λ_j / 2)`.
    pub fn couplings(&self) -> [f64; 2] {
        let [a, b] = self.coupling_squared();
        [a.sqrt(), b.sqrt()]
    }

    pub fn lambdas(&self) -> [f64; 2] {
        [self.lambda1, self.lambda2]
    }

    /// The same bath with the two Lorentzians relabelled.
    pub fn swapped(&self) -> Self {
        Self {
            gamma1: self.gamma2,
            gamma2: self.gamma1,
            lambda1: self.lambda2,
            lambda2: self.lambda1,
            omega0: self.omega0,
        }
    }

    /// Returns a copy with one named parameter replaced.
    ///
    /// Accepted names: `gamma1`, `gamma2`, `lambda1`, `lambda2`, `omega0`.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut p = *self;
        match name {
            "gamma1" => p.gamma1 = value,
            "gamma2" => p.gamma2 = value,
            "lambda1" => p.lambda1 = value,
            "lambda2" => p.lambda2 = value,
            "omega0" => p.omega0 = value,
            other => {
                return Err(Error::InvalidParams(format!("unknown parameter '{other}'")));
            }
        }
        Self::with_omega0(p.gamma1, p.gamma2, p.lambda1, p.lambda2, p.omega0)
    }

    pub fn is_uncoupled(&self) -> bool {
        self.gamma1 == 0.0 && self.gamma2 == 0.0
    }

    /// Slowest characteristic time `max(1/λ_min, 1/γ_max)`, used to size
    /// default time grids.
    pub fn slowest_timescale(&self) -> f64 {
        let lambda_scale = 1.0 / self.lambda1.min(self.lambda2);
        let gamma_max = self.gamma1.max(self.gamma2);
        if gamma_max > 0.0 {
            lambda_scale.max(1.0 / gamma_max)
        } else {
            lambda_scale
        }
    }
}

impl Default for ReservoirParams {
    /// `γ₁ = γ₂ = 1`, `λ₁ = λ₂ = 1`.
    fn default() -> Self {
        Self {
            gamma1: 1.0,
            gamma2: 1.0,
            lambda1: 1.0,
            lambda2: 1.0,
            omega0: 0.0,
        }
    }
}

impl fmt::Display for ReservoirParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gamma1={} gamma2={} lambda1={} lambda2={}",
            self.gamma1, self.gamma2, self.lambda1, self.lambda2
        )
    }
}

/// `J(ω)`, the sum of two Lorentzians centred on `ω₀`.
pub fn spectral_density(omega: f64, params: &ReservoirParams) -> f64 {
    let detuning2 = (omega - params.omega0).powi(2);
    let lorentz = |gamma: f64, lambda: f64| gamma * lambda * lambda / (detuning2 + lambda * lambda);
    (lorentz(params.gamma1, params.lambda1) + lorentz(params.gamma2, params.lambda2)) / (2.0 * PI)
}

/// Reservoir correlation function `f(Δt)` in the rotating frame.
pub fn correlation_kernel(dt: f64, params: &ReservoirParams) -> Result<Complex64> {
    if dt < 0.0 || dt.is_nan() {
        return Err(Error::NegativeTime(dt));
    }
    let term = |gamma: f64, lambda: f64| gamma * lambda * (-lambda * dt).exp();
    Ok(Complex64::new(
        0.5 * (term(params.gamma1, params.lambda1) + term(params.gamma2, params.lambda2)),
        0.0,
    ))
}

/// Correlation function in the lab frame, `(1/2) Σ γ_j λ_j e^{-i z_j Δt}` with
/// poles `z_j = ω₀ - iλ_j`.
pub fn correlation_kernel_lab(dt: f64, params: &ReservoirParams) -> Result<Complex64> {
    let rotating = correlation_kernel(dt, params)?;
    Ok(rotating * Complex64::from_polar(1.0, -params.omega0 * dt))
}
