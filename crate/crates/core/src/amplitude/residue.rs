use num_complex::Complex64;

use super::cubic::{characteristic_cubic, CubicSolution};
use super::PseudomodeState;
use crate::{Error, ReservoirParams, Result};

/// Closed-form amplitude as a sum of residues at the three simple poles of
/// `M₁(s)e^{st}`.
///
/// The pseudomode amplitudes come from the same poles: `P̄_j(s) = -i ḡ_j (s+λ_k) M₁(s) / A(s)`
/// with `k ≠ j`, so all three components share one exponential basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueAmplitude {
    cubic: CubicSolution,
    m_weights: [Complex64; 3],
    p1_weights: [Complex64; 3],
    p2_weights: [Complex64; 3],
}

impl ResidueAmplitude {
    pub fn new(params: &ReservoirParams, m1_0: Complex64) -> Result<Self> {
        Self::from_cubic(characteristic_cubic(params), params, m1_0)
    }

    pub fn from_cubic(cubic: CubicSolution, params: &ReservoirParams, m1_0: Complex64) -> Result<Self> {
        if cubic.is_degenerate() {
            return Err(Error::DegenerateRoots);
        }
        let s = cubic.roots;
        let [l1, l2] = params.lambdas();
        let [g1, g2] = params.couplings();
        let minus_i = Complex64::new(0.0, -1.0);
        let mut m_weights = [Complex64::new(0.0, 0.0); 3];
        let mut p1_weights = m_weights;
        let mut p2_weights = m_weights;
        for i in 0..3 {
            // B'(s_i) written as the product over the other computed roots, so
            // that the residues sum to the leading coefficient of A exactly.
            let mut dprime = Complex64::new(1.0, 0.0);
            for j in 0..3 {
                if j != i {
                    dprime *= s[i] - s[j];
                }
            }
            let scale = m1_0 / dprime;
            m_weights[i] = cubic.eval_numerator(s[i]) * scale;
            p1_weights[i] = minus_i * g1 * (s[i] + l2) * scale;
            p2_weights[i] = minus_i * g2 * (s[i] + l1) * scale;
        }
        Ok(Self {
            cubic,
            m_weights,
            p1_weights,
            p2_weights,
        })
    }

    pub fn cubic(&self) -> &CubicSolution {
        &self.cubic
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        self.basis(t)
            .iter()
            .zip(&self.m_weights)
            .map(|(e, w)| e * w)
            .sum()
    }

    pub fn amplitude_derivative(&self, t: f64) -> Complex64 {
        let e = self.basis(t);
        (0..3).map(|i| self.m_weights[i] * self.cubic.roots[i] * e[i]).sum()
    }

    pub fn state(&self, t: f64) -> PseudomodeState {
        let e = self.basis(t);
        let dot = |w: &[Complex64; 3]| -> Complex64 { (0..3).map(|i| w[i] * e[i]).sum() };
        PseudomodeState {
            m1: dot(&self.m_weights),
            p1: dot(&self.p1_weights),
            p2: dot(&self.p2_weights),
        }
    }

    /// Slowest decay rate of `|M₁|²` at long times, `-2 max Re(s_i)` over poles
    /// that carry weight.
    pub fn asymptotic_rate(&self) -> f64 {
        let total: f64 = self.m_weights.iter().map(|w| w.norm()).sum();
        let max_re = (0..3)
            .filter(|&i| self.m_weights[i].norm() > 1e-12 * total)
            .map(|i| self.cubic.roots[i].re)
            .fold(f64::NEG_INFINITY, f64::max);
        if max_re.is_finite() {
            (-2.0 * max_re).max(0.0)
        } else {
            0.0
        }
    }

    fn basis(&self, t: f64) -> [Complex64; 3] {
        self.cubic.roots.map(|s| (s * t).exp())
    }
}

/// `M₁(t)` from the residue sum.
///
/// Fails for `t < 0` and when the characteristic roots are degenerate, in
/// which case [`super::amplitude_ode`] is the supported path.
pub fn amplitude_residue(t: f64, params: &ReservoirParams, m1_0: Complex64) -> Result<Complex64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    Ok(ResidueAmplitude::new(params, m1_0)?.amplitude(t))
}
