use std::f64::consts::PI;

use num_complex::Complex64;

use crate::ReservoirParams;

/// Relative pairwise distance below which two roots are treated as one.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Roots of `B(s) = s³ + (λ₁+λ₂)s² + (λ₁λ₂ + γ₁λ₁/2 + γ₂λ₂/2)s + λ₁λ₂(γ₁+γ₂)/2`
/// together with the numerator `A(s) = (s+λ₁)(s+λ₂)` of the Laplace-domain
/// amplitude `M₁(s) = A(s)/B(s) · M₁(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicSolution {
    pub roots: [Complex64; 3],
    /// Number of computed roots (including itself) within the degeneracy
    /// tolerance of each root.
    pub multiplicity: [u8; 3],
    /// `[1, a1, a0]` for `A(s) = s² + a1 s + a0`.
    pub numerator: [f64; 3],
    /// `[1, b2, b1, b0]` for the monic cubic `B`.
    pub denominator: [f64; 4],
}

impl CubicSolution {
    pub fn is_degenerate(&self) -> bool {
        self.multiplicity.iter().any(|&m| m > 1)
    }

    pub fn eval_denominator(&self, s: Complex64) -> Complex64 {
        let [_, b2, b1, b0] = self.denominator;
        ((s + b2) * s + b1) * s + b0
    }

    pub fn eval_denominator_derivative(&self, s: Complex64) -> Complex64 {
        let [_, b2, b1, _] = self.denominator;
        (s * 3.0 + 2.0 * b2) * s + b1
    }

    pub fn eval_numerator(&self, s: Complex64) -> Complex64 {
        let [_, a1, a0] = self.numerator;
        (s + a1) * s + a0
    }

    /// Magnitude of the largest term of `B` at `s`, for relative residuals.
    pub fn denominator_scale(&self, s: Complex64) -> f64 {
        let [_, b2, b1, b0] = self.denominator;
        let r = s.norm();
        (r * r * r).max(b2 * r * r).max(b1 * r).max(b0)
    }
}

/// Computes the characteristic roots by the closed-form cubic formula followed
/// by one Newton step per root.
pub fn characteristic_cubic(params: &ReservoirParams) -> CubicSolution {
    let [l1, l2] = params.lambdas();
    let [g1sq, g2sq] = params.coupling_squared();
    let lambda_sum = l1 + l2;
    let lambda_prod = l1 * l2;
    let b2 = lambda_sum;
    let b1 = lambda_prod + (g1sq + g2sq);
    let b0 = 0.5 * lambda_prod * (params.gamma1() + params.gamma2());

    let mut sol = CubicSolution {
        roots: solve_monic_cubic(b2, b1, b0),
        multiplicity: [1; 3],
        numerator: [1.0, lambda_sum, lambda_prod],
        denominator: [1.0, b2, b1, b0],
    };

    for k in 0..3 {
        let s = sol.roots[k];
        let d = sol.eval_denominator_derivative(s);
        if d.norm() > 0.0 {
            let step = sol.eval_denominator(s) / d;
            let polished = s - step;
            if sol.eval_denominator(polished).norm() <= sol.eval_denominator(s).norm() {
                sol.roots[k] = polished;
            }
        }
        // Real-coefficient cubic: snap numerically real roots onto the axis.
        if sol.roots[k].im.abs() <= 1e-14 * sol.roots[k].norm() {
            sol.roots[k].im = 0.0;
        }
    }

    sol.roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));

    let scale = sol.roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    for i in 0..3 {
        sol.multiplicity[i] = (0..3)
            .filter(|&j| (sol.roots[i] - sol.roots[j]).norm() <= DEGENERACY_TOL * scale)
            .count() as u8;
    }
    sol
}

/// Roots of `s³ + a s² + b s + c` by Cardano's formula in complex arithmetic.
fn solve_monic_cubic(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    let a = Complex64::new(a, 0.0);
    let b = Complex64::new(b, 0.0);
    let c = Complex64::new(c, 0.0);
    let d0 = a * a - b * 3.0;
    let d1 = a * a * a * 2.0 - a * b * 9.0 + c * 27.0;
    let disc = (d1 * d1 - d0 * d0 * d0 * 4.0).sqrt();
    let plus = (d1 + disc) * 0.5;
    let minus = (d1 - disc) * 0.5;
    let big = if plus.norm() >= minus.norm() { plus } else { minus };
    if big.norm() == 0.0 {
        let r = -a / 3.0;
        return [r, r, r];
    }
    let cbrt = big.powf(1.0 / 3.0);
    let xi = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    let mut rot = Complex64::new(1.0, 0.0);
    for r in roots.iter_mut() {
        let ck = rot * cbrt;
        *r = -(a + ck + d0 / ck) / 3.0;
        rot *= xi;
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(sol: &CubicSolution) -> Vec<f64> {
        let mut v: Vec<f64> = sol.roots.iter().map(|r| r.re).collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    #[test]
    fn factorizable_single_lorentzian() {
        // γ₂ = 0, λ₂ = 1: B = (s+1)(s² + 4s + 2)
        let p = ReservoirParams::new(1.0, 0.0, 4.0, 1.0).unwrap();
        let sol = characteristic_cubic(&p);
        let expected = [-2.0 - 2f64.sqrt(), -1.0, -2.0 + 2f64.sqrt()];
        for (got, want) in sorted_re(&sol).iter().zip(expected) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
        assert!(sol.roots.iter().all(|r| r.im == 0.0));
        assert!(!sol.is_degenerate());
    }

    #[test]
    fn uncoupled_roots() {
        let p = ReservoirParams::new(0.0, 0.0, 0.7, 3.0).unwrap();
        let sol = characteristic_cubic(&p);
        let v = sorted_re(&sol);
        assert!((v[0] + 3.0).abs() < 1e-14);
        assert!((v[1] + 0.7).abs() < 1e-14);
        assert!(v[2].abs() < 1e-14);
    }

    #[test]
    fn double_root_is_flagged() {
        // γ₁+γ₂ = λ/2 with λ₁ = λ₂ gives a double root at -λ/2.
        let p = ReservoirParams::new(0.25, 0.25, 1.0, 1.0).unwrap();
        let sol = characteristic_cubic(&p);
        assert!(sol.is_degenerate(), "{:?}", sol);
    }

    #[test]
    fn triple_zero_guard() {
        let r = solve_monic_cubic(0.0, 0.0, 0.0);
        assert!(r.iter().all(|z| z.norm() == 0.0));
    }
}
