//! Single-atom density matrix and the two-atom X state reached from the
//! Bell-type input `(|eg⟩ + |ge⟩)/√2` under two independent reservoirs.
//!
//! Two-qubit matrices use the ordered basis `|ee⟩, |eg⟩, |ge⟩, |gg⟩`
//! (indices 0..4); single-qubit matrices use `|e⟩, |g⟩`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// `[[|M₁|², M₁M₀*], [M₀M₁*, 1-|M₁|²]]`.
pub fn single_atom_density(m1: Complex64, m0: Complex64) -> Result<Matrix2<Complex64>> {
    let norm = m1.norm_sqr() + m0.norm_sqr();
    if !norm.is_finite() || norm > 1.0 + NORM_TOL {
        return Err(Error::OutOfRange {
            value: norm,
            range: "|M0|^2 + |M1|^2 <= 1",
        });
    }
    let p = m1.norm_sqr();
    Ok(Matrix2::new(
        Complex64::new(p, 0.0),
        m1 * m0.conj(),
        m0 * m1.conj(),
        Complex64::new(1.0 - p, 0.0),
    ))
}

/// Two-qubit density matrix with support on the diagonal and the `|eg⟩`/`|ge⟩`
/// coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateDensity {
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub rho44: f64,
    pub rho23: Complex64,
}

impl XStateDensity {
    const TOL: f64 = 1e-12;

    pub fn validate(&self) -> Result<()> {
        let pops = [self.rho11, self.rho22, self.rho33, self.rho44];
        if pops.iter().any(|p| !(-Self::TOL..=1.0 + Self::TOL).contains(p)) {
            return Err(Error::NotDensityMatrix(format!("populations {pops:?} outside [0,1]")));
        }
        let tr: f64 = pops.iter().sum();
        if (tr - 1.0).abs() > Self::TOL {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}")));
        }
        if self.rho23.norm_sqr() > self.rho22 * self.rho33 + Self::TOL {
            return Err(Error::NotDensityMatrix("|rho23|^2 exceeds rho22*rho33".into()));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let r = |x: f64| Complex64::new(x, 0.0);
        let mut m = Matrix4::zeros();
        m[(0, 0)] = r(self.rho11);
        m[(1, 1)] = r(self.rho22);
        m[(2, 2)] = r(self.rho33);
        m[(3, 3)] = r(self.rho44);
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m
    }
}

/// X state of two atoms prepared in `(|eg⟩ + |ge⟩)/√2` once each has survival
/// probability `survival = |M₁(t)|²`.
pub fn bell_xstate(survival: f64) -> Result<XStateDensity> {
    if !(0.0..=1.0).contains(&survival) {
        return Err(Error::OutOfRange {
            value: survival,
            range: "[0, 1]",
        });
    }
    let half = 0.5 * survival;
    Ok(XStateDensity {
        rho11: 0.0,
        rho22: half,
        rho33: half,
        rho44: 1.0 - survival,
        rho23: Complex64::new(half, 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, CMatrix};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_atom_cases() {
        let e = single_atom_density(c(1.0), c(0.0)).unwrap();
        assert_eq!(e, Matrix2::new(c(1.0), c(0.0), c(0.0), c(0.0)));
        let g = single_atom_density(c(0.0), c(1.0)).unwrap();
        assert_eq!(g, Matrix2::new(c(0.0), c(0.0), c(0.0), c(1.0)));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = single_atom_density(c(h), c(h)).unwrap();
        for v in plus.iter() {
            assert!((v.re - 0.5).abs() < 1e-15 && v.im == 0.0);
        }
        assert!((plus.determinant()).norm() < 1e-15);
        assert!(single_atom_density(c(0.9), c(0.9)).is_err());
    }

    #[test]
    fn bell_endpoints() {
        let b = bell_xstate(1.0).unwrap();
        assert_eq!((b.rho22, b.rho33, b.rho23.re, b.rho44), (0.5, 0.5, 0.5, 0.0));
        let g = bell_xstate(0.0).unwrap();
        assert_eq!(g.rho44, 1.0);
        assert_eq!(g.rho23, c(0.0));
        assert!(bell_xstate(1.2).is_err());
        assert!(bell_xstate(-0.1).is_err());
        assert!(bell_xstate(f64::NAN).is_err());
    }

    #[test]
    fn half_survival_spectrum() {
        let x = bell_xstate(0.5).unwrap();
        assert_eq!((x.rho22, x.rho33, x.rho44), (0.25, 0.25, 0.5));
        let m = x.to_matrix();
        let d = CMatrix::from_iterator(4, 4, m.iter().copied());
        let ev = hermitian_eigenvalues(&d);
        let want = [0.0, 0.0, 0.5, 0.5];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-14, "{ev:?}");
        }
    }

    #[test]
    fn validation_catches_bad_coherence() {
        let mut x = bell_xstate(0.4).unwrap();
        x.rho23 = c(0.3);
        assert!(x.validate().is_err());
        assert!(bell_xstate(0.4).unwrap().validate().is_ok());
    }
}
