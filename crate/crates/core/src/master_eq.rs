//! Four-level Lindblad description of the atom and its two lossy pseudomodes.
//!
//! Basis order is `|g,0,0⟩, |e,0,0⟩, |g,1,0⟩, |g,0,1⟩`. The single-excitation
//! sector plus the global vacuum is closed under the generator, so no
//! truncation error is introduced. This module exists as an independent check
//! on [`crate::amplitude`].

use nalgebra::{DMatrix, Matrix4, SMatrix};
use num_complex::Complex64;

use crate::integrate::{integrate, Tolerances};
use crate::linalg::{hermitian_eigenvalues, max_hermitian_defect};
use crate::{Error, ReservoirParams, Result, TimeGrid};

pub type Matrix4c = Matrix4<Complex64>;

pub const GROUND: usize = 0;
pub const EXCITED: usize = 1;
pub const MODE1: usize = 2;
pub const MODE2: usize = 3;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-10;

/// Validated 4×4 density matrix of atom + pseudomodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourLevelState(Matrix4c);

impl FourLevelState {
    pub fn new(rho: Matrix4c) -> Result<Self> {
        let herm = max_hermitian_defect(&rho);
        if herm > HERMITIAN_TOL {
            return Err(Error::NotDensityMatrix(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}")));
        }
        let min = min_eigenvalue(&rho);
        if min < -POSITIVITY_TOL {
            return Err(Error::NotDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(rho))
    }

    pub fn basis_state(index: usize) -> Self {
        let mut m = Matrix4c::zeros();
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    pub fn excited() -> Self {
        Self::basis_state(EXCITED)
    }

    pub fn ground() -> Self {
        Self::basis_state(GROUND)
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.0
    }

    /// Atomic excited-state population, `|M₁|²` for a pure excited start.
    pub fn excited_population(&self) -> f64 {
        self.0[(EXCITED, EXCITED)].re
    }

    pub fn mode_populations(&self) -> [f64; 2] {
        [self.0[(MODE1, MODE1)].re, self.0[(MODE2, MODE2)].re]
    }

    pub fn trace_defect(&self) -> f64 {
        (self.0.trace() - Complex64::new(1.0, 0.0)).norm()
    }

    pub fn hermitian_defect(&self) -> f64 {
        max_hermitian_defect(&self.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.0)
    }
}

fn min_eigenvalue(m: &Matrix4c) -> f64 {
    // Eigenvalues of the Hermitian part; anti-Hermitian noise is checked
    // separately.
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let d = DMatrix::from_iterator(4, 4, h.iter().copied());
    hermitian_eigenvalues(&d)[0]
}

/// `ρ ↦ -i[H,ρ] - Σ_j λ_j (a_j†a_j ρ - 2 a_j ρ a_j† + ρ a_j†a_j)` in the frame
/// rotating at the atomic frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladGenerator {
    hamiltonian: Matrix4c,
    jumps: [(f64, Matrix4c); 2],
}

impl LindbladGenerator {
    pub fn hamiltonian(&self) -> &Matrix4c {
        &self.hamiltonian
    }

    pub fn apply(&self, rho: &Matrix4c) -> Matrix4c {
        let minus_i = Complex64::new(0.0, -1.0);
        let mut out = (self.hamiltonian * rho - rho * self.hamiltonian) * minus_i;
        for (rate, a) in &self.jumps {
            let ad = a.adjoint();
            let n = ad * a;
            let term = n * rho - a * rho * ad * Complex64::new(2.0, 0.0) + rho * n;
            out -= term * Complex64::new(*rate, 0.0);
        }
        out
    }

    /// Matrix of the generator acting on column-stacked `vec(ρ)`.
    pub fn superoperator(&self) -> SMatrix<Complex64, 16, 16> {
        let mut sup = SMatrix::<Complex64, 16, 16>::zeros();
        for col in 0..16 {
            let mut basis = Matrix4c::zeros();
            basis[(col % 4, col / 4)] = Complex64::new(1.0, 0.0);
            let image = self.apply(&basis);
            for (row, v) in image.iter().enumerate() {
                sup[(row, col)] = *v;
            }
        }
        sup
    }
}

pub fn lindblad_generator(params: &ReservoirParams) -> LindbladGenerator {
    let [g1, g2] = params.couplings();
    let [l1, l2] = params.lambdas();
    let mut h = Matrix4c::zeros();
    h[(EXCITED, MODE1)] = Complex64::new(g1, 0.0);
    h[(MODE1, EXCITED)] = Complex64::new(g1, 0.0);
    h[(EXCITED, MODE2)] = Complex64::new(g2, 0.0);
    h[(MODE2, EXCITED)] = Complex64::new(g2, 0.0);
    let lowering = |mode: usize| {
        let mut a = Matrix4c::zeros();
        a[(GROUND, mode)] = Complex64::new(1.0, 0.0);
        a
    };
    LindbladGenerator {
        hamiltonian: h,
        jumps: [(l1, lowering(MODE1)), (l2, lowering(MODE2))],
    }
}

/// Integrates the master equation on `grid` (same adaptive scheme and
/// tolerances as the amplitude ODE).
pub fn evolve_master(
    grid: &TimeGrid,
    params: &ReservoirParams,
    initial: &FourLevelState,
) -> Result<Vec<FourLevelState>> {
    let gen = lindblad_generator(params);
    let rhs = |_t: f64, y: &[Complex64; 16]| -> [Complex64; 16] {
        let rho = Matrix4c::from_column_slice(y);
        let d = gen.apply(&rho);
        let mut out = [Complex64::new(0.0, 0.0); 16];
        out.copy_from_slice(d.as_slice());
        out
    };
    let mut y0 = [Complex64::new(0.0, 0.0); 16];
    y0.copy_from_slice(initial.matrix().as_slice());
    let states = integrate(rhs, y0, grid.times(), &Tolerances::default())?;
    Ok(states
        .iter()
        .map(|y| FourLevelState(Matrix4c::from_column_slice(y)))
        .collect())
}
