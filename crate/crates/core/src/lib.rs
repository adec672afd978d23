//! Exact single-excitation dynamics of a two-level atom coupled to a
//! double-Lorentzian zero-temperature reservoir, and the entanglement
//! diagnostics built on top of it.
//!
//! The reservoir is replaced by two lossy pseudomodes. The excited-state
//! amplitude is available from two independent routes ([`amplitude`]: a
//! residue sum over the roots of the characteristic cubic, and direct
//! integration of the pseudomode equations), with a third route through the
//! four-level Lindblad equation in [`master_eq`].
//!
//! Two identical copies of the atom prepared in `(|eg> + |ge>)/√2` give an
//! X state ([`two_qubit`]) whose concurrence equals the survival
//! probability. [`quantifiers`] turns that into the entropic-uncertainty
//! lower bound and the witness windows where it drops below one bit,
//! [`zeno`] adds stroboscopic projective measurements, and [`nonmarkov`]
//! evaluates the trace-distance (BLP) non-Markovianity.
//!
//! All dynamics are computed in the frame rotating at the atomic frequency.
//! Rates are in units of a reference rate and times in its inverse.

// Validation is written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitude;
mod error;
pub mod grid;
pub mod integrate;
pub mod linalg;
pub mod master_eq;
pub mod nonmarkov;
pub mod params;
pub mod quantifiers;
pub mod roots;
pub mod two_qubit;
pub mod zeno;

pub use amplitude::{
    amplitude_ode, amplitude_residue, characteristic_cubic, AmplitudeSolver, AmplitudeTrajectory,
    CubicSolution, PseudomodeState,
};
pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use master_eq::{evolve_master, lindblad_generator, FourLevelState, LindbladGenerator};
pub use nonmarkov::{
    blp_measure, contour_scan, trace_distance, BlpOptions, ContourAxis, ContourMap, ContourSpec,
    NonMarkovResult,
};
pub use params::{correlation_kernel, spectral_density, ReservoirParams};
pub use quantifiers::{
    concurrence_wootters, concurrence_x, eur_lhs, leu, von_neumann_entropy, witness_threshold,
    witness_trace, witness_windows, WitnessTrace, WitnessWindow,
};
pub use two_qubit::{bell_xstate, single_atom_density, XStateDensity};
pub use zeno::{
    asymptotic_decay_rate, effective_decay_rate, zeno_concurrence, zeno_witness_trace, DecayRate, MeasurementProtocol,
    ZenoSchedule,
};

pub use num_complex::Complex64;
