//! Doppler-resilient ground–Rydberg transitions for drifting neutral atoms.
//!
//! The crate simulates single-atom excitation and restoration protocols that
//! drive two Rydberg levels with opposite wavevectors, a gap protocol that
//! parks the Rydberg population with infrared fields, and a two-qubit
//! blockade gate built from them, alongside the single-rail baselines.
//!
//! Numerics are generic over [`Real`] (`f32` or `f64`); the `f64` aliases at
//! the crate root are what the command-line tool and tests use.

// `!(x > 0)` is used deliberately so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod error;
pub mod gate;
pub mod hamiltonian;
pub mod linalg;
pub mod model;
pub mod output;
pub mod propagator;
pub mod protocols;
pub mod scalar;
pub mod state;
pub mod units;

pub use error::{Error, Result};
pub use scalar::{Real, C};

/// Complex amplitude in double precision.
pub type Complex64 = C<f64>;
pub type State = state::ComplexState<f64>;
pub type Params = model::SimulationParams<f64>;
pub type Matrix = linalg::CMatrix<f64>;
pub type Trajectory = propagator::TrajectoryResult<f64>;
pub type Outcome = protocols::ProtocolOutcome<f64>;
pub type GateReport = gate::GateReport<f64>;
pub type GateParams = gate::GateParams<f64>;
