//! Non-Markovianity of open two-qubit dynamics quantified through local
//! quantum Fisher information (LQFI) and local quantum uncertainty (LQU).
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: small dense complex matrices, Jacobi eigensolver, PSD square root.
//! * [`states`]: validated two-qubit density matrices and initial states.
//! * [`measures`]: LQFI, LQU, their per-observable kernels and a brute-force oracle.
//! * [`channels`]: closed-form evolved states for dephasing, amplitude damping
//!   and telegraph-noise depolarizing channels, plus numerical oracles.
//! * [`nonmarkov`]: detection of measure-increase intervals and the accumulated
//!   increase N over a time window.
//!
//! [`quadrature`] and [`special`] hold the numerical support routines.

pub mod channels;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod nonmarkov;
pub mod quadrature;
pub mod special;
pub mod states;

pub use channels::{
    AmplitudeDampingParams, ChannelSpec, DephasingParams, DepolarizingParams,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenSystem};
pub use measures::{BlochVector, CorrelationMatrix3, Kernel, MeasurePair};
pub use nonmarkov::{IncreaseInterval, NonMarkovReport, Trajectory, Window};
pub use states::{CorrelationTriple, DensityMatrix};
