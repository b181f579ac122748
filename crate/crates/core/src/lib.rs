//! Controllability of commuting Hamiltonians under Zeno projections.
//!
//! Pauli-string algebra, dense operators, dynamical Lie algebra closure,
//! projected (Zeno) dynamics, Hamiltonian purification, amplitude-damping
//! master equations and a catalogue of example systems.

pub mod dense;
pub mod dissipation;
pub mod error;
pub mod lie;
pub mod models;
pub mod pauli;
pub mod purification;
pub mod zeno;

pub use dense::{DenseOperator, StateVector};
pub use dissipation::{DensityMatrix, LindbladModel};
pub use error::{Error, Result};
pub use lie::{ClosureReport, LieBasis, RankTest};
pub use models::{ModelSpec, RandomCommutingPair};
pub use pauli::{Letter, PauliString, PauliSum, PauliTerm, Phase};
pub use purification::PurifiedPair;
pub use zeno::Projection;
