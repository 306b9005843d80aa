//! Quench dynamics of Jaynes-Cummings-Hubbard and Dicke quantum batteries.
//!
//! The pipeline is: enumerate a basis ([`basis`]), assemble the post-quench
//! Hamiltonian and the atomic energy observable ([`hamiltonians`]), evolve the
//! pre-quench state exactly ([`dynamics`]), then extract the charging power
//! `P_max = max_t E(t) / t` ([`battery`]). [`sweeps`] runs parameter scans and
//! fits scaling exponents.

pub mod basis;
pub mod battery;
pub mod dynamics;
pub mod error;
pub mod hamiltonians;
pub mod model;
pub mod operator;
pub mod sweeps;

pub use basis::{BasisIndex, DickeState, JchState};
pub use battery::{
    quench_power, EngineConfig, PowerMetric, PowerResult, QuenchReport, RabiParams, SearchConfig,
};
pub use error::{Error, Result};
pub use hamiltonians::ModelBasis;
pub use model::{CounterRotating, Model, ModelParams, Normalization, Topology};
pub use operator::{SparseOperatorMatrix, SymmetricOperatorMatrix};
pub use sweeps::{Axis, Scaling, SweepOptions, SweepRow, SweepSpec};
