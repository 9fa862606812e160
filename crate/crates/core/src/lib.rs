//! Information exclusion relations for quantum measurements.
//!
//! The crate builds view operators for generalized measurements, bounds the
//! weighted information an observer can gain from several measurements, and
//! applies those bounds to tomography, interferometric wave-particle
//! duality, memory-assisted guessing and entanglement detection.

pub mod conditional;
pub mod entanglement;
pub mod error;
pub mod interferometry;
pub mod io;
pub mod linalg;
pub mod measurements;
pub mod optimize;
pub mod random;
pub mod tolerance;
pub mod view;

pub use conditional::{BipartiteState, ClassicalQuantumState};
pub use entanglement::{EtaScanRow, ObservableCase, WitnessSpec};
pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, DensityState, Subsystem, C64};
pub use measurements::{Povm, WeightedEnsemble};
pub use optimize::OptimizerConfig;
pub use random::RngSpec;
pub use tolerance::Tolerances;
pub use view::{InfoAudit, ViewOperator};
