//! Rényi-2 generalized Shannon mutual information (R2GSMI) of the critical
//! transverse-field Ising chain.
//!
//! The crate is organized bottom-up:
//!
//! - [`spin`]: bit-encoded state vectors, Pauli actions, basis rotations,
//!   bipartitions and Schmidt data.
//! - [`tfim`]: the periodic critical Hamiltonian, its Lanczos / dense ground
//!   state, and the binary ground-state cache format.
//! - [`channels`]: single-site Pauli dephasing channels on dense density
//!   matrices.
//! - [`doubled`]: the Choi supervector engine (vectorization, lifted
//!   channels, maximal depolarization, purity through norms).
//! - [`entropy`]: marginal distributions, Rényi-2 Shannon / entanglement /
//!   generalized entropies and the mutual-information assembly.
//! - [`scaling`]: least-squares fit of the chord-length scaling form.
//! - [`oracle`]: brute-force dense references used to validate every fast
//!   path.
//! - [`sweep`]: pure-state and decohered-state parameter sweeps shared by the
//!   command line tool and the acceptance suite.
//!
//! All entropies use the natural logarithm.

pub mod channels;
pub mod doubled;
pub mod entropy;
mod error;
pub mod oracle;
pub mod scaling;
pub mod spin;
pub mod sweep;
pub mod tfim;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use channels::{ChannelSpec, DenseDensityMatrix};
pub use doubled::SuperVector;
pub use entropy::{MarginalDistribution, MiInput, MiPoint, PurityAlgorithm};
pub use scaling::{FitPoint, FitResult, FitWindow};
pub use spin::{Axis, Bipartition, CoefficientMatrix, Region, SchmidtData, SpinConfig, StateVector};
pub use tfim::{GroundStateResult, SolverMethod, TfimModel};
