//! Spectral simulation of the linearized water-wave system in a rectangle
//! driven by a wave maker, and its shallow-water limit.
//!
//! Everything is diagonal in the cosine basis `φ_k` of `[0, π]`, so operators
//! are stored as eigenvalue arrays and time stepping is an exact rotation per
//! mode.

pub mod basis;
pub mod error;
pub mod evolution;
pub mod field;
pub mod kernels;
pub mod lab;
pub mod operators;

pub use basis::{ModalVector, SobolevScale, SpectralParams, DEFAULT_K_MODES, DEFAULT_L_MODES};
pub use error::{Error, Result};
pub use evolution::{evolve, make_initial, EvolutionState, InputSignal, ModalSystem, SignalShape, Trajectory};
pub use field::{FieldGrid, LateralProfile};
pub use lab::{run_sweep, SweepConfig, SweepReport};
pub use operators::{ntn_forcing, DtNSpectrum, LimitOperators, NtNProjection};
