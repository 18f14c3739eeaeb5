//! Quantum-like (QL) state spaces built from biased expander graphs.
//!
//! A QL bit is two random `d`-regular graphs joined by sparse cross edges that
//! carry a unit-modulus bias. The Cartesian product of two QL bits has four
//! blocks whose emergent eigenvector spans an effective four-state space.
//! Mapping every vertex to a Kuramoto phase oscillator and rotating the
//! adjacency matrix by the instantaneous phases turns the oscillator ensemble
//! into a density matrix whose purity tracks synchronization of the network.
//!
//! Modules:
//! - [`graph`]: graph construction, products, block indicators, JSON form.
//! - [`spectrum`]: Hermitian eigendecomposition with deterministic phases.
//! - [`kuramoto`] and [`vonmises`]: oscillator sampling and RK4 dynamics.
//! - [`qlstate`]: phase transform, effective states, density matrices.
//! - [`lohe`]: the Lohe model on S³ and the QL-bit emulation experiment.
//! - [`scenario`] and [`output`]: ensemble runs, CSV/JSON/SVG artifacts.

pub mod error;
pub mod graph;
pub mod kuramoto;
pub mod lohe;
pub mod output;
pub mod qlstate;
pub mod scenario;
pub mod spectrum;
pub mod vonmises;

pub use error::{QlError, Result};
pub use graph::{BiasedGraph, BlockIndicator, Edge, InterCoupling};
pub use kuramoto::{CouplingSign, OrderParameter, OscillatorParams, PhaseState};
pub use qlstate::{DensityMatrix, EffectiveState, EmergentFrame, EmergentState};
pub use scenario::{RunRecord, ScenarioConfig};
pub use spectrum::Spectrum;

pub use num_complex::Complex64;
