//! Scattering of wave packets above a rectangular barrier: plane-wave
//! amplitudes and their multiple-reflection series, stationary-phase peak
//! predictions, packet synthesis by momentum quadrature, and a Crank-Nicolson
//! solver used as an independent check.

pub mod error;
pub mod grid;
pub mod peaks;
pub mod quadrature;
pub mod scattering;
pub mod scenario;
pub mod spectrum;
pub mod spm;
pub mod synthesis;
pub mod tdse;
pub mod tridiag;

pub use error::{Error, Result};
pub use grid::{Region, Snapshot, SpatialGrid};
pub use peaks::{Peak, PeakList};
pub use scattering::{AmplitudeSet, BarrierConfig, KinematicPoint, PartitionReport, SeriesTerm};
pub use scenario::Scenario;
pub use spectrum::GaussianSpectrum;
pub use spm::{Family, NaivePredictions, SpmPrediction};
pub use synthesis::{PacketIntegrand, QuadratureSpec, Source};
pub use tdse::{CnState, Discrepancy};
