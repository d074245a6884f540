//! Two δ-switched Unruh–DeWitt detectors with Gaussian smearing in the
//! (3+1)D Minkowski vacuum, treated nonperturbatively.
//!
//! The pipeline is [`ModelParams`] → [`CorrelatorSet`] → [`XDensityMatrix`]
//! → [`MeasureSet`]. Everything works in units of the smearing width σ.

pub mod correlators;
pub mod error;
pub mod measures;
pub mod model;
pub mod quadrature;
pub mod reference;
pub mod special;
pub mod state;
pub mod sweep;
pub mod verify;

pub use correlators::{CorrelatorSet, DetectorParams, PairGeometry};
pub use error::{Error, Result};
pub use measures::{MeasureSet, Spectrum4};
pub use model::{ModelParams, PointResult};
pub use state::{FSignature, InitialState, XDensityMatrix};
pub use sweep::{emit_csv, figure_preset, run_sweep, Figure, SweepRow, SweepSpec, Vary};
pub use verify::{run_verify, VerifyConfig, VerifyReport};
