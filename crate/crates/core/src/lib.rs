//! Entanglement, purity and energy dynamics of two atoms that fly through
//! separate single-mode thermal cavities.
//!
//! Each atom couples to its own cavity through a Jaynes-Cummings interaction
//! whose strength is modulated by the atomic motion across the mode profile.
//! The atoms start in the Bell state `(|eg> + |ge>) / sqrt 2`; the cavities
//! start in thermal states. [`analytic`] evaluates the reduced two-atom state
//! in closed form, [`oracle`] recomputes it by brute-force state-vector
//! propagation, and [`sweep`] drives time series and parameter scans.

pub mod analytic;
pub mod coupling;
pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod sweep;

pub use analytic::{density_matrix, density_matrix_resonant};
pub use coupling::{dressed_params, effective_coupling, DressedParams, EffectiveCoupling};
pub use error::{DynError, Result};
pub use model::{
    mean_photons_from_temperature, thermal_probability, truncation_index, AtomicDensityMatrix, SystemParams,
    ThermalDistribution, DEFAULT_EPSILON_TAIL,
};
pub use observables::{concurrence, energy, epe_point, purity, EpePoint};
pub use sweep::{epe_trajectory, scan, time_series, ScanConfig, SweepReport, TimeSeries};
