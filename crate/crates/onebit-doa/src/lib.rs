//! Direction-of-arrival estimation from one-bit quantized array
//! snapshots.
//!
//! The library covers the full pipeline:
//!
//! * [`array`](mod@array) — array geometry, steering vectors, the
//!   narrowband signal model, analytic covariance/correlation formulas,
//!   and seeded snapshot synthesis;
//! * [`quantize`] — the complex one-bit quantizer
//!   `Q(z) = (sign(Re z) + j·sign(Im z))/√2`;
//! * [`covariance`] — sample covariance estimation plus the arcsine map,
//!   its sine inverse, and the scaled-identity approximation that lets
//!   subspace methods run on the one-bit covariance directly;
//! * [`music`] — Hermitian eigendecomposition, noise subspace, MUSIC
//!   pseudo-spectrum, and peak picking;
//! * [`experiments`] — a seeded, paired Monte-Carlo harness for RMSE and
//!   resolution studies over SNR, snapshot-count, and separation grids.
//!
//! All angles cross public boundaries in degrees. Everything is
//! deterministic given a seed, including parallel sweep execution.

pub mod array;
pub mod covariance;
pub mod error;
pub mod experiments;
pub mod music;
pub mod quantize;

pub use array::{
    analytic_covariance, correlation_vs_snr, generate_snapshots, steering_matrix,
    steering_vector, unquantized_correlation, ArrayGeometry, CorrelationPoint, SnapshotKind,
    SnapshotMatrix, SourceScenario,
};
pub use covariance::{
    analytic_onebit_covariance, approx_onebit_covariance, approximation_error, arcsine_map,
    reconstruct_unquantized, sample_covariance, CovarianceMatrix, CovarianceTag,
};
pub use error::{Error, Result};
pub use experiments::{
    approx_error_sweep, correlation_table, is_resolved, rmse, rmse_with_stderr, run_trial,
    single_estimate, sweep_separation, sweep_snapshots, sweep_snr, trial_seed, EstimatorVariant,
    ExperimentConfig, Metric, MetricRow, MetricTable,
};
pub use music::{
    default_grid, eigendecompose, estimate_doas, estimate_doas_on, grid_with_step,
    max_principal_angle, music_spectrum, music_spectrum_on, noise_subspace, pick_peaks,
    pseudospectrum_at, EigenSystem, NoiseSubspace, SpectrumGrid, SteeringGrid,
    DEFAULT_GRID_STEP_DEG, SPECTRUM_FLOOR,
};
