//! Seeded Monte-Carlo harness: the three estimator variants, RMSE and
//! resolution-probability sweeps, and the deterministic
//! approximation-error sweep.
//!
//! Determinism contract: every trial derives its own RNG seed from the
//! master seed and the trial index alone, trials are aggregated in trial
//! order, and all three estimator variants of a given trial consume the
//! same snapshot realization. A sweep therefore produces identical output
//! for any number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array::{
    correlation_vs_snr, generate_snapshots, ArrayGeometry, SnapshotMatrix, SourceScenario,
};
use crate::covariance::{
    analytic_onebit_covariance, approx_onebit_covariance, approximation_error,
    reconstruct_unquantized, sample_covariance, CovarianceMatrix,
};
use crate::error::{Error, Result};
use crate::music::{estimate_doas_on, grid_with_step, SteeringGrid};
use crate::quantize::quantize_snapshots;

/// Which covariance path feeds MUSIC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorVariant {
    /// MUSIC on the one-bit sample covariance, no pre-processing.
    OneBitMusic,
    /// MUSIC on the sine-map reconstruction of the one-bit covariance.
    ReconOneBitMusic,
    /// MUSIC on the sample covariance of the unquantized snapshots.
    UnquantizedMusic,
}

impl EstimatorVariant {
    pub fn all() -> [EstimatorVariant; 3] {
        [
            EstimatorVariant::OneBitMusic,
            EstimatorVariant::ReconOneBitMusic,
            EstimatorVariant::UnquantizedMusic,
        ]
    }

    pub fn label(&self) -> &'static str {
        match self {
            EstimatorVariant::OneBitMusic => "one-bit-music",
            EstimatorVariant::ReconOneBitMusic => "recon-one-bit-music",
            EstimatorVariant::UnquantizedMusic => "unquantized-music",
        }
    }
}

impl std::fmt::Display for EstimatorVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for EstimatorVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-bit-music" => Ok(EstimatorVariant::OneBitMusic),
            "recon-one-bit-music" => Ok(EstimatorVariant::ReconOneBitMusic),
            "unquantized-music" => Ok(EstimatorVariant::UnquantizedMusic),
            other => Err(Error::usage(format!(
                "unknown estimator variant '{other}' (expected one-bit-music, \
                 recon-one-bit-music, or unquantized-music)"
            ))),
        }
    }
}

/// Full description of a sweep: scenario family, grids, trial budget and
/// master seed. Noise power is fixed at 1, so per-source power equals the
/// linear SNR.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub geometry: ArrayGeometry,
    pub doas_deg: Vec<f64>,
    pub snr_grid_db: Vec<f64>,
    pub snapshot_grid: Vec<usize>,
    pub trial_count: usize,
    pub seed: u64,
    pub grid_step_deg: f64,
    pub separation_grid_deg: Vec<f64>,
    pub variants: Vec<EstimatorVariant>,
}

impl Default for ExperimentConfig {
    /// The default scenario of the experiment suite: a 10-element
    /// half-wavelength ULA with equal-power sources at −10° and 3.5°.
    fn default() -> Self {
        Self {
            geometry: ArrayGeometry::half_wavelength_ula(10).expect("valid default ULA"),
            doas_deg: vec![-10.0, 3.5],
            snr_grid_db: vec![-10.0, 0.0, 10.0],
            snapshot_grid: vec![100, 500, 1000],
            trial_count: 200,
            seed: 42,
            grid_step_deg: crate::music::DEFAULT_GRID_STEP_DEG,
            separation_grid_deg: (1..=10).map(f64::from).collect(),
            variants: EstimatorVariant::all().to_vec(),
        }
    }
}

impl ExperimentConfig {
    /// Check every grid and bound. An empty variant list is allowed and
    /// simply produces empty sweep tables.
    pub fn validate(&self) -> Result<()> {
        let m = self.geometry.element_count();
        if self.doas_deg.is_empty() {
            return Err(Error::usage("doas_deg must be non-empty"));
        }
        if self.doas_deg.len() >= m {
            return Err(Error::domain(format!(
                "{} sources need more than {} sensors",
                self.doas_deg.len(),
                m
            )));
        }
        for &theta in &self.doas_deg {
            if !(theta.is_finite() && theta > -90.0 && theta < 90.0) {
                return Err(Error::domain(format!(
                    "doas_deg entry {theta} must lie strictly inside (-90, 90)"
                )));
            }
        }
        for (i, &a) in self.doas_deg.iter().enumerate() {
            if self.doas_deg[i + 1..].contains(&a) {
                return Err(Error::domain(format!("doas_deg contains duplicate {a}")));
            }
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::usage("snr_grid_db must be non-empty"));
        }
        if self.snr_grid_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::domain("snr_grid_db entries must be finite"));
        }
        if self.snapshot_grid.is_empty() {
            return Err(Error::usage("snapshot_grid must be non-empty"));
        }
        if self.snapshot_grid.contains(&0) {
            return Err(Error::domain("snapshot_grid entries must be at least 1"));
        }
        if self.trial_count == 0 {
            return Err(Error::domain("trial_count must be at least 1"));
        }
        grid_with_step(self.grid_step_deg)?;
        if self.separation_grid_deg.is_empty() {
            return Err(Error::usage("separation_grid_deg must be non-empty"));
        }
        if self
            .separation_grid_deg
            .iter()
            .any(|d| !(d.is_finite() && *d > 0.0))
        {
            return Err(Error::domain(
                "separation_grid_deg entries must be positive and finite",
            ));
        }
        Ok(())
    }

    fn search_grid(&self) -> Result<Vec<f64>> {
        grid_with_step(self.grid_step_deg)
    }
}

/// Metric names carried by result rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    RmseDeg,
    Err,
    ResolutionProb,
    RhoRe,
    RhoIm,
    Spectrum,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::RmseDeg => "rmse_deg",
            Metric::Err => "err",
            Metric::ResolutionProb => "resolution_prob",
            Metric::RhoRe => "rho_re",
            Metric::RhoIm => "rho_im",
            Metric::Spectrum => "spectrum",
        }
    }
}

/// One aggregated result: a metric value for one variant at one point of
/// the sweep, with its trial count and standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub sweep_var: &'static str,
    pub sweep_value: f64,
    pub variant: String,
    pub metric: Metric,
    pub value: f64,
    pub trials: u64,
    pub stderr: f64,
}

/// A sweep result set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricTable {
    pub rows: Vec<MetricRow>,
}

impl MetricTable {
    /// Canonical row order: sweep value, then variant, then metric name
    /// (sweep variable as the final tiebreak).
    pub fn sort_rows(&mut self) {
        self.rows.sort_by(|a, b| {
            a.sweep_value
                .total_cmp(&b.sweep_value)
                .then_with(|| a.variant.cmp(&b.variant))
                .then_with(|| a.metric.as_str().cmp(b.metric.as_str()))
                .then_with(|| a.sweep_var.cmp(b.sweep_var))
        });
    }
}

/// SplitMix64 finalizer, used to spread trial indices into seeds.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one Monte-Carlo trial. Pure function of the master seed and
/// the trial index, so any execution order reproduces the same data.
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ trial_index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Root-mean-square error (degrees) over a batch of trials:
/// `√( Σ_r Σ_i (θ̂ᵢ,ᵣ − θᵢ)² / (R·K) )`, pairing each trial's estimates
/// with the truth by ascending rank.
pub fn rmse(estimates_per_trial: &[Vec<f64>], truth: &[f64]) -> Result<f64> {
    rmse_with_stderr(estimates_per_trial, truth).map(|(value, _)| value)
}

/// [`rmse`] plus its standard error, propagated from the spread of the
/// per-trial mean squared errors by the delta method.
pub fn rmse_with_stderr(estimates_per_trial: &[Vec<f64>], truth: &[f64]) -> Result<(f64, f64)> {
    if estimates_per_trial.is_empty() {
        return Err(Error::usage("RMSE needs at least one trial"));
    }
    if truth.is_empty() {
        return Err(Error::usage("RMSE needs at least one true angle"));
    }
    let k = truth.len();
    let mut truth_sorted = truth.to_vec();
    truth_sorted.sort_by(f64::total_cmp);

    let mut per_trial_mse = Vec::with_capacity(estimates_per_trial.len());
    for (r, estimates) in estimates_per_trial.iter().enumerate() {
        if estimates.len() != k {
            return Err(Error::usage(format!(
                "trial {r} has {} estimates for {k} true angles",
                estimates.len()
            )));
        }
        let mut sorted = estimates.clone();
        sorted.sort_by(f64::total_cmp);
        let sq_sum: f64 = sorted
            .iter()
            .zip(&truth_sorted)
            .map(|(est, tru)| (est - tru).powi(2))
            .sum();
        per_trial_mse.push(sq_sum / k as f64);
    }

    let r = per_trial_mse.len() as f64;
    let mse = per_trial_mse.iter().sum::<f64>() / r;
    let value = mse.sqrt();
    let stderr = if per_trial_mse.len() < 2 || value == 0.0 {
        0.0
    } else {
        let var = per_trial_mse
            .iter()
            .map(|s| (s - mse).powi(2))
            .sum::<f64>()
            / (r - 1.0);
        (var / r).sqrt() / (2.0 * value)
    };
    Ok((value, stderr))
}

/// Resolution criterion for a two-source trial: both estimates must sit
/// strictly within half the angular separation of their rank-paired true
/// angles.
pub fn is_resolved(estimates: &[f64], truth: &[f64], separation_deg: f64) -> Result<bool> {
    if estimates.len() != 2 || truth.len() != 2 {
        return Err(Error::usage(format!(
            "resolution check needs exactly two estimates and two truths, got {} and {}",
            estimates.len(),
            truth.len()
        )));
    }
    if !(separation_deg.is_finite() && separation_deg > 0.0) {
        return Err(Error::domain(format!(
            "separation must be positive and finite, got {separation_deg}"
        )));
    }
    let mut est = [estimates[0], estimates[1]];
    let mut tru = [truth[0], truth[1]];
    est.sort_by(f64::total_cmp);
    tru.sort_by(f64::total_cmp);
    let half = separation_deg / 2.0;
    Ok((est[0] - tru[0]).abs() < half && (est[1] - tru[1]).abs() < half)
}

/// Covariance matrix a variant feeds to MUSIC, computed from one
/// unquantized snapshot block.
pub fn covariance_for_variant(
    snapshots: &SnapshotMatrix,
    variant: EstimatorVariant,
) -> Result<CovarianceMatrix> {
    match variant {
        EstimatorVariant::UnquantizedMusic => Ok(sample_covariance(snapshots)),
        EstimatorVariant::OneBitMusic => {
            Ok(sample_covariance(&quantize_snapshots(snapshots)?))
        }
        EstimatorVariant::ReconOneBitMusic => {
            reconstruct_unquantized(&sample_covariance(&quantize_snapshots(snapshots)?))
        }
    }
}

/// Run one seeded trial of one estimator variant and return its DOA
/// estimates (ascending). Trials with the same seed share the snapshot
/// realization across variants, so comparisons are paired.
pub fn run_trial(
    geometry: &ArrayGeometry,
    scenario: &SourceScenario,
    n_snapshots: usize,
    variant: EstimatorVariant,
    grid_deg: &[f64],
    trial_seed: u64,
) -> Result<Vec<f64>> {
    let steering = SteeringGrid::new(geometry, grid_deg)?;
    let estimates = run_trial_all_on(
        geometry,
        scenario,
        n_snapshots,
        &[variant],
        &steering,
        trial_seed,
    )?;
    Ok(estimates.into_iter().next().expect("one variant requested"))
}

/// Run one seeded trial for several variants at once, reusing the
/// snapshot block and the one-bit Gram matrix across variants.
fn run_trial_all_on(
    geometry: &ArrayGeometry,
    scenario: &SourceScenario,
    n_snapshots: usize,
    variants: &[EstimatorVariant],
    steering: &SteeringGrid,
    trial_seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let k = scenario.source_count();
    let snapshots = generate_snapshots(geometry, scenario, n_snapshots, trial_seed)?;
    let needs_one_bit = variants.iter().any(|v| {
        matches!(
            v,
            EstimatorVariant::OneBitMusic | EstimatorVariant::ReconOneBitMusic
        )
    });
    let one_bit_cov = if needs_one_bit {
        Some(sample_covariance(&quantize_snapshots(&snapshots)?))
    } else {
        None
    };

    variants
        .iter()
        .map(|variant| {
            let cov = match variant {
                EstimatorVariant::UnquantizedMusic => sample_covariance(&snapshots),
                EstimatorVariant::OneBitMusic => {
                    one_bit_cov.clone().expect("one-bit covariance prepared")
                }
                EstimatorVariant::ReconOneBitMusic => {
                    reconstruct_unquantized(one_bit_cov.as_ref().expect("prepared"))?
                }
            };
            estimate_doas_on(&cov, k, steering)
        })
        .collect()
}

/// All trials of one sweep cell, parallel over trials, results in trial
/// order: `result[trial][variant]` holds the estimates.
fn run_cell(
    geometry: &ArrayGeometry,
    scenario: &SourceScenario,
    n_snapshots: usize,
    variants: &[EstimatorVariant],
    steering: &SteeringGrid,
    master_seed: u64,
    trial_count: usize,
) -> Result<Vec<Vec<Vec<f64>>>> {
    (0..trial_count)
        .into_par_iter()
        .map(|r| {
            run_trial_all_on(
                geometry,
                scenario,
                n_snapshots,
                variants,
                steering,
                trial_seed(master_seed, r as u64),
            )
        })
        .collect()
}

fn rmse_rows_for_cell(
    table: &mut MetricTable,
    sweep_var: &'static str,
    sweep_value: f64,
    variant_context: &str,
    variants: &[EstimatorVariant],
    per_trial: &[Vec<Vec<f64>>],
    truth: &[f64],
) -> Result<()> {
    for (vi, variant) in variants.iter().enumerate() {
        let estimates: Vec<Vec<f64>> =
            per_trial.iter().map(|trial| trial[vi].clone()).collect();
        let (value, stderr) = rmse_with_stderr(&estimates, truth)?;
        table.rows.push(MetricRow {
            sweep_var,
            sweep_value,
            variant: format!("{variant}{variant_context}"),
            metric: Metric::RmseDeg,
            value,
            trials: estimates.len() as u64,
            stderr,
        });
    }
    Ok(())
}

/// RMSE versus SNR for every snapshot count in the grid (the
/// `[n=…]` suffix on the variant label keys the curves).
pub fn sweep_snr(config: &ExperimentConfig) -> Result<MetricTable> {
    config.validate()?;
    let mut table = MetricTable::default();
    if config.variants.is_empty() {
        return Ok(table);
    }
    let steering = SteeringGrid::new(&config.geometry, &config.search_grid()?)?;
    for &n_snapshots in &config.snapshot_grid {
        let context = format!("[n={n_snapshots}]");
        for &snr_db in &config.snr_grid_db {
            let scenario = SourceScenario::equal_power(config.doas_deg.clone(), snr_db)?;
            let per_trial = run_cell(
                &config.geometry,
                &scenario,
                n_snapshots,
                &config.variants,
                &steering,
                config.seed,
                config.trial_count,
            )?;
            rmse_rows_for_cell(
                &mut table,
                "snr_db",
                snr_db,
                &context,
                &config.variants,
                &per_trial,
                &config.doas_deg,
            )?;
        }
    }
    Ok(table)
}

/// RMSE versus snapshot count for every SNR in the grid.
pub fn sweep_snapshots(config: &ExperimentConfig) -> Result<MetricTable> {
    config.validate()?;
    let mut table = MetricTable::default();
    if config.variants.is_empty() {
        return Ok(table);
    }
    let steering = SteeringGrid::new(&config.geometry, &config.search_grid()?)?;
    for &snr_db in &config.snr_grid_db {
        let context = format!("[snr={snr_db}dB]");
        let scenario = SourceScenario::equal_power(config.doas_deg.clone(), snr_db)?;
        for &n_snapshots in &config.snapshot_grid {
            let per_trial = run_cell(
                &config.geometry,
                &scenario,
                n_snapshots,
                &config.variants,
                &steering,
                config.seed,
                config.trial_count,
            )?;
            rmse_rows_for_cell(
                &mut table,
                "n_snapshots",
                n_snapshots as f64,
                &context,
                &config.variants,
                &per_trial,
                &config.doas_deg,
            )?;
        }
    }
    Ok(table)
}

/// Resolution probability versus angular separation. Sources sit at the
/// first configured DOA and that angle plus Δ; the snapshot count is the
/// largest entry of the snapshot grid.
pub fn sweep_separation(config: &ExperimentConfig) -> Result<MetricTable> {
    config.validate()?;
    let mut table = MetricTable::default();
    if config.variants.is_empty() {
        return Ok(table);
    }
    let base = config.doas_deg[0];
    let n_snapshots = *config
        .snapshot_grid
        .iter()
        .max()
        .expect("validated non-empty");
    let steering = SteeringGrid::new(&config.geometry, &config.search_grid()?)?;
    for &snr_db in &config.snr_grid_db {
        let context = format!("[snr={snr_db}dB]");
        for &delta in &config.separation_grid_deg {
            let second = base + delta;
            if second >= 90.0 {
                return Err(Error::domain(format!(
                    "separation {delta}° pushes the second source to {second}°, \
                     outside (-90°, 90°)"
                )));
            }
            let truth = vec![base, second];
            let scenario = SourceScenario::equal_power(truth.clone(), snr_db)?;
            let per_trial = run_cell(
                &config.geometry,
                &scenario,
                n_snapshots,
                &config.variants,
                &steering,
                config.seed,
                config.trial_count,
            )?;
            for (vi, variant) in config.variants.iter().enumerate() {
                let mut resolved = 0usize;
                for trial in &per_trial {
                    if is_resolved(&trial[vi], &truth, delta)? {
                        resolved += 1;
                    }
                }
                let r = config.trial_count as f64;
                let prob = resolved as f64 / r;
                table.rows.push(MetricRow {
                    sweep_var: "separation_deg",
                    sweep_value: delta,
                    variant: format!("{variant}{context}"),
                    metric: Metric::ResolutionProb,
                    value: prob,
                    trials: config.trial_count as u64,
                    stderr: (prob * (1.0 - prob) / r).sqrt(),
                });
            }
        }
    }
    Ok(table)
}

/// Deterministic approximation-error sweep: for each SNR, build the
/// analytic unquantized covariance, its exact one-bit image under the
/// arcsine law, and the scaled-identity surrogate, and report the
/// relative Frobenius error between the last two. No Monte-Carlo.
pub fn approx_error_sweep(
    geometry: &ArrayGeometry,
    doas_deg: &[f64],
    snr_grid_db: &[f64],
) -> Result<MetricTable> {
    if snr_grid_db.is_empty() {
        return Err(Error::usage("snr_grid_db must be non-empty"));
    }
    let mut table = MetricTable::default();
    for &snr_db in snr_grid_db {
        let scenario = SourceScenario::equal_power(doas_deg.to_vec(), snr_db)?;
        let r_x = crate::array::analytic_covariance(geometry, &scenario)?;
        let r_y = analytic_onebit_covariance(geometry, &scenario)?;
        let approx = approx_onebit_covariance(&r_x, scenario.total_sensor_power())?;
        table.rows.push(MetricRow {
            sweep_var: "snr_db",
            sweep_value: snr_db,
            variant: "analytic".to_string(),
            metric: Metric::Err,
            value: approximation_error(&approx, &r_y)?,
            trials: 1,
            stderr: 0.0,
        });
    }
    Ok(table)
}

/// Real and imaginary parts of the equal-power correlation coefficient of
/// one sensor pair across an SNR grid, as table rows.
pub fn correlation_table(
    geometry: &ArrayGeometry,
    doas_deg: &[f64],
    sensor_m: usize,
    sensor_n: usize,
    snr_grid_db: &[f64],
) -> Result<MetricTable> {
    let points = correlation_vs_snr(geometry, doas_deg, sensor_m, sensor_n, snr_grid_db)?;
    let mut table = MetricTable::default();
    for point in points {
        for (metric, value) in [(Metric::RhoRe, point.rho.re), (Metric::RhoIm, point.rho.im)] {
            table.rows.push(MetricRow {
                sweep_var: "snr_db",
                sweep_value: point.snr_db,
                variant: "analytic".to_string(),
                metric,
                value,
                trials: 1,
                stderr: 0.0,
            });
        }
    }
    Ok(table)
}

/// One seeded estimation run plus its spectrum, for the CLI front-end.
pub fn single_estimate(
    geometry: &ArrayGeometry,
    scenario: &SourceScenario,
    n_snapshots: usize,
    variant: EstimatorVariant,
    grid_deg: &[f64],
    seed: u64,
) -> Result<(Vec<f64>, crate::music::SpectrumGrid)> {
    let snapshots = generate_snapshots(geometry, scenario, n_snapshots, seed)?;
    let cov = covariance_for_variant(&snapshots, variant)?;
    let eig = crate::music::eigendecompose(&cov)?;
    let subspace = crate::music::noise_subspace(&eig, scenario.source_count())?;
    let spectrum = crate::music::music_spectrum(&subspace, geometry, grid_deg)?;
    let peaks = crate::music::pick_peaks(&spectrum, scenario.source_count())?;
    Ok((peaks, spectrum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            trial_count: 3,
            snr_grid_db: vec![0.0],
            snapshot_grid: vec![64],
            grid_step_deg: 0.5,
            ..ExperimentConfig::default()
        }
    }

    // ---------------------------------------------------------- rmse

    #[test]
    fn rmse_zero_for_exact_estimates() {
        let truth = [3.5, -10.0];
        let trials = vec![vec![-10.0, 3.5], vec![3.5, -10.0]];
        assert_eq!(rmse(&trials, &truth).unwrap(), 0.0);
    }

    #[test]
    fn rmse_single_trial_single_source() {
        assert_abs_diff_eq!(
            rmse(&[vec![12.0]], &[10.0]).unwrap(),
            2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn rmse_hand_evaluated_case() {
        // Errors (1°, −1°, 0°, 2°) over R = 2, K = 2 → √(6/4).
        let truth = [0.0, 10.0];
        let trials = vec![vec![1.0, 9.0], vec![0.0, 12.0]];
        assert_abs_diff_eq!(
            rmse(&trials, &truth).unwrap(),
            (6.0f64 / 4.0).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn rmse_pairs_by_rank_not_position() {
        let truth = [10.0, 0.0];
        let trials = vec![vec![10.5, -0.5]];
        // Sorted pairing: (-0.5 vs 0) and (10.5 vs 10).
        assert_abs_diff_eq!(
            rmse(&trials, &truth).unwrap(),
            (0.25f64).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn rmse_rejects_mismatched_lengths() {
        assert!(rmse(&[vec![1.0]], &[1.0, 2.0]).is_err());
        assert!(rmse(&[], &[1.0]).is_err());
    }

    #[test]
    fn rmse_stderr_shrinks_with_more_trials() {
        let truth = [0.0];
        let noisy: Vec<Vec<f64>> = (0..16).map(|i| vec![(i % 5) as f64 * 0.1]).collect();
        let (_, se_small) = rmse_with_stderr(&noisy[..4], &truth).unwrap();
        let (_, se_large) = rmse_with_stderr(&noisy, &truth).unwrap();
        assert!(se_large < se_small);
        let (_, se_single) = rmse_with_stderr(&noisy[..1], &truth).unwrap();
        assert_eq!(se_single, 0.0);
    }

    // ---------------------------------------------------------- resolution

    #[test]
    fn resolution_exact_estimates_resolve() {
        assert!(is_resolved(&[-10.0, -9.0], &[-10.0, -9.0], 1.0).unwrap());
    }

    #[test]
    fn resolution_boundary_bias_fails() {
        // Bias of exactly Δ/2 must not count as resolved.
        assert!(!is_resolved(&[-9.5, -9.0], &[-10.0, -9.0], 1.0).unwrap());
    }

    #[test]
    fn resolution_interior_biases_resolve() {
        assert!(is_resolved(&[-9.6, -9.4], &[-10.0, -9.0], 1.0).unwrap());
    }

    #[test]
    fn resolution_validates_arity() {
        assert!(is_resolved(&[1.0], &[1.0, 2.0], 1.0).is_err());
        assert!(is_resolved(&[1.0, 2.0], &[1.0, 2.0], 0.0).is_err());
    }

    // ---------------------------------------------------------- trials

    #[test]
    fn trial_seeds_are_deterministic_and_spread() {
        let a = trial_seed(42, 0);
        assert_eq!(a, trial_seed(42, 0));
        let seeds: std::collections::HashSet<u64> =
            (0..512).map(|r| trial_seed(42, r)).collect();
        assert_eq!(seeds.len(), 512);
        assert_ne!(trial_seed(42, 0), trial_seed(43, 0));
    }

    #[test]
    fn run_trial_is_seed_deterministic() {
        let config = ExperimentConfig::default();
        let scenario = SourceScenario::equal_power(config.doas_deg.clone(), 0.0).unwrap();
        let grid = grid_with_step(0.5).unwrap();
        let a = run_trial(
            &config.geometry,
            &scenario,
            128,
            EstimatorVariant::OneBitMusic,
            &grid,
            7,
        )
        .unwrap();
        let b = run_trial(
            &config.geometry,
            &scenario,
            128,
            EstimatorVariant::OneBitMusic,
            &grid,
            7,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unquantized_high_snr_trial_is_sharp() {
        let config = ExperimentConfig::default();
        let scenario = SourceScenario::equal_power(config.doas_deg.clone(), 30.0).unwrap();
        let grid = grid_with_step(0.05).unwrap();
        let estimates = run_trial(
            &config.geometry,
            &scenario,
            1000,
            EstimatorVariant::UnquantizedMusic,
            &grid,
            11,
        )
        .unwrap();
        assert_abs_diff_eq!(estimates[0], -10.0, epsilon = 0.2);
        assert_abs_diff_eq!(estimates[1], 3.5, epsilon = 0.2);
    }

    // ---------------------------------------------------------- sweeps

    #[test]
    fn sweep_snr_degenerate_config_gives_one_row_per_variant() {
        let config = ExperimentConfig {
            trial_count: 1,
            snr_grid_db: vec![0.0],
            snapshot_grid: vec![32],
            grid_step_deg: 1.0,
            ..ExperimentConfig::default()
        };
        let table = sweep_snr(&config).unwrap();
        assert_eq!(table.rows.len(), 3);
        for row in &table.rows {
            assert_eq!(row.sweep_var, "snr_db");
            assert_eq!(row.metric, Metric::RmseDeg);
            assert_eq!(row.trials, 1);
            assert!(row.value >= 0.0 && row.value.is_finite());
        }
    }

    #[test]
    fn sweep_with_empty_variant_list_is_empty() {
        let config = ExperimentConfig {
            variants: vec![],
            ..small_config()
        };
        assert!(sweep_snr(&config).unwrap().rows.is_empty());
        assert!(sweep_snapshots(&config).unwrap().rows.is_empty());
        assert!(sweep_separation(&config).unwrap().rows.is_empty());
    }

    #[test]
    fn sweeps_reject_invalid_configs() {
        let mut config = small_config();
        config.trial_count = 0;
        assert!(sweep_snr(&config).is_err());

        let mut config = small_config();
        config.snr_grid_db.clear();
        assert!(sweep_snr(&config).is_err());

        let mut config = small_config();
        config.snapshot_grid = vec![0];
        assert!(sweep_snapshots(&config).is_err());

        let mut config = small_config();
        config.separation_grid_deg = vec![-1.0];
        assert!(sweep_separation(&config).is_err());

        let mut config = small_config();
        config.separation_grid_deg = vec![150.0];
        assert!(sweep_separation(&config).is_err());
    }

    #[test]
    fn sweep_snapshots_labels_carry_snr_context() {
        let config = ExperimentConfig {
            trial_count: 2,
            snr_grid_db: vec![-10.0, 0.0],
            snapshot_grid: vec![32, 64],
            grid_step_deg: 1.0,
            variants: vec![EstimatorVariant::OneBitMusic],
            ..ExperimentConfig::default()
        };
        let table = sweep_snapshots(&config).unwrap();
        assert_eq!(table.rows.len(), 4);
        assert!(table
            .rows
            .iter()
            .any(|row| row.variant == "one-bit-music[snr=-10dB]"));
        assert!(table
            .rows
            .iter()
            .any(|row| row.sweep_var == "n_snapshots" && row.sweep_value == 64.0));
    }

    #[test]
    fn separation_sweep_probability_bounds() {
        let config = ExperimentConfig {
            trial_count: 4,
            snr_grid_db: vec![10.0],
            snapshot_grid: vec![128],
            separation_grid_deg: vec![4.0, 8.0],
            grid_step_deg: 0.25,
            variants: vec![EstimatorVariant::UnquantizedMusic],
            ..ExperimentConfig::default()
        };
        let table = sweep_separation(&config).unwrap();
        assert_eq!(table.rows.len(), 2);
        for row in &table.rows {
            assert!((0.0..=1.0).contains(&row.value));
            assert_eq!(row.metric, Metric::ResolutionProb);
        }
    }

    // ---------------------------------------------------------- analytic sweeps

    #[test]
    fn approx_error_vanishes_at_very_low_snr() {
        let geometry = ArrayGeometry::half_wavelength_ula(10).unwrap();
        let table = approx_error_sweep(&geometry, &[-10.0, 3.5], &[-300.0]).unwrap();
        assert!(table.rows[0].value < 1e-12);
    }

    #[test]
    fn approx_error_nondecreasing_over_snr_grid() {
        let geometry = ArrayGeometry::half_wavelength_ula(10).unwrap();
        let grid: Vec<f64> = (-10..=10).map(|s| (2 * s) as f64).collect();
        let table = approx_error_sweep(&geometry, &[-10.0, 3.5], &grid).unwrap();
        for pair in table.rows.windows(2) {
            assert!(pair[1].value >= pair[0].value);
        }
    }

    #[test]
    fn correlation_table_has_two_rows_per_snr() {
        let geometry = ArrayGeometry::half_wavelength_ula(10).unwrap();
        let table =
            correlation_table(&geometry, &[5.0, 15.0], 0, 1, &[-10.0, 0.0, 10.0]).unwrap();
        assert_eq!(table.rows.len(), 6);
        assert!(table.rows.iter().all(|row| row.variant == "analytic"));
    }

    // ---------------------------------------------------------- table ordering

    #[test]
    fn sort_rows_orders_by_value_then_variant_then_metric() {
        let row = |sweep_value: f64, variant: &str, metric: Metric| MetricRow {
            sweep_var: "snr_db",
            sweep_value,
            variant: variant.to_string(),
            metric,
            value: 0.0,
            trials: 1,
            stderr: 0.0,
        };
        let mut table = MetricTable {
            rows: vec![
                row(10.0, "b", Metric::RmseDeg),
                row(-10.0, "b", Metric::RmseDeg),
                row(-10.0, "a", Metric::ResolutionProb),
                row(-10.0, "a", Metric::Err),
            ],
        };
        table.sort_rows();
        assert_eq!(table.rows[0].variant, "a");
        assert_eq!(table.rows[0].metric, Metric::Err);
        assert_eq!(table.rows[1].metric, Metric::ResolutionProb);
        assert_eq!(table.rows[2].variant, "b");
        assert_eq!(table.rows[3].sweep_value, 10.0);
    }
}
