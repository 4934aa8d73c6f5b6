//! Array geometry, steering vectors, the narrowband signal model, and
//! seeded snapshot synthesis.
//!
//! Angles are accepted in degrees at every public boundary and converted
//! to radians exactly once, internally. Sensor positions are expressed in
//! carrier-wavelength units, so the phase seen by sensor `m` from angle
//! `θ` is `2π · position[m] · sin(θ)`; carrier frequency and propagation
//! delay are folded into the normalized positions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::covariance::{CovarianceMatrix, CovarianceTag};
use crate::error::{Error, Result};

/// Sensor positions along the array axis, in units of the carrier
/// wavelength. A half-wavelength ULA has positions `0, 0.5, 1.0, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    positions: Vec<f64>,
}

impl ArrayGeometry {
    /// Build a geometry from explicit wavelength-normalized positions.
    ///
    /// Requires at least two sensors with finite, strictly increasing
    /// coordinates.
    pub fn new(positions: Vec<f64>) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::domain(format!(
                "array needs at least 2 sensors, got {}",
                positions.len()
            )));
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("sensor positions must be finite"));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(
                "sensor positions must be strictly increasing",
            ));
        }
        Ok(Self { positions })
    }

    /// Uniform linear array with `elements` sensors spaced `spacing_wl`
    /// wavelengths apart, first sensor at the origin.
    pub fn ula(elements: usize, spacing_wl: f64) -> Result<Self> {
        if !(spacing_wl.is_finite() && spacing_wl > 0.0) {
            return Err(Error::domain(format!(
                "ULA spacing must be positive and finite, got {spacing_wl}"
            )));
        }
        Self::new((0..elements).map(|m| m as f64 * spacing_wl).collect())
    }

    /// Half-wavelength ULA, the default geometry for the experiment suite.
    pub fn half_wavelength_ula(elements: usize) -> Result<Self> {
        Self::ula(elements, 0.5)
    }

    pub fn element_count(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }
}

/// Source directions and powers plus the noise power, all on linear scale.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceScenario {
    doas_deg: Vec<f64>,
    source_powers: Vec<f64>,
    noise_power: f64,
}

impl SourceScenario {
    /// Validate and build a scenario. DOAs must be pairwise distinct and
    /// inside the open interval (−90°, 90°); all powers must be positive
    /// and finite.
    pub fn new(doas_deg: Vec<f64>, source_powers: Vec<f64>, noise_power: f64) -> Result<Self> {
        if doas_deg.is_empty() {
            return Err(Error::domain("scenario needs at least one source"));
        }
        if doas_deg.len() != source_powers.len() {
            return Err(Error::usage(format!(
                "{} DOAs but {} source powers",
                doas_deg.len(),
                source_powers.len()
            )));
        }
        for &theta in &doas_deg {
            if !(theta.is_finite() && theta > -90.0 && theta < 90.0) {
                return Err(Error::domain(format!(
                    "source DOA {theta}° must lie strictly inside (-90°, 90°)"
                )));
            }
        }
        for (i, &a) in doas_deg.iter().enumerate() {
            if doas_deg[i + 1..].contains(&a) {
                return Err(Error::domain(format!("duplicate source DOA {a}°")));
            }
        }
        if source_powers.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::domain("source powers must be positive and finite"));
        }
        if !(noise_power.is_finite() && noise_power > 0.0) {
            return Err(Error::domain(format!(
                "noise power must be positive and finite, got {noise_power}"
            )));
        }
        Ok(Self {
            doas_deg,
            source_powers,
            noise_power,
        })
    }

    /// Equal-power scenario with unit noise power, the configuration used
    /// throughout the experiment suite: every source gets linear power
    /// `ξ = 10^(snr_db/10)`.
    pub fn equal_power(doas_deg: Vec<f64>, snr_db: f64) -> Result<Self> {
        let xi = 10f64.powf(snr_db / 10.0);
        let k = doas_deg.len();
        Self::new(doas_deg, vec![xi; k], 1.0)
    }

    pub fn source_count(&self) -> usize {
        self.doas_deg.len()
    }

    pub fn doas_deg(&self) -> &[f64] {
        &self.doas_deg
    }

    pub fn source_powers(&self) -> &[f64] {
        &self.source_powers
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    /// Per-source SNR `ξᵢ = σᵢ²/σₙ²`.
    pub fn snrs(&self) -> Vec<f64> {
        self.source_powers
            .iter()
            .map(|s| s / self.noise_power)
            .collect()
    }

    /// Total power seen by each (isotropic) sensor: `p = Σᵢ σᵢ² + σₙ²`.
    pub fn total_sensor_power(&self) -> f64 {
        self.source_powers.iter().sum::<f64>() + self.noise_power
    }

    /// Check that the scenario can be paired with `geometry` (K < M).
    pub fn validate_for(&self, geometry: &ArrayGeometry) -> Result<()> {
        if self.source_count() >= geometry.element_count() {
            return Err(Error::domain(format!(
                "{} sources require an array with more than {} sensors",
                self.source_count(),
                geometry.element_count()
            )));
        }
        Ok(())
    }
}

/// Whether a snapshot block holds raw measurements or one-bit symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotKind {
    Unquantized,
    OneBit,
}

/// An M×N block of array snapshots, one column per time instant.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    data: DMatrix<Complex64>,
    kind: SnapshotKind,
}

impl SnapshotMatrix {
    /// Wrap raw (unquantized) measurements.
    pub fn unquantized(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::usage("snapshot matrix must be non-empty"));
        }
        Ok(Self {
            data,
            kind: SnapshotKind::Unquantized,
        })
    }

    /// Internal constructor for blocks whose kind is guaranteed by the caller.
    pub(crate) fn from_parts(data: DMatrix<Complex64>, kind: SnapshotKind) -> Self {
        Self { data, kind }
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn kind(&self) -> SnapshotKind {
        self.kind
    }

    pub fn sensor_count(&self) -> usize {
        self.data.nrows()
    }

    pub fn snapshot_count(&self) -> usize {
        self.data.ncols()
    }
}

/// Steering vector `a(θ)`: entry `m` is `exp(j·2π·position[m]·sin θ)`.
///
/// `theta_deg` must lie in [−90°, 90°].
pub fn steering_vector(geometry: &ArrayGeometry, theta_deg: f64) -> Result<DVector<Complex64>> {
    if !(theta_deg.is_finite() && (-90.0..=90.0).contains(&theta_deg)) {
        return Err(Error::domain(format!(
            "steering angle {theta_deg}° outside [-90°, 90°]"
        )));
    }
    let sin_theta = theta_deg.to_radians().sin();
    Ok(DVector::from_iterator(
        geometry.element_count(),
        geometry.positions().iter().map(|&pos| {
            let phase = std::f64::consts::TAU * pos * sin_theta;
            Complex64::from_polar(1.0, phase)
        }),
    ))
}

/// Steering matrix: column `i` is the steering vector of `doas_deg[i]`.
pub fn steering_matrix(geometry: &ArrayGeometry, doas_deg: &[f64]) -> Result<DMatrix<Complex64>> {
    if doas_deg.is_empty() {
        return Err(Error::domain("steering matrix needs at least one angle"));
    }
    let m = geometry.element_count();
    let mut out = DMatrix::zeros(m, doas_deg.len());
    for (i, &theta) in doas_deg.iter().enumerate() {
        out.set_column(i, &steering_vector(geometry, theta)?);
    }
    Ok(out)
}

/// Synthesize `n_snapshots` columns of `x(t) = A·s(t) + n(t)` with
/// independent circular complex Gaussian signals and noise.
///
/// Real and imaginary parts of `sᵢ(t)` each carry variance `σᵢ²/2`, those
/// of `nₘ(t)` carry `σₙ²/2`. The generator is ChaCha8 keyed by `seed`;
/// signal and noise draws come from separate counter streams of the same
/// key, so a longer run of the same seed extends a shorter one
/// column-for-column. Identical inputs produce bit-identical output.
pub fn generate_snapshots(
    geometry: &ArrayGeometry,
    scenario: &SourceScenario,
    n_snapshots: usize,
    seed: u64,
) -> Result<SnapshotMatrix> {
    scenario.validate_for(geometry)?;
    if n_snapshots == 0 {
        return Err(Error::usage("snapshot count must be at least 1"));
    }
    let m = geometry.element_count();
    let k = scenario.source_count();
    let a = steering_matrix(geometry, scenario.doas_deg())?;

    let mut rng_signal = ChaCha8Rng::seed_from_u64(seed);
    rng_signal.set_stream(0);
    let mut rng_noise = ChaCha8Rng::seed_from_u64(seed);
    rng_noise.set_stream(1);

    let signal_scales: Vec<f64> = scenario
        .source_powers()
        .iter()
        .map(|&s| (s / 2.0).sqrt())
        .collect();
    let noise_scale = (scenario.noise_power() / 2.0).sqrt();

    let mut signals = DMatrix::<Complex64>::zeros(k, n_snapshots);
    for t in 0..n_snapshots {
        for i in 0..k {
            let re: f64 = StandardNormal.sample(&mut rng_signal);
            let im: f64 = StandardNormal.sample(&mut rng_signal);
            signals[(i, t)] = Complex64::new(re * signal_scales[i], im * signal_scales[i]);
        }
    }

    let mut data = &a * signals;
    for t in 0..n_snapshots {
        for sensor in 0..m {
            let re: f64 = StandardNormal.sample(&mut rng_noise);
            let im: f64 = StandardNormal.sample(&mut rng_noise);
            data[(sensor, t)] += Complex64::new(re * noise_scale, im * noise_scale);
        }
    }

    Ok(SnapshotMatrix::from_parts(data, SnapshotKind::Unquantized))
}

/// Exact covariance of the unquantized model:
/// `R_x = A·diag(σ₁²,…,σ_K²)·Aᴴ + σₙ²·I`.
///
/// Hermitian by construction; every diagonal entry is exactly the total
/// sensor power `p` (the sensors are isotropic, so `|aₘ(θ)|² = 1`).
pub fn analytic_covariance(
    geometry: &ArrayGeometry,
    scenario: &SourceScenario,
) -> Result<CovarianceMatrix> {
    scenario.validate_for(geometry)?;
    let m = geometry.element_count();
    let a = steering_matrix(geometry, scenario.doas_deg())?;
    let powers = scenario.source_powers();
    let p = scenario.total_sensor_power();

    let mut data = DMatrix::<Complex64>::zeros(m, m);
    for row in 0..m {
        data[(row, row)] = Complex64::new(p, 0.0);
        for col in row + 1..m {
            let mut sum = Complex64::new(0.0, 0.0);
            for (i, &power) in powers.iter().enumerate() {
                sum += a[(row, i)] * a[(col, i)].conj() * power;
            }
            data[(row, col)] = sum;
            data[(col, row)] = sum.conj();
        }
    }
    Ok(CovarianceMatrix::new_unchecked(data, CovarianceTag::Analytic))
}

/// Correlation coefficient `ρ = [R_x]ₘₙ / √([R_x]ₘₘ·[R_x]ₙₙ)` between
/// the unquantized outputs of sensors `m` and `n` (zero-based).
///
/// The self-correlation (`m == n`) is exactly 1.
pub fn unquantized_correlation(
    geometry: &ArrayGeometry,
    scenario: &SourceScenario,
    m: usize,
    n: usize,
) -> Result<Complex64> {
    let count = geometry.element_count();
    if m >= count || n >= count {
        return Err(Error::usage(format!(
            "sensor pair ({m}, {n}) out of range for {count} sensors"
        )));
    }
    if m == n {
        return Ok(Complex64::new(1.0, 0.0));
    }
    scenario.validate_for(geometry)?;
    let a = steering_matrix(geometry, scenario.doas_deg())?;
    let mut cross = Complex64::new(0.0, 0.0);
    for (i, &power) in scenario.source_powers().iter().enumerate() {
        cross += a[(m, i)] * a[(n, i)].conj() * power;
    }
    // Isotropic sensors: both diagonal entries equal the total power p.
    Ok(cross / scenario.total_sensor_power())
}

/// One row of a correlation-versus-SNR table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationPoint {
    pub snr_db: f64,
    pub rho: Complex64,
}

/// Evaluate the equal-power correlation coefficient of the sensor pair
/// `(m, n)` across an SNR grid (dB), with unit noise power.
pub fn correlation_vs_snr(
    geometry: &ArrayGeometry,
    doas_deg: &[f64],
    m: usize,
    n: usize,
    snr_grid_db: &[f64],
) -> Result<Vec<CorrelationPoint>> {
    if snr_grid_db.is_empty() {
        return Err(Error::usage("SNR grid must be non-empty"));
    }
    snr_grid_db
        .iter()
        .map(|&snr_db| {
            let scenario = SourceScenario::equal_power(doas_deg.to_vec(), snr_db)?;
            let rho = unquantized_correlation(geometry, &scenario, m, n)?;
            Ok(CorrelationPoint { snr_db, rho })
        })
        .collect()
}
