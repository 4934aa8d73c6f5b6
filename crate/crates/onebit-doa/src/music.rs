//! Hermitian eigendecomposition, noise-subspace extraction, the MUSIC
//! pseudo-spectrum, and grid peak picking.
//!
//! Every operation here works on a [`CovarianceMatrix`] regardless of its
//! provenance tag: the whole point of running MUSIC directly on a one-bit
//! covariance matrix is that `aR + bI` (a > 0) has the same eigenvectors
//! and eigen-order as `R`, so the noise subspace — and therefore the
//! spectrum's argmax set — is unchanged.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::array::{steering_vector, ArrayGeometry};
use crate::covariance::CovarianceMatrix;
use crate::error::{Error, Result};

/// Floor applied to the spectrum denominator `aᴴUₙUₙᴴa`, which is exactly
/// zero at the true angles of a noise-free analytic covariance. The floor
/// keeps G(θ) finite without disturbing the argmax.
pub const SPECTRUM_FLOOR: f64 = 1e-16;

/// Default spectrum search step (degrees). Fine enough that grid
/// quantization sits below the RMSE levels of interest, coarse enough for
/// fast sweeps.
pub const DEFAULT_GRID_STEP_DEG: f64 = 0.05;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending and
/// each paired with the same-index eigenvector column.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl EigenSystem {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Orthonormal basis of the noise subspace: the eigenvectors attached to
/// the M−K smallest eigenvalues.
#[derive(Debug, Clone)]
pub struct NoiseSubspace {
    basis: DMatrix<Complex64>,
    source_count: usize,
}

impl NoiseSubspace {
    pub fn basis(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    pub fn source_count(&self) -> usize {
        self.source_count
    }

    pub fn sensor_count(&self) -> usize {
        self.basis.nrows()
    }
}

/// MUSIC pseudo-spectrum sampled on a strictly increasing angle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    angles_deg: Vec<f64>,
    values: Vec<f64>,
}

impl SpectrumGrid {
    /// Pair angles with spectrum values, validating the grid invariants.
    pub fn new(angles_deg: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if angles_deg.len() != values.len() {
            return Err(Error::usage(format!(
                "{} angles but {} spectrum values",
                angles_deg.len(),
                values.len()
            )));
        }
        validate_grid(&angles_deg)?;
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::domain("spectrum values must be positive and finite"));
        }
        Ok(Self { angles_deg, values })
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.angles_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles_deg.is_empty()
    }
}

fn validate_grid(angles_deg: &[f64]) -> Result<()> {
    if angles_deg.is_empty() {
        return Err(Error::usage("angle grid must be non-empty"));
    }
    for &theta in angles_deg {
        if !(theta.is_finite() && (-90.0..=90.0).contains(&theta)) {
            return Err(Error::domain(format!(
                "grid angle {theta}° outside [-90°, 90°]"
            )));
        }
    }
    if angles_deg.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("grid angles must be strictly increasing"));
    }
    Ok(())
}

/// Steering vectors precomputed over an angle grid, so repeated spectrum
/// evaluations against the same geometry and grid skip the trigonometry.
#[derive(Debug, Clone)]
pub struct SteeringGrid {
    angles_deg: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl SteeringGrid {
    pub fn new(geometry: &ArrayGeometry, angles_deg: &[f64]) -> Result<Self> {
        validate_grid(angles_deg)?;
        let m = geometry.element_count();
        let mut vectors = DMatrix::zeros(m, angles_deg.len());
        for (i, &theta) in angles_deg.iter().enumerate() {
            vectors.set_column(i, &steering_vector(geometry, theta)?);
        }
        Ok(Self {
            angles_deg: angles_deg.to_vec(),
            vectors,
        })
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    pub fn len(&self) -> usize {
        self.angles_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles_deg.is_empty()
    }
}

/// Evenly spaced search grid over [−90°, 90°] inclusive. The step is
/// snapped so the span divides evenly and both endpoints are hit exactly.
pub fn grid_with_step(step_deg: f64) -> Result<Vec<f64>> {
    if !(step_deg.is_finite() && step_deg > 0.0) {
        return Err(Error::domain(format!(
            "grid step must be positive and finite, got {step_deg}"
        )));
    }
    let intervals = (180.0 / step_deg).round();
    if intervals < 2.0 {
        return Err(Error::domain(format!(
            "grid step {step_deg}° is too coarse for a usable spectrum"
        )));
    }
    let n = intervals as usize;
    Ok((0..=n)
        .map(|i| i as f64 * 180.0 / n as f64 - 90.0)
        .collect())
}

/// The default search grid: [−90°, 90°] at [`DEFAULT_GRID_STEP_DEG`].
pub fn default_grid() -> Vec<f64> {
    grid_with_step(DEFAULT_GRID_STEP_DEG).expect("default step is valid")
}

/// Eigendecompose a covariance matrix, eigenvalues sorted ascending.
pub fn eigendecompose(r: &CovarianceMatrix) -> Result<EigenSystem> {
    let data = r.data();
    let gap = (data - data.adjoint()).norm();
    if gap > 1e-10 * data.norm().max(1.0) {
        return Err(Error::domain(format!(
            "{} covariance matrix is not Hermitian: ‖R − Rᴴ‖_F = {gap:.3e}",
            r.tag()
        )));
    }
    let m = r.dim();
    let eig = nalgebra::SymmetricEigen::try_new(data.clone(), f64::EPSILON, 200 * m.max(5))
        .ok_or_else(|| {
            Error::numeric(format!(
                "eigendecomposition did not converge for the {} covariance matrix",
                r.tag()
            ))
        })?;

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = eig.eigenvectors.select_columns(&order);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Keep the eigenvectors of the M−K smallest eigenvalues.
pub fn noise_subspace(eig: &EigenSystem, k_sources: usize) -> Result<NoiseSubspace> {
    let m = eig.dim();
    if k_sources == 0 || k_sources >= m {
        return Err(Error::domain(format!(
            "source count {k_sources} must satisfy 1 ≤ K < {m}"
        )));
    }
    Ok(NoiseSubspace {
        basis: eig.eigenvectors().columns(0, m - k_sources).into_owned(),
        source_count: k_sources,
    })
}

/// `1/(aᴴ·Uₙ·Uₙᴴ·a)` for one steering column. Both the batched and the
/// pointwise spectrum go through here, so their values are bit-identical.
fn spectrum_value<S>(basis: &DMatrix<Complex64>, a: &nalgebra::Matrix<Complex64, nalgebra::Dyn, nalgebra::U1, S>) -> f64
where
    S: nalgebra::Storage<Complex64, nalgebra::Dyn, nalgebra::U1>,
{
    1.0 / basis.ad_mul(a).norm_squared().max(SPECTRUM_FLOOR)
}

/// Pseudo-spectrum value `G(θ) = 1/(aᴴ(θ)·Uₙ·Uₙᴴ·a(θ))` at one angle.
pub fn pseudospectrum_at(
    subspace: &NoiseSubspace,
    geometry: &ArrayGeometry,
    theta_deg: f64,
) -> Result<f64> {
    if geometry.element_count() != subspace.sensor_count() {
        return Err(Error::usage(format!(
            "geometry has {} sensors but the subspace expects {}",
            geometry.element_count(),
            subspace.sensor_count()
        )));
    }
    let a: DVector<Complex64> = steering_vector(geometry, theta_deg)?;
    Ok(spectrum_value(subspace.basis(), &a))
}

/// Evaluate the pseudo-spectrum over a precomputed steering grid.
pub fn music_spectrum_on(subspace: &NoiseSubspace, steering: &SteeringGrid) -> Result<SpectrumGrid> {
    if steering.vectors.nrows() != subspace.sensor_count() {
        return Err(Error::usage(format!(
            "steering grid has {} sensors but the subspace expects {}",
            steering.vectors.nrows(),
            subspace.sensor_count()
        )));
    }
    let values: Vec<f64> = (0..steering.len())
        .map(|g| spectrum_value(&subspace.basis, &steering.vectors.column(g).into_owned()))
        .collect();
    SpectrumGrid::new(steering.angles_deg.clone(), values)
}

/// Evaluate the pseudo-spectrum over an angle grid.
pub fn music_spectrum(
    subspace: &NoiseSubspace,
    geometry: &ArrayGeometry,
    grid_deg: &[f64],
) -> Result<SpectrumGrid> {
    music_spectrum_on(subspace, &SteeringGrid::new(geometry, grid_deg)?)
}

/// Locations of the `k_sources` highest peaks, ascending.
///
/// A peak is an interior grid point strictly greater than both
/// neighbours. If fewer such maxima exist, the remaining slots are filled
/// from the highest leftover grid values. Ties break toward the smaller
/// angle.
pub fn pick_peaks(spectrum: &SpectrumGrid, k_sources: usize) -> Result<Vec<f64>> {
    let n = spectrum.len();
    if n < 3 {
        return Err(Error::domain(format!(
            "peak picking needs a grid of at least 3 points, got {n}"
        )));
    }
    if k_sources == 0 || k_sources > n {
        return Err(Error::domain(format!(
            "cannot pick {k_sources} peaks from a {n}-point grid"
        )));
    }
    let values = spectrum.values();
    let by_height = |&a: &usize, &b: &usize| values[b].total_cmp(&values[a]).then(a.cmp(&b));

    let mut maxima: Vec<usize> = (1..n - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect();
    maxima.sort_by(by_height);
    let mut chosen: Vec<usize> = maxima.into_iter().take(k_sources).collect();

    if chosen.len() < k_sources {
        let mut rest: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
        rest.sort_by(by_height);
        let missing = k_sources - chosen.len();
        chosen.extend(rest.into_iter().take(missing));
    }

    let mut angles: Vec<f64> = chosen
        .into_iter()
        .map(|i| spectrum.angles_deg()[i])
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// Full MUSIC pipeline: eigendecompose, split off the noise subspace,
/// scan the grid, pick the K highest peaks.
pub fn estimate_doas(
    r: &CovarianceMatrix,
    geometry: &ArrayGeometry,
    k_sources: usize,
    grid_deg: &[f64],
) -> Result<Vec<f64>> {
    estimate_doas_on(r, k_sources, &SteeringGrid::new(geometry, grid_deg)?)
}

/// [`estimate_doas`] against a precomputed steering grid.
pub fn estimate_doas_on(
    r: &CovarianceMatrix,
    k_sources: usize,
    steering: &SteeringGrid,
) -> Result<Vec<f64>> {
    let eig = eigendecompose(r)?;
    let subspace = noise_subspace(&eig, k_sources)?;
    let spectrum = music_spectrum_on(&subspace, steering)?;
    pick_peaks(&spectrum, k_sources)
}

/// Largest principal angle (radians) between the column spans of two
/// matrices with orthonormal columns.
///
/// Computed through the sine — the largest singular value of
/// `B − A(AᴴB)` — which stays accurate for tiny angles where the cosine
/// route saturates at √ε.
pub fn max_principal_angle(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<f64> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::usage(format!(
            "subspace bases have mismatched shapes {}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let residual = b - a * a.ad_mul(b);
    let svd = nalgebra::SVD::new(residual, false, false);
    let sigma_max = svd
        .singular_values
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    Ok(sigma_max.clamp(0.0, 1.0).asin())
}
