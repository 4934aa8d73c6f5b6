//! Covariance estimation and the elementwise transforms that connect the
//! unquantized and one-bit covariance matrices: the arcsine map, its sine
//! inverse, the scaled-identity approximation, and the relative
//! approximation error.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::array::{ArrayGeometry, SnapshotKind, SnapshotMatrix, SourceScenario};
use crate::error::{Error, Result};

/// Provenance of a covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovarianceTag {
    SampleOneBit,
    SampleUnquantized,
    ArcsineReconstructed,
    Analytic,
    Approximation,
}

impl CovarianceTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CovarianceTag::SampleOneBit => "sample-one-bit",
            CovarianceTag::SampleUnquantized => "sample-unquantized",
            CovarianceTag::ArcsineReconstructed => "arcsine-reconstructed",
            CovarianceTag::Analytic => "analytic",
            CovarianceTag::Approximation => "approximation",
        }
    }
}

impl std::fmt::Display for CovarianceTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// M×M Hermitian covariance matrix with a provenance tag.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    data: DMatrix<Complex64>,
    tag: CovarianceTag,
}

impl CovarianceMatrix {
    /// Wrap a matrix after checking squareness and Hermitian symmetry
    /// (`‖R − Rᴴ‖_F ≤ 1e−10·max(1, ‖R‖_F)`).
    pub fn new(data: DMatrix<Complex64>, tag: CovarianceTag) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(Error::usage(format!(
                "covariance matrix must be square and non-empty, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        let gap = (&data - data.adjoint()).norm();
        if gap > 1e-10 * data.norm().max(1.0) {
            return Err(Error::domain(format!(
                "matrix is not Hermitian: ‖R − Rᴴ‖_F = {gap:.3e}"
            )));
        }
        Ok(Self { data, tag })
    }

    /// Constructor for matrices that are Hermitian by construction.
    pub(crate) fn new_unchecked(data: DMatrix<Complex64>, tag: CovarianceTag) -> Self {
        Self { data, tag }
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn tag(&self) -> CovarianceTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }
}

/// Sample covariance `(1/N)·Y·Yᴴ` of a snapshot block; the tag records
/// whether the input was one-bit or unquantized.
///
/// For one-bit input the Gram sum is accumulated over the symbol signs in
/// integer arithmetic, so each entry is an exact dyadic rational: the
/// diagonal comes out exactly 1 and every component lands exactly inside
/// [−1, 1]. The unquantized path mirrors the upper triangle so the result
/// is Hermitian bit-for-bit.
pub fn sample_covariance(snapshots: &SnapshotMatrix) -> CovarianceMatrix {
    let m = snapshots.sensor_count();
    let n = snapshots.snapshot_count();
    let data = snapshots.data();
    let mut out = DMatrix::<Complex64>::zeros(m, m);

    match snapshots.kind() {
        SnapshotKind::OneBit => {
            // Per snapshot, yₘ·yₙ* = ((aₘaₙ + bₘbₙ) + j(bₘaₙ − aₘbₙ))/2
            // with a, b the ±1 signs of the real/imaginary parts.
            let mut sums_re = vec![0i64; m * m];
            let mut sums_im = vec![0i64; m * m];
            let mut re_signs = vec![0i64; m];
            let mut im_signs = vec![0i64; m];
            for t in 0..n {
                for row in 0..m {
                    let z = data[(row, t)];
                    re_signs[row] = if z.re > 0.0 { 1 } else { -1 };
                    im_signs[row] = if z.im > 0.0 { 1 } else { -1 };
                }
                for row in 0..m {
                    for col in row..m {
                        let re = re_signs[row] * re_signs[col] + im_signs[row] * im_signs[col];
                        let im = im_signs[row] * re_signs[col] - re_signs[row] * im_signs[col];
                        sums_re[row * m + col] += re;
                        sums_im[row * m + col] += im;
                    }
                }
            }
            let denom = 2.0 * n as f64;
            for row in 0..m {
                for col in row..m {
                    let v = Complex64::new(
                        sums_re[row * m + col] as f64 / denom,
                        sums_im[row * m + col] as f64 / denom,
                    );
                    out[(row, col)] = v;
                    out[(col, row)] = v.conj();
                }
            }
            CovarianceMatrix::new_unchecked(out, CovarianceTag::SampleOneBit)
        }
        SnapshotKind::Unquantized => {
            for row in 0..m {
                for col in row..m {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for t in 0..n {
                        acc += data[(row, t)] * data[(col, t)].conj();
                    }
                    let v = acc / n as f64;
                    out[(row, col)] = v;
                    out[(col, row)] = v.conj();
                }
            }
            CovarianceMatrix::new_unchecked(out, CovarianceTag::SampleUnquantized)
        }
    }
}

/// How far outside [−1, 1] a component may stray (floating-point noise
/// only) before the arcsine/sine maps refuse it instead of clamping.
pub const UNIT_BOX_SLACK: f64 = 1e-9;

fn clamp_unit(v: f64, what: &str) -> Result<f64> {
    if v > 1.0 {
        if v - 1.0 <= UNIT_BOX_SLACK {
            Ok(1.0)
        } else {
            Err(Error::domain(format!("{what} component {v} exceeds the unit box")))
        }
    } else if v < -1.0 {
        if -1.0 - v <= UNIT_BOX_SLACK {
            Ok(-1.0)
        } else {
            Err(Error::domain(format!("{what} component {v} exceeds the unit box")))
        }
    } else if v.is_nan() {
        Err(Error::domain(format!("{what} component is NaN")))
    } else {
        Ok(v)
    }
}

/// Apply one of the elementwise real maps to both components of every
/// entry, mirroring the upper triangle so Hermitian symmetry is exact.
/// Both maps used here are odd, so mirroring agrees with the direct
/// elementwise evaluation.
fn elementwise_odd_map(
    r: &CovarianceMatrix,
    tag: CovarianceTag,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<CovarianceMatrix> {
    let m = r.dim();
    let mut out = DMatrix::<Complex64>::zeros(m, m);
    for row in 0..m {
        for col in row..m {
            let z = r.data()[(row, col)];
            let v = Complex64::new(f(z.re)?, f(z.im)?);
            out[(row, col)] = v;
            out[(col, row)] = v.conj();
        }
    }
    Ok(CovarianceMatrix::new_unchecked(out, tag))
}

/// Elementwise arcsine law: `(2/π)·(arcsin Re + j·arcsin Im)`.
///
/// Maps 0 → 0 and ±1 → ±1 exactly; components may exceed the unit box by
/// at most [`UNIT_BOX_SLACK`] (they are clamped), anything further is a
/// domain error. The provenance tag is preserved: the map sends an
/// analytic unquantized correlation matrix to the analytic one-bit one.
pub fn arcsine_map(r: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    // asin(±1)/FRAC_PI_2 divides FRAC_PI_2 by itself, so the unit
    // diagonal survives exactly.
    elementwise_odd_map(r, r.tag(), |v| Ok(clamp_unit(v, "arcsine input")?.asin() / FRAC_PI_2))
}

/// Invert the arcsine law: `sine((π/2)·R)` with
/// `sine(z) = sin(Re z) + j·sin(Im z)`.
///
/// Applied to a one-bit covariance matrix this recovers the unquantized
/// covariance up to an unknown positive scale (which subspace methods
/// ignore); the unit diagonal maps back to 1.
pub fn reconstruct_unquantized(r_y: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    elementwise_odd_map(r_y, CovarianceTag::ArcsineReconstructed, |v| {
        Ok((FRAC_PI_2 * clamp_unit(v, "sine-map input")?).sin())
    })
}

/// First-order surrogate for the one-bit covariance:
/// `(2/(p·π))·R_x + (1 − 2/π)·I`.
///
/// Shares eigenvectors with `R_x` exactly, and the eigenvalue map
/// `λ ↦ (2/(pπ))λ + (1 − 2/π)` is strictly increasing, so the eigen-order
/// is preserved as well.
pub fn approx_onebit_covariance(r_x: &CovarianceMatrix, p: f64) -> Result<CovarianceMatrix> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::domain(format!(
            "sensor power p must be positive and finite, got {p}"
        )));
    }
    let scale = 2.0 / (p * PI);
    let shift = 1.0 - 2.0 / PI;
    let m = r_x.dim();
    let mut out = DMatrix::<Complex64>::zeros(m, m);
    for row in 0..m {
        for col in row..m {
            let v = r_x.data()[(row, col)] * scale;
            out[(row, col)] = v;
            out[(col, row)] = v.conj();
        }
        out[(row, row)] += Complex64::new(shift, 0.0);
    }
    Ok(CovarianceMatrix::new_unchecked(out, CovarianceTag::Approximation))
}

/// Relative Frobenius error `‖R_app − R_y‖_F / ‖R_y‖_F`.
pub fn approximation_error(r_app: &CovarianceMatrix, r_y: &CovarianceMatrix) -> Result<f64> {
    if r_app.dim() != r_y.dim() {
        return Err(Error::usage(format!(
            "dimension mismatch: {}x{} vs {}x{}",
            r_app.dim(),
            r_app.dim(),
            r_y.dim(),
            r_y.dim()
        )));
    }
    let denom = r_y.data().norm();
    if denom == 0.0 {
        return Err(Error::domain("reference covariance has zero norm"));
    }
    Ok((r_app.data() - r_y.data()).norm() / denom)
}

/// Exact one-bit covariance of a scenario: the arcsine law applied to the
/// unquantized correlation matrix `R_x/p`.
pub fn analytic_onebit_covariance(
    geometry: &ArrayGeometry,
    scenario: &SourceScenario,
) -> Result<CovarianceMatrix> {
    let r_x = crate::array::analytic_covariance(geometry, scenario)?;
    let p = scenario.total_sensor_power();
    let m = r_x.dim();
    let normalized = DMatrix::from_fn(m, m, |row, col| r_x.data()[(row, col)] / p);
    arcsine_map(&CovarianceMatrix::new_unchecked(normalized, CovarianceTag::Analytic))
}
