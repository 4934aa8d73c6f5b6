//! The complex one-bit quantizer: keep only the signs of the real and
//! imaginary parts, scaled by 1/√2 so every symbol has unit modulus.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::array::{SnapshotKind, SnapshotMatrix};
use crate::error::{Error, Result};

/// One of the four constellation points `(±1 ± j)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneBitSymbol(Complex64);

impl OneBitSymbol {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    /// Signs of the real and imaginary parts, each ±1.
    pub fn signs(&self) -> (i8, i8) {
        (
            if self.0.re > 0.0 { 1 } else { -1 },
            if self.0.im > 0.0 { 1 } else { -1 },
        )
    }
}

/// sign with the fixed convention sign(±0) = +1, so the quantizer is a
/// total, deterministic map.
#[inline]
fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Quantize one complex sample: `(sign(Re z) + j·sign(Im z))/√2`.
///
/// Rejects non-finite input.
pub fn quantize_scalar(z: Complex64) -> Result<OneBitSymbol> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("cannot quantize non-finite sample {z}")));
    }
    Ok(OneBitSymbol(Complex64::new(
        sign(z.re) * std::f64::consts::FRAC_1_SQRT_2,
        sign(z.im) * std::f64::consts::FRAC_1_SQRT_2,
    )))
}

/// Quantize a whole unquantized snapshot block elementwise.
///
/// The input must be tagged unquantized; feeding an already quantized
/// block is a usage error.
pub fn quantize_snapshots(x: &SnapshotMatrix) -> Result<SnapshotMatrix> {
    if x.kind() != SnapshotKind::Unquantized {
        return Err(Error::usage(
            "quantize_snapshots expects an unquantized snapshot block",
        ));
    }
    let mut data = DMatrix::zeros(x.sensor_count(), x.snapshot_count());
    for (out, &z) in data.iter_mut().zip(x.data().iter()) {
        *out = quantize_scalar(z)?.value();
    }
    Ok(SnapshotMatrix::from_parts(data, SnapshotKind::OneBit))
}
