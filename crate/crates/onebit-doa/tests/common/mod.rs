//! Shared oracles and scenario generators for the integration suites.
//!
//! The closed forms here are evaluated from first principles (explicit
//! phase sums), independent of the library's covariance code paths.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use onebit_doa::{ArrayGeometry, SourceScenario};

/// Equal-power correlation coefficient of sensors `(m, n)` from the
/// closed form: `ρ = Σᵢ e^{j2π(posₘ−posₙ)·sinθᵢ} / (K + ξ⁻¹)`.
pub fn rho_equal_power(
    geometry: &ArrayGeometry,
    doas_deg: &[f64],
    xi: f64,
    m: usize,
    n: usize,
) -> Complex64 {
    if m == n {
        return Complex64::new(1.0, 0.0);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for &theta in doas_deg {
        let phase = std::f64::consts::TAU
            * (geometry.positions()[m] - geometry.positions()[n])
            * theta.to_radians().sin();
        sum += Complex64::from_polar(1.0, phase);
    }
    sum / (doas_deg.len() as f64 + 1.0 / xi)
}

/// Arcsine law applied to a correlation coefficient:
/// `(2/π)(arcsin Re ρ + j·arcsin Im ρ)`.
pub fn arcsine_law(rho: Complex64) -> Complex64 {
    Complex64::new(
        rho.re.asin() / std::f64::consts::FRAC_PI_2,
        rho.im.asin() / std::f64::consts::FRAC_PI_2,
    )
}

/// Random scenario with `k` sources, pairwise at least `min_sep_deg`
/// apart, inside (−75°, 75°), powers in [0.25, 4], unit noise power.
pub fn random_scenario(rng: &mut impl Rng, k: usize, min_sep_deg: f64) -> SourceScenario {
    let mut doas: Vec<f64> = Vec::with_capacity(k);
    while doas.len() < k {
        let candidate = rng.gen_range(-75.0..75.0);
        if doas.iter().all(|&d: &f64| (d - candidate).abs() >= min_sep_deg) {
            doas.push(candidate);
        }
    }
    let powers: Vec<f64> = (0..k).map(|_| rng.gen_range(0.25..4.0)).collect();
    SourceScenario::new(doas, powers, 1.0).expect("generated scenario is valid")
}
