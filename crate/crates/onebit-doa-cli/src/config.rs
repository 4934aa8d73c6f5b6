//! JSON experiment configuration: parsing, validation, and defaults.
//!
//! Every key is optional; an empty document `{}` (or no config file at
//! all) yields the default scenario of the experiment suite: a 10-element
//! half-wavelength ULA with sources at −10° and 3.5°, unit noise power.

use serde::Deserialize;

use onebit_doa::{ArrayGeometry, EstimatorVariant, ExperimentConfig};

use crate::CliError;

/// Raw config document. Unknown keys are rejected with the offending key
/// named in the error.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub geometry: Option<GeometrySpec>,
    pub doas_deg: Option<Vec<f64>>,
    pub snr_grid_db: Option<Vec<f64>>,
    pub snapshot_grid: Option<Vec<u64>>,
    pub trial_count: Option<u64>,
    pub seed: Option<u64>,
    pub grid_step_deg: Option<f64>,
    pub separation_grid_deg: Option<Vec<f64>>,
    pub variants: Option<Vec<String>>,
}

/// Geometry block: either explicit `positions_wl`, or a ULA described by
/// `elements` and `spacing_wl` (defaults 10 and 0.5).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub elements: Option<u64>,
    pub spacing_wl: Option<f64>,
    pub positions_wl: Option<Vec<f64>>,
}

/// Parse a JSON config document, reporting the path to any offending
/// field.
pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    let mut deserializer = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut deserializer).map_err(|err| {
        let path = err.path().to_string();
        if path == "." {
            CliError::Config(format!("invalid config: {}", err.into_inner()))
        } else {
            CliError::Config(format!("invalid config at `{path}`: {}", err.into_inner()))
        }
    })
}

fn build_geometry(spec: &GeometrySpec) -> Result<ArrayGeometry, CliError> {
    match &spec.positions_wl {
        Some(positions) => {
            if spec.elements.is_some() || spec.spacing_wl.is_some() {
                return Err(CliError::Config(
                    "geometry: positions_wl cannot be combined with elements/spacing_wl"
                        .to_string(),
                ));
            }
            ArrayGeometry::new(positions.clone())
                .map_err(|e| CliError::Config(format!("geometry.positions_wl: {e}")))
        }
        None => {
            let elements = spec.elements.unwrap_or(10);
            let spacing = spec.spacing_wl.unwrap_or(0.5);
            ArrayGeometry::ula(elements as usize, spacing)
                .map_err(|e| CliError::Config(format!("geometry: {e}")))
        }
    }
}

/// Apply defaults and range checks, producing a validated experiment
/// config. `seed_override` and `grid_step_override` come from the command
/// line and take precedence over the file.
pub fn resolve(
    file: &ConfigFile,
    seed_override: Option<u64>,
    grid_step_override: Option<f64>,
) -> Result<ExperimentConfig, CliError> {
    let defaults = ExperimentConfig::default();
    let geometry = match &file.geometry {
        Some(spec) => build_geometry(spec)?,
        None => defaults.geometry.clone(),
    };

    let mut variants = Vec::new();
    match &file.variants {
        Some(tags) => {
            for tag in tags {
                let variant: EstimatorVariant = tag
                    .parse()
                    .map_err(|e| CliError::Config(format!("variants: {e}")))?;
                variants.push(variant);
            }
        }
        None => variants = defaults.variants.clone(),
    }

    let config = ExperimentConfig {
        geometry,
        doas_deg: file.doas_deg.clone().unwrap_or(defaults.doas_deg),
        snr_grid_db: file.snr_grid_db.clone().unwrap_or(defaults.snr_grid_db),
        snapshot_grid: file
            .snapshot_grid
            .clone()
            .map(|grid| grid.into_iter().map(|n| n as usize).collect())
            .unwrap_or(defaults.snapshot_grid),
        trial_count: file.trial_count.unwrap_or(defaults.trial_count as u64) as usize,
        seed: seed_override.or(file.seed).unwrap_or(defaults.seed),
        grid_step_deg: grid_step_override
            .or(file.grid_step_deg)
            .unwrap_or(defaults.grid_step_deg),
        separation_grid_deg: file
            .separation_grid_deg
            .clone()
            .unwrap_or(defaults.separation_grid_deg),
        variants,
    };
    config
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(config)
}
