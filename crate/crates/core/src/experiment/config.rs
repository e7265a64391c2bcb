//! JSON configuration documents.
//!
//! ```json
//! {
//!   "network":    { "num_cells": 30, "num_lists": 10, "list_size": 16, ... },
//!   "mopso":      { "population": 200, "iterations": 100, ... },
//!   "experiment": { "speed_ranges": [[0, 8], [8, 16]], "seeds": [1, 2], ... }
//! }
//! ```
//!
//! Every key is optional; missing keys take the defaults below.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mopso::MopsoParams;
use crate::network::NetworkConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MopsoSettings {
    pub population: usize,
    pub iterations: usize,
    pub intervals: usize,
    pub k1: f64,
    pub k2: f64,
    pub local_archive_cap: usize,
    pub global_archive_cap: usize,
    pub initial_inertia: f64,
    pub inertia_decay: f64,
    pub x_min: f64,
    pub x_max: f64,
}

impl Default for MopsoSettings {
    fn default() -> Self {
        let p = MopsoParams::new(0);
        Self {
            population: p.population,
            iterations: p.iterations,
            intervals: p.intervals,
            k1: p.k1,
            k2: p.k2,
            local_archive_cap: p.local_archive_cap,
            global_archive_cap: p.global_archive_cap,
            initial_inertia: p.initial_inertia,
            inertia_decay: p.inertia_decay,
            x_min: 0.0,
            x_max: 1.0,
        }
    }
}

pub const FULL_SCALE_POPULATION: usize = 10_000;
pub const FULL_SCALE_ITERATIONS: usize = 400;

impl MopsoSettings {
    pub fn full_scale(mut self) -> Self {
        self.population = FULL_SCALE_POPULATION;
        self.iterations = FULL_SCALE_ITERATIONS;
        self
    }

    pub fn params(&self, num_params: usize, seed: u64) -> MopsoParams {
        MopsoParams {
            population: self.population,
            iterations: self.iterations,
            intervals: self.intervals,
            k1: self.k1,
            k2: self.k2,
            local_archive_cap: self.local_archive_cap,
            global_archive_cap: self.global_archive_cap,
            initial_inertia: self.initial_inertia,
            inertia_decay: self.inertia_decay,
            x_min: vec![self.x_min; num_params],
            x_max: vec![self.x_max; num_params],
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.x_min) || !(0.0..=1.0).contains(&self.x_max) {
            return Err(Error::config("x_min", "position bounds must lie within [0, 1]"));
        }
        self.params(1, 0).validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SpeedSampling {
    /// Midpoint of the range.
    #[default]
    Midpoint,
    /// One uniform draw per trial, derived from the trial seed.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentPlan {
    pub speed_ranges: Vec<[f64; 2]>,
    pub trials_per_range: usize,
    pub seeds: Vec<u64>,
    pub speed_sampling: SpeedSampling,
    pub output_dir: PathBuf,
    /// Usage grid step for exhaustive reference fronts.
    pub oracle_grid_step: f64,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        Self {
            speed_ranges: vec![[0.0, 8.0], [8.0, 16.0], [16.0, 25.0], [25.0, 33.0]],
            trials_per_range: 4,
            seeds: vec![1, 2, 3, 4],
            speed_sampling: SpeedSampling::Midpoint,
            output_dir: PathBuf::from("results"),
            oracle_grid_step: 0.1,
        }
    }
}

impl ExperimentPlan {
    pub fn validate(&self, network: &NetworkConfig) -> Result<()> {
        if self.speed_ranges.is_empty() {
            return Err(Error::config("speed_ranges", "at least one range is required"));
        }
        if self.trials_per_range == 0 {
            return Err(Error::config("trials_per_range", "must be at least 1"));
        }
        if self.trials_per_range != self.seeds.len() {
            return Err(Error::config(
                "seeds",
                format!(
                    "{} seeds given for {} trials per range",
                    self.seeds.len(),
                    self.trials_per_range
                ),
            ));
        }
        let [net_lo, net_hi] = network.speed_range;
        for (i, &[lo, hi]) in self.speed_ranges.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
                return Err(Error::config(
                    "speed_ranges",
                    format!("range {i} is invalid: [{lo}, {hi}]"),
                ));
            }
            if lo < net_lo || hi > net_hi {
                return Err(Error::config(
                    "speed_ranges",
                    format!("range {i} [{lo}, {hi}] exceeds network.speed_range [{net_lo}, {net_hi}]"),
                ));
            }
            if i > 0 && lo < self.speed_ranges[i - 1][1] {
                return Err(Error::config(
                    "speed_ranges",
                    format!("range {i} overlaps or precedes range {}", i - 1),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigDocument {
    pub network: NetworkConfig,
    pub mopso: MopsoSettings,
    pub experiment: ExperimentPlan,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Self::default());
        }
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        self.mopso.validate()?;
        self.experiment.validate(&self.network)
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<ConfigDocument> {
    let text = std::fs::read_to_string(path)?;
    let doc = ConfigDocument::parse(&text)?;
    doc.validate()?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        for text in ["", "{}", "  \n"] {
            let doc = ConfigDocument::parse(text).unwrap();
            doc.validate().unwrap();
            let n = &doc.network;
            assert_eq!((n.num_cells, n.num_lists, n.list_size), (30, 10, 16));
            assert_eq!(n.users(0), 100.0);
            assert_eq!(n.paging_rate, 0.05);
            assert_eq!(n.cell_radius, 500.0);
            let m = &doc.mopso;
            assert_eq!((m.intervals, m.local_archive_cap, m.global_archive_cap), (5, 5, 10));
            assert_eq!((m.k1, m.k2), (2.0, 2.0));
            assert_eq!((m.population, m.iterations), (200, 100));
            assert_eq!(doc.experiment.speed_ranges.len(), 4);
            assert_eq!(doc.experiment.speed_ranges[3], [25.0, 33.0]);
        }
    }

    #[test]
    fn full_scale_settings() {
        let m = MopsoSettings::default().full_scale();
        assert_eq!((m.population, m.iterations), (10_000, 400));
        assert_eq!(m.params(600, 0).num_params(), 600);
    }

    #[test]
    fn list_larger_than_network_is_rejected() {
        let doc = ConfigDocument::parse(r#"{"network": {"list_size": 31, "max_offdiag": 1000}}"#).unwrap();
        let err = doc.validate().unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "list_size"), "{err}");
    }

    #[test]
    fn seed_count_must_match_trials() {
        let doc = ConfigDocument::parse(r#"{"experiment": {"trials_per_range": 4, "seeds": [1, 2, 3]}}"#).unwrap();
        let err = doc.validate().unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "seeds"), "{err}");
    }

    #[test]
    fn overlapping_ranges_are_rejected() {
        let doc = ConfigDocument::parse(r#"{"experiment": {"speed_ranges": [[0, 10], [8, 16]]}}"#).unwrap();
        assert!(doc.validate().is_err());
    }

    #[test]
    fn unknown_keys_are_parse_errors() {
        let err = ConfigDocument::parse(r#"{"network": {"cells": 3}}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn per_cell_users() {
        let doc = ConfigDocument::parse(
            r#"{"network": {"num_cells": 4, "num_lists": 1, "list_size": 2, "max_offdiag": 2,
                "grid_rows": 2, "grid_cols": 2, "users_per_cell": [10, 20, 30, 40]}}"#,
        )
        .unwrap();
        doc.validate().unwrap();
        assert_eq!(doc.network.users(2), 30.0);
    }
}
