//! Frozen thresholds from calibration runs, kept in a versioned TOML file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The fixture shipped with the crate.
pub const BUNDLED: &str = include_str!("../../fixtures/baselines.toml");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Baselines {
    pub version: u32,
    #[serde(default)]
    pub trivial_fraction: Vec<TrivialFractionBaseline>,
    #[serde(default)]
    pub erdos_kac: Vec<ErdosKacBaseline>,
}

/// Fraction of squarefree `|n| <= x` with both candidate sets trivial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrivialFractionBaseline {
    pub z: i64,
    pub x: u64,
    pub frac_trivial_both: f64,
    pub note: String,
}

/// Sup distance between the empirical CDF and `Phi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErdosKacBaseline {
    pub z: i64,
    pub x: u64,
    pub sup_distance: f64,
    pub note: String,
}

impl Baselines {
    pub fn bundled() -> Self {
        BUNDLED.parse().expect("bundled baselines parse")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path.as_ref())?.parse()
    }

    pub fn trivial_fraction(&self, z: i64, x: u64) -> Option<&TrivialFractionBaseline> {
        self.trivial_fraction.iter().find(|b| b.z == z && b.x == x)
    }

    pub fn erdos_kac(&self, z: i64, x: u64) -> Option<&ErdosKacBaseline> {
        self.erdos_kac.iter().find(|b| b.z == z && b.x == x)
    }
}

impl std::str::FromStr for Baselines {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Fixture(e.to_string()))
    }
}
