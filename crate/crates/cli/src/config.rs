//! Run configuration, its validation against desk-scale caps, and its hash.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use berezin_core::fuchsian::{
    enumerate_orbit, octagon_group, trivial_group, FuchsianGroup, OrbitTable, DEFAULT_DEDUP_TOL,
};
use berezin_core::Weight;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupSource {
    Octagon,
    Trivial,
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything that determines the output of a run. Thread count is not part
/// of it: results must not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub r: f64,
    pub group: GroupSource,
    /// Orbit enumeration depth (word length).
    pub depth: usize,
    /// Depth used for the orbit-counting trend.
    pub counting_depth: usize,
    /// Gauss orders of the disk rules.
    pub disk_radial: usize,
    pub disk_angular: usize,
    /// Per-sector orders of the fundamental-domain rules.
    pub domain_angular: usize,
    pub domain_radial: usize,
    /// Number of random probe points or pairs.
    pub probes: usize,
    /// Largest tile count for the truncation sequences and orbit sums.
    pub n_max: usize,
    pub format: Format,
    pub seed: u64,
    /// Acceptance criteria run by `verify`; empty means all.
    pub checks: Vec<u32>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            r: 8.0,
            group: GroupSource::Octagon,
            depth: 5,
            counting_depth: 6,
            disk_radial: 48,
            disk_angular: 96,
            domain_angular: 8,
            domain_radial: 8,
            probes: 5,
            n_max: 9,
            format: Format::Json,
            seed: 20_240_601,
            checks: Vec::new(),
        }
    }
}

pub const MAX_DEPTH: usize = 6;
pub const MAX_DISK_ORDER: usize = 512;
pub const MAX_DOMAIN_ORDER: usize = 24;
pub const MAX_PROBES: usize = 64;
pub const MAX_N: usize = 16;
pub const CRITERIA: u32 = 11;

fn within(name: &str, v: usize, lo: usize, hi: usize) -> CliResult<()> {
    if v < lo || v > hi {
        return Err(CliError::Config(format!(
            "{name} = {v} outside {lo}..={hi}"
        )));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let c: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> CliResult<()> {
        Weight::new(self.r)?;
        if self.r > 64.0 {
            return Err(CliError::Config(format!(
                "r = {} above the cap of 64",
                self.r
            )));
        }
        within("depth", self.depth, 2, MAX_DEPTH)?;
        within("counting_depth", self.counting_depth, 2, MAX_DEPTH)?;
        within("disk_radial", self.disk_radial, 4, MAX_DISK_ORDER)?;
        within("disk_angular", self.disk_angular, 4, MAX_DISK_ORDER)?;
        within("domain_angular", self.domain_angular, 1, MAX_DOMAIN_ORDER)?;
        within("domain_radial", self.domain_radial, 1, MAX_DOMAIN_ORDER)?;
        within("probes", self.probes, 1, MAX_PROBES)?;
        within("n_max", self.n_max, 1, MAX_N)?;
        if let Some(c) = self.checks.iter().find(|&&c| c == 0 || c > CRITERIA) {
            return Err(CliError::Config(format!(
                "unknown check {c}; checks are 1..={CRITERIA}"
            )));
        }
        Ok(())
    }

    pub fn weight(&self) -> CliResult<Weight> {
        Ok(Weight::new(self.r)?)
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn load_group(&self) -> CliResult<FuchsianGroup> {
        Ok(match &self.group {
            GroupSource::Octagon => octagon_group(),
            GroupSource::Trivial => trivial_group(),
            GroupSource::File(p) => FuchsianGroup::load(p)?,
        })
    }

    pub fn table(&self, depth: usize) -> CliResult<OrbitTable> {
        let g = self.load_group()?;
        let depth = if g.is_trivial() { 1 } else { depth };
        Ok(enumerate_orbit(&g, depth, DEFAULT_DEDUP_TOL)?)
    }

    pub fn enabled(&self, criterion: u32) -> bool {
        self.checks.is_empty() || self.checks.contains(&criterion)
    }

    /// Genus implied by the group source, when known.
    pub fn genus(&self) -> CliResult<Option<u32>> {
        Ok(match &self.group {
            GroupSource::Octagon => Some(2),
            GroupSource::Trivial => None,
            GroupSource::File(_) => self.load_group()?.declared_genus(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_hash_is_stable() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!(c.hash(), RunConfig::default().hash());
        let d = RunConfig {
            seed: 1,
            ..RunConfig::default()
        };
        assert_ne!(c.hash(), d.hash());
    }

    #[test]
    fn caps_and_unknown_fields_are_rejected() {
        assert!(RunConfig::from_json(r#"{"depth": 9}"#).is_err());
        assert!(RunConfig::from_json(r#"{"r": 1.5}"#).is_err());
        assert!(RunConfig::from_json(r#"{"checks": [12]}"#).is_err());
        assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
        let c = RunConfig::from_json(r#"{"group": {"file": "g.txt"}, "n_max": 4}"#).unwrap();
        assert_eq!(c.group, GroupSource::File("g.txt".into()));
        assert_eq!(c.n_max, 4);
    }
}
