//! Experiment configuration: a TOML file selects the experiment kind and
//! the scenario, social-graph, chain, and sweep parameters. The run manifest
//! is the same structure resolved and serialized back out, so a manifest can
//! be replayed as a config.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SpectrumChain,
    SpectrumSweepPl,
    SpectrumThetaTradeoff,
    PowerSweep,
    RandomAccessSweep,
    StationaryAnalysis,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SpectrumChain => "spectrum-chain",
            Self::SpectrumSweepPl => "spectrum-sweep-pl",
            Self::SpectrumThetaTradeoff => "spectrum-theta-tradeoff",
            Self::PowerSweep => "power-sweep",
            Self::RandomAccessSweep => "random-access-sweep",
            Self::StationaryAnalysis => "stationary-analysis",
        }
    }
}

/// How users are placed for spectrum scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    /// Uniform in a square of the configured side.
    Uniform,
    /// Isolated transmit couples: anchors spaced far apart, the partner at a
    /// random offset, interference limited to the couple by the radius.
    Paired,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectrumSection {
    pub users: usize,
    pub channels: usize,
    pub topology: Topology,
    pub side: f64,
    /// Anchor spacing for the paired topology.
    pub pair_spacing: f64,
    /// Partner offset range for the paired topology.
    pub pair_distance: (f64, f64),
    pub power_dbm: f64,
    pub alpha: f64,
    pub noise_dbm: (f64, f64),
    /// "complete" or a radius in meters.
    pub interference_radius: Option<f64>,
    /// Explicit positions override random placement.
    pub positions: Option<Vec<(f64, f64)>>,
    /// Random vacant-set size range; all channels vacant when absent.
    pub vacant_size: Option<(usize, usize)>,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            users: 8,
            channels: 5,
            topology: Topology::Uniform,
            side: 500.0,
            pair_spacing: 4000.0,
            pair_distance: (300.0, 1150.0),
            power_dbm: 20.0,
            alpha: 4.0,
            noise_dbm: (-100.0, -90.0),
            interference_radius: Some(500.0),
            positions: None,
            vacant_size: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SocialKind {
    Er,
    Complete,
    Empty,
    EdgeList,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SocialSection {
    pub kind: SocialKind,
    pub p_link: f64,
    pub tie_weight: f64,
    /// Edge-list file, for `kind = "edge-list"`.
    pub path: Option<String>,
    pub symmetrize: bool,
    /// Drop ties between users further apart than this many meters.
    pub detection_range: Option<f64>,
}

impl Default for SocialSection {
    fn default() -> Self {
        Self {
            kind: SocialKind::Er,
            p_link: 0.5,
            tie_weight: 1.0,
            path: None,
            symmetrize: true,
            detection_range: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ChainSection {
    pub theta: f64,
    pub tau: f64,
    pub events: u64,
}

impl Default for ChainSection {
    fn default() -> Self {
        Self {
            theta: 1e6,
            tau: 1.0,
            events: 100_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSection {
    pub p_link_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    /// Allowed potential loss fractions for convergence detection.
    pub loss_grid: Vec<f64>,
    pub tie_grid: Vec<f64>,
    /// Events that must stay inside the loss band to call convergence.
    pub dwell_window: u64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            p_link_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            theta_grid: vec![1.0, 100.0, 1e4],
            loss_grid: vec![0.0, 0.1, 0.2],
            tie_grid: (0..=10).map(|k| k as f64 / 10.0).collect(),
            dwell_window: 100,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerSection {
    pub users: usize,
    /// Explicit two-user parameters for the tie-grid sweep.
    pub cross_gain: (f64, f64),
    pub noise: Vec<f64>,
    pub cost: Vec<f64>,
    pub direct_gain: Vec<f64>,
    /// Geometry for multi-user benchmark mode.
    pub side: f64,
    pub alpha: f64,
    /// "tie-grid" (two users, closed forms) or "benchmark" (multi-user
    /// iteration against the selfish and fully altruistic endpoints).
    pub mode: String,
    /// Optional box constraint on transmit powers, watts.
    pub cap: Option<f64>,
}

impl Default for PowerSection {
    fn default() -> Self {
        Self {
            users: 2,
            cross_gain: (1.0, 1.0),
            noise: vec![1.0, 1.0],
            cost: vec![1.0, 1.0],
            direct_gain: vec![1.0, 1.0],
            side: 500.0,
            alpha: 3.0,
            mode: "tie-grid".into(),
            cap: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RandomAccessSection {
    pub users: usize,
    pub side: f64,
    /// A transmitter interferes with receivers inside this radius.
    pub radius: f64,
    pub efficiency: f64,
    pub cost: f64,
}

impl Default for RandomAccessSection {
    fn default() -> Self {
        Self {
            users: 6,
            side: 500.0,
            radius: 100.0,
            efficiency: 1.0,
            cost: 1.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_replications")]
    pub replications: u64,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub social: SocialSection,
    #[serde(default)]
    pub chain: ChainSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub power: PowerSection,
    #[serde(default)]
    pub random_access: RandomAccessSection,
}

fn default_seed() -> u64 {
    0
}

fn default_replications() -> u64 {
    1
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate(path.parent())?;
        Ok(cfg)
    }

    pub fn validate(&self, base_dir: Option<&Path>) -> Result<()> {
        if self.replications == 0 {
            bail!("replications must be at least 1");
        }
        if self.seed > i64::MAX as u64 {
            bail!("seed must fit a TOML integer (at most {})", i64::MAX);
        }
        if self.chain.theta < 0.0 || !self.chain.theta.is_finite() {
            bail!("chain.theta must be finite and nonnegative");
        }
        if self.chain.tau <= 0.0 {
            bail!("chain.tau must be positive");
        }
        if self.spectrum.users == 0 || self.spectrum.channels == 0 {
            bail!("spectrum.users and spectrum.channels must be positive");
        }
        if let Some((lo, hi)) = self.spectrum.vacant_size {
            if lo == 0 || lo > hi || hi > self.spectrum.channels {
                bail!("spectrum.vacant_size must satisfy 1 <= lo <= hi <= channels");
            }
        }
        if let Some(positions) = &self.spectrum.positions {
            if positions.len() != self.spectrum.users {
                bail!(
                    "spectrum.positions lists {} points for {} users",
                    positions.len(),
                    self.spectrum.users
                );
            }
        }
        for theta in &self.sweep.theta_grid {
            if *theta < 0.0 {
                bail!("sweep.theta_grid entries must be nonnegative");
            }
        }
        for p in &self.sweep.p_link_grid {
            if !(0.0..=1.0).contains(p) {
                bail!("sweep.p_link_grid entries must lie in [0, 1]");
            }
        }
        if self.social.kind == SocialKind::EdgeList {
            let Some(rel) = &self.social.path else {
                bail!("social.kind = edge-list requires social.path");
            };
            let path = match base_dir {
                Some(dir) => dir.join(rel),
                None => Path::new(rel).to_path_buf(),
            };
            if !path.exists() {
                bail!("social edge-list file {} does not exist", path.display());
            }
        }
        match self.power.mode.as_str() {
            "tie-grid" | "benchmark" => {}
            other => bail!("power.mode must be tie-grid or benchmark, got {other}"),
        }
        if self.power.mode == "tie-grid" && self.power.users != 2 {
            bail!("power tie-grid sweeps are two-user by construction");
        }
        Ok(())
    }

    /// Serialize the fully resolved configuration.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

/// Replication seeds derive from the master seed by SplitMix64 over the
/// replication index, so runs are independent yet fully reproducible.
pub fn replication_seed(master: u64, index: u64) -> u64 {
    const GAMMA: u64 = 0x9E3779B97F4A7C15;
    let mut z = master ^ (index.wrapping_add(1)).wrapping_mul(GAMMA);
    z = z.wrapping_add(GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}
