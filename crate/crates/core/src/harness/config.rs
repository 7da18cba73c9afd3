//! Scenario configuration file (JSON). Every field is optional; omitted
//! fields take the nominal values (3.5 GHz, 30 MHz, 10 W, 0.3 W, 4 BSs with
//! 4x4 arrays, 16 beams, 20 UAVs at 100 m).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::allocator::{AnnealerConfig, BeamCodebook};
use crate::antenna::AntennaConfig;
use crate::channel::{ChannelProviderSpec, ProviderKind, RfConstants};
use crate::error::{Error, Result};
use crate::evaluator::EvaluationConfig;
use crate::geometry::{square_layout, validate_sites, BaseStationSite, CorridorSpec, Position3D};
use crate::scene::Scene;
use crate::units::degrees_opt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllocatorKind {
    TwoStage,
    Random,
    ClosestBs,
}

/// Which tensor the allocator sees. Scoring always uses the HF tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllocationChannel {
    Hf,
    Lf,
    Statistical,
}

macro_rules! parse_enum {
    ($ty:ty, $($name:literal => $v:path),+ $(,)?) => {
        impl std::str::FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s.replace('-', "_").as_str() {
                    $($name => Ok($v),)+
                    other => Err(format!(
                        "unknown value {other:?} (expected one of: {})",
                        [$($name),+].join(", ")
                    )),
                }
            }
        }

        impl std::fmt::Display for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                let name = match self { $($v => $name,)+ };
                f.write_str(name)
            }
        }
    };
}

parse_enum!(AllocatorKind,
    "two_stage" => AllocatorKind::TwoStage,
    "random" => AllocatorKind::Random,
    "closest_bs" => AllocatorKind::ClosestBs,
);

parse_enum!(AllocationChannel,
    "hf" => AllocationChannel::Hf,
    "lf" => AllocationChannel::Lf,
    "statistical" => AllocationChannel::Statistical,
);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteConfig {
    pub position: Position3D,
    /// Array normal, degrees from east. Defaults to facing the corridor
    /// center.
    #[serde(default, with = "degrees_opt", rename = "boresight_deg")]
    pub boresight: Option<f64>,
}

/// Settings of the low-fidelity twin derived from the HF tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LowFidelitySpec {
    pub ray_count: u64,
}

impl Default for LowFidelitySpec {
    fn default() -> Self {
        Self { ray_count: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub rf: RfConstants,
    pub antenna: AntennaConfig,
    pub codebook: BeamCodebook,
    pub bss: Vec<SiteConfig>,
    pub corridor: CorridorSpec,
    pub uav_count: usize,
    /// Evaluation (high-fidelity) channel.
    pub channel_hf: ChannelProviderSpec,
    pub channel_lf: LowFidelitySpec,
    pub allocator: AllocatorKind,
    pub allocation_channel: AllocationChannel,
    pub evaluation: EvaluationConfig,
    pub annealer: AnnealerConfig,
    pub seed: u64,
    pub replications: usize,
}

pub const DEFAULT_BS_HEIGHT_M: f64 = 25.0;
pub const DEFAULT_SQUARE_SIDE_M: f64 = 400.0;

impl Default for ScenarioConfig {
    fn default() -> Self {
        let center = Position3D::new(0.0, 0.0, 0.0);
        Self {
            rf: RfConstants::default(),
            antenna: AntennaConfig::default(),
            codebook: BeamCodebook::default(),
            bss: square_layout(&center, DEFAULT_SQUARE_SIDE_M, DEFAULT_BS_HEIGHT_M)
                .into_iter()
                .map(|s| SiteConfig {
                    position: s.position,
                    boresight: None,
                })
                .collect(),
            corridor: CorridorSpec {
                center,
                radius: 200.0,
                altitude: 100.0,
            },
            uav_count: 20,
            channel_hf: ChannelProviderSpec {
                kind: ProviderKind::Statistical,
                ..Default::default()
            },
            channel_lf: LowFidelitySpec::default(),
            allocator: AllocatorKind::TwoStage,
            allocation_channel: AllocationChannel::Hf,
            evaluation: EvaluationConfig::default(),
            annealer: AnnealerConfig::default(),
            seed: 1,
            replications: 1,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }

    /// Every problem with the configuration, in field order.
    pub fn problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        p.extend(self.rf.validate());
        p.extend(self.antenna.validate());
        if self.codebook.n_beams == 0 {
            p.push("codebook.n_beams must be >= 1".into());
        }
        if self.bss.is_empty() {
            p.push("bss must list at least one site".into());
        }
        p.extend(validate_sites(&self.sites()));
        p.extend(self.corridor.validate());
        if self.uav_count == 0 {
            p.push("uav_count must be >= 1".into());
        }
        let capacity = self.bss.len() * self.codebook.n_beams;
        if self.uav_count > capacity {
            p.push(format!(
                "uav_count = {} exceeds the {} BS-beam pairs (L*N = {} * {})",
                self.uav_count,
                capacity,
                self.bss.len(),
                self.codebook.n_beams
            ));
        }
        p.extend(self.channel_hf.validate("channel_hf"));
        if let Some(path) = &self.channel_hf.import_path {
            if self.channel_hf.kind == ProviderKind::Import && !path.exists() {
                p.push(format!("channel_hf.import_path {} does not exist", path.display()));
            }
        }
        if self.channel_lf.ray_count == 0 {
            p.push("channel_lf.ray_count must be >= 1".into());
        }
        p.extend(self.evaluation.validate(self.uav_count, self.bss.len()));
        p.extend(self.annealer.validate());
        if self.replications == 0 {
            p.push("replications must be >= 1".into());
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(p))
        }
    }

    /// Sites with ids 1..=L and resolved boresights.
    pub fn sites(&self) -> Vec<BaseStationSite> {
        self.bss
            .iter()
            .enumerate()
            .map(|(i, s)| match s.boresight {
                Some(b) => BaseStationSite {
                    id: i + 1,
                    position: s.position,
                    boresight_azimuth: b,
                },
                None => BaseStationSite::facing(i + 1, s.position, &self.corridor.center),
            })
            .collect()
    }

    pub fn scene(&self) -> Result<Scene> {
        let uavs = crate::geometry::generate_corridor(&self.corridor, self.uav_count)?;
        Scene::new(self.sites(), uavs, self.antenna.clone(), self.codebook)
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config is always serializable");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn import_path(&self) -> Option<&PathBuf> {
        self.channel_hf.import_path.as_ref()
    }
}
