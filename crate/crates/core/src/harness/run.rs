use std::borrow::Cow;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{AllocationChannel, AllocatorKind, ScenarioConfig};
use crate::allocator::{
    allocate_closest_bs, allocate_random, allocate_two_stage, build_beam_gain_table,
    build_utility, AnnealerConfig, Assignment, StageTimings,
};
use crate::antenna::{array_gain, element_gain, total_gain, SteeringDirection};
use crate::channel::{self, degrade, generate_statistical, ChannelProviderSpec, ProviderKind};
use crate::error::{Error, Result};
use crate::evaluator::{evaluate_all, validate, EvalContext, ThroughputReport};
use crate::scene::Scene;
use crate::seed::{self, tag};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioLabel {
    pub allocator: AllocatorKind,
    pub allocation_channel: AllocationChannel,
    pub evaluation_channel: ProviderKind,
    pub uav_count: usize,
    pub altitude_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub scenario: ScenarioLabel,
    pub seed: u64,
    pub config_digest: String,
    pub replications: Vec<ThroughputReport>,
    /// Mean over replications of the per-replication mean UAV rate.
    pub mean_rate_bps: f64,
    /// Sample standard deviation of the per-replication mean UAV rate.
    pub std_rate_bps: f64,
    pub config: ScenarioConfig,
}

impl ExperimentResult {
    pub fn mean_rate_mbps(&self) -> f64 {
        self.mean_rate_bps / 1e6
    }

    pub fn timings(&self) -> impl Iterator<Item = &StageTimings> {
        self.replications.iter().map(|r| &r.timings)
    }
}

/// Seed of replication `r`; independent of every scenario parameter so
/// that sweeps and allocator comparisons are paired.
pub fn replication_seed(base: u64, r: usize) -> u64 {
    seed::derive(base, &[tag::REPLICATION, r as u64])
}

fn hf_spec(config: &ScenarioConfig, rep_seed: u64) -> ChannelProviderSpec {
    ChannelProviderSpec {
        seed: seed::derive(rep_seed, &[tag::CHANNEL_HF]),
        ..config.channel_hf.clone()
    }
}

fn run_replication(
    config: &ScenarioConfig,
    scene: &Scene,
    digest: &str,
    r: usize,
) -> Result<ThroughputReport> {
    let rep_seed = replication_seed(config.seed, r);
    let hf = channel::generate(&scene.links, &hf_spec(config, rep_seed), &config.rf)?;

    let alloc_gains = match config.allocation_channel {
        AllocationChannel::Hf => Cow::Borrowed(&hf),
        AllocationChannel::Lf => Cow::Owned(degrade(
            &hf,
            config.channel_lf.ray_count,
            seed::derive(rep_seed, &[tag::CHANNEL_LF]),
        )),
        AllocationChannel::Statistical => {
            let spec = ChannelProviderSpec {
                kind: ProviderKind::Statistical,
                seed: seed::derive(rep_seed, &[tag::CHANNEL_MODEL]),
                rician_k_db: config.channel_hf.rician_k_db,
                ..Default::default()
            };
            Cow::Owned(generate_statistical(&scene.links, &spec, &config.rf)?)
        }
    };

    let ann = AnnealerConfig {
        seed: seed::derive(rep_seed, &[tag::STAGE1]),
        ..config.annealer.clone()
    };
    let (assignment, timings): (Assignment, StageTimings) = match config.allocator {
        AllocatorKind::TwoStage => {
            let out = allocate_two_stage(scene, &alloc_gains, &config.rf, &ann)?;
            (out.assignment, out.timings)
        }
        AllocatorKind::Random => {
            let t = Instant::now();
            let a = allocate_random(
                scene.m(),
                scene.l(),
                &scene.codebook,
                seed::derive(rep_seed, &[tag::RANDOM_ALLOC]),
            )?;
            let timings = StageTimings {
                stage2_s: t.elapsed().as_secs_f64(),
                ..Default::default()
            };
            (a, timings)
        }
        AllocatorKind::ClosestBs => {
            let t0 = Instant::now();
            let table = build_beam_gain_table(scene, &ann);
            let stage1_s = t0.elapsed().as_secs_f64();
            let t1 = Instant::now();
            let util = build_utility(&table, &alloc_gains, &config.rf)?;
            let a = allocate_closest_bs(&scene.links, &util)?;
            let timings = StageTimings {
                stage1_s,
                stage2_s: t1.elapsed().as_secs_f64(),
                stage1_evals: table.stage1_evals,
            };
            (a, timings)
        }
    };

    let violations = validate(&assignment, scene.m(), scene.l(), scene.n());
    if !violations.is_empty() {
        return Err(Error::Config(
            violations.iter().map(|v| format!("allocator output: {v}")).collect(),
        ));
    }

    let ctx = EvalContext {
        scene,
        gains: &hf,
        rf: &config.rf,
        cfg: &config.evaluation,
    };
    let mut report = evaluate_all(&assignment, &ctx)?;
    report.seed = rep_seed;
    report.config_digest = digest.to_string();
    report.timings = timings;
    Ok(report)
}

fn mean_and_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let std = if xs.len() > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// Runs every replication: HF channel, allocation-side channel, allocator,
/// constraint check, scoring on the HF channel.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let scene = config.scene()?;
    let digest = config.digest();
    let replications: Vec<ThroughputReport> = (0..config.replications)
        .into_par_iter()
        .map(|r| run_replication(config, &scene, &digest, r))
        .collect::<Result<_>>()?;
    let means: Vec<f64> = replications.iter().map(|r| r.mean_rate_bps).collect();
    let (mean_rate_bps, std_rate_bps) = mean_and_std(&means);
    Ok(ExperimentResult {
        scenario: ScenarioLabel {
            allocator: config.allocator,
            allocation_channel: config.allocation_channel,
            evaluation_channel: config.channel_hf.kind,
            uav_count: config.uav_count,
            altitude_m: config.corridor.altitude,
        },
        seed: config.seed,
        config_digest: digest,
        replications,
        mean_rate_bps,
        std_rate_bps,
        config: config.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    UavCount,
    Altitude,
}

/// One [`run_scenario`] per value of `axis`, all sharing `base.seed`.
pub fn sweep(base: &ScenarioConfig, axis: SweepAxis, values: &[f64]) -> Result<Vec<ExperimentResult>> {
    if values.is_empty() {
        return Err(Error::config("sweep needs at least one value"));
    }
    values
        .iter()
        .map(|&v| {
            let mut c = base.clone();
            match axis {
                SweepAxis::UavCount => {
                    if !(v >= 1.0 && v.fract() == 0.0) {
                        return Err(Error::config(format!("uav count {v} is not a positive integer")));
                    }
                    c.uav_count = v as usize;
                }
                SweepAxis::Altitude => c.corridor.altitude = v,
            }
            run_scenario(&c)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub uav_count: usize,
    pub triplets: usize,
    pub stage1_evals: u64,
    pub stage1_s: f64,
    pub stage2_s: f64,
    pub total_s: f64,
}

/// Times the two-stage allocator at each UAV count on the first
/// replication's HF channel. Each stage time is the minimum over
/// `config.replications` repeats.
pub fn benchmark(config: &ScenarioConfig, uav_counts: &[usize]) -> Result<Vec<BenchRow>> {
    uav_counts
        .iter()
        .map(|&m| {
            let mut c = config.clone();
            c.uav_count = m;
            c.validate()?;
            let scene = c.scene()?;
            let rep_seed = replication_seed(c.seed, 0);
            let hf = channel::generate(&scene.links, &hf_spec(&c, rep_seed), &c.rf)?;
            let ann = AnnealerConfig {
                seed: seed::derive(rep_seed, &[tag::STAGE1]),
                ..c.annealer.clone()
            };
            let mut best: Option<StageTimings> = None;
            for _ in 0..c.replications.max(1) {
                let t = allocate_two_stage(&scene, &hf, &c.rf, &ann)?.timings;
                best = Some(match best {
                    None => t,
                    Some(b) => StageTimings {
                        stage1_s: b.stage1_s.min(t.stage1_s),
                        stage2_s: b.stage2_s.min(t.stage2_s),
                        stage1_evals: t.stage1_evals,
                    },
                });
            }
            let t = best.expect("at least one repeat");
            Ok(BenchRow {
                uav_count: m,
                triplets: scene.m() * scene.l() * scene.n(),
                stage1_evals: t.stage1_evals,
                stage1_s: t.stage1_s,
                stage2_s: t.stage2_s,
                total_s: t.stage1_s + t.stage2_s,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainSweepRow {
    pub phi_deg: f64,
    pub element_db: f64,
    pub array_db: f64,
    pub total_db: f64,
}

/// Gain versus azimuth at fixed zenith angle and scan angle, `points`
/// samples over [-180, 180] degrees.
pub fn gain_sweep(
    antenna: &crate::antenna::AntennaConfig,
    theta_deg: f64,
    scan_deg: f64,
    points: usize,
) -> Vec<GainSweepRow> {
    let points = points.max(2);
    (0..points)
        .map(|i| {
            let phi_deg = -180.0 + 360.0 * i as f64 / (points - 1) as f64;
            let dir = SteeringDirection::from_degrees(theta_deg, phi_deg);
            let scan = scan_deg.to_radians();
            GainSweepRow {
                phi_deg,
                element_db: element_gain(dir.theta, dir.phi, antenna),
                array_db: array_gain(dir, scan, antenna),
                total_db: total_gain(dir, scan, antenna),
            }
        })
        .collect()
}
