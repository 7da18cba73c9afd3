//! Two-stage UAV-BS-beam association and the baseline allocators.
//!
//! Stage 1 finds, for every (UAV, BS, beam) triplet, the scan angle inside
//! the beam's azimuth sector that maximizes the directional gain.
//! Stage 2 turns those gains into received-power utilities and solves the
//! resulting M x (L*N) assignment problem exactly.
//!
//! Flattened column `j` of the utility matrix is BS `j / N`, beam `j % N`.

use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::antenna::{AntennaConfig, ScanObjective, SteeringDirection};
use crate::channel::{LinkGainTensor, RfConstants};
use crate::error::{Error, Result};
use crate::geometry::LinkTable;
use crate::scene::Scene;
use crate::seed;

pub mod annealing;
mod codebook;
pub mod hungarian;

pub use annealing::AnnealerConfig;
pub use codebook::{AzimuthSector, BeamCodebook};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptimum {
    pub phi_star: f64,
    pub gain_db: f64,
    pub evals: u64,
}

/// Stage 1 for one triplet: dual annealing of `G_5G(dir, phi_scan)` over the
/// sector, seeded from `ann.seed`.
pub fn optimize_scan_angle(
    dir: SteeringDirection,
    sector: AzimuthSector,
    cfg: &AntennaConfig,
    ann: &AnnealerConfig,
) -> ScanOptimum {
    let (lo, hi) = sector.search_bounds();
    let mut objective = ScanObjective::new(dir, cfg);
    let mut rng = seed::rng(ann.seed, &[seed::tag::STAGE1]);
    let min = annealing::dual_annealing(|phi| -objective.gain_db(phi), lo, hi, ann, &mut rng);
    ScanOptimum {
        phi_star: min.x,
        gain_db: -min.value,
        evals: min.evals,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamGainEntry {
    pub phi_star: f64,
    pub gain_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamGainTable {
    pub m: usize,
    pub l: usize,
    pub n: usize,
    /// Row-major (m, l, n).
    pub entries: Vec<BeamGainEntry>,
    pub stage1_evals: u64,
}

impl BeamGainTable {
    pub fn get(&self, m: usize, l: usize, n: usize) -> &BeamGainEntry {
        &self.entries[(m * self.l + l) * self.n + n]
    }
}

/// Runs [`optimize_scan_angle`] for all M*L*N triplets. Triplet `(m, l, n)`
/// uses seed `derive(ann.seed, [m, l, n])`, so the table does not depend on
/// thread scheduling.
pub fn build_beam_gain_table(scene: &Scene, ann: &AnnealerConfig) -> BeamGainTable {
    let (m, l, n) = (scene.m(), scene.l(), scene.n());
    let results: Vec<ScanOptimum> = (0..m * l * n)
        .into_par_iter()
        .map(|idx| {
            let (mi, rest) = (idx / (l * n), idx % (l * n));
            let (li, ni) = (rest / n, rest % n);
            let triplet = AnnealerConfig {
                seed: seed::derive(ann.seed, &[mi as u64, li as u64, ni as u64]),
                ..ann.clone()
            };
            optimize_scan_angle(
                scene.direction(mi, li),
                scene.codebook.sector(ni),
                &scene.antenna,
                &triplet,
            )
        })
        .collect();
    BeamGainTable {
        m,
        l,
        n,
        stage1_evals: results.iter().map(|r| r.evals).sum(),
        entries: results
            .iter()
            .map(|r| BeamGainEntry {
                phi_star: r.phi_star,
                gain_db: r.gain_db,
            })
            .collect(),
    }
}

/// Effective received power `Lambda_{m,l,n}` per triplet, watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityTensor {
    pub m: usize,
    pub l: usize,
    pub n: usize,
    /// Row-major (m, l, n); equivalently an M x (L*N) matrix.
    pub values: Vec<f64>,
    /// Scan angle each beam would use for each UAV.
    pub phi_star: Vec<f64>,
}

impl UtilityTensor {
    /// Utilities without scan-angle information (angles recorded as 0).
    pub fn from_values(m: usize, l: usize, n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != m * l * n {
            return Err(Error::DimensionMismatch(format!(
                "{} utilities for {m}x{l}x{n}",
                values.len()
            )));
        }
        Ok(Self {
            m,
            l,
            n,
            phi_star: vec![0.0; values.len()],
            values,
        })
    }

    pub fn get(&self, m: usize, l: usize, n: usize) -> f64 {
        self.values[(m * self.l + l) * self.n + n]
    }

    pub fn columns(&self) -> usize {
        self.l * self.n
    }
}

/// `Lambda = P |h_{m,l}|^2 10^{G/10}` with `P = tx_power_w`.
pub fn build_utility(
    table: &BeamGainTable,
    gains: &LinkGainTensor,
    rf: &RfConstants,
) -> Result<UtilityTensor> {
    if table.m != gains.m || table.l != gains.l {
        return Err(Error::DimensionMismatch(format!(
            "beam table is {}x{} but link gains are {}x{}",
            table.m, table.l, gains.m, gains.l
        )));
    }
    let mut values = Vec::with_capacity(table.entries.len());
    for m in 0..table.m {
        for l in 0..table.l {
            let h2 = gains.power_gain(m, l);
            for n in 0..table.n {
                let g = table.get(m, l, n).gain_db;
                values.push(rf.tx_power_w * h2 * 10f64.powf(g / 10.0));
            }
        }
    }
    Ok(UtilityTensor {
        m: table.m,
        l: table.l,
        n: table.n,
        values,
        phi_star: table.entries.iter().map(|e| e.phi_star).collect(),
    })
}

/// Binary association `beta` (UAV -> BS) and beam assignment `x`
/// (UAV -> BS beam), plus the scan angle each UAV's beam uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub beta: Vec<Vec<bool>>,
    pub x: Vec<Vec<Vec<bool>>>,
    pub phi_scan_chosen: Vec<f64>,
}

impl Assignment {
    pub fn empty(m: usize, l: usize, n: usize) -> Self {
        Self {
            beta: vec![vec![false; l]; m],
            x: vec![vec![vec![false; n]; l]; m],
            phi_scan_chosen: vec![0.0; m],
        }
    }

    /// Builds a feasible-by-construction assignment from one (BS, beam, scan)
    /// choice per UAV.
    pub fn from_choices(l: usize, n: usize, choices: &[(usize, usize, f64)]) -> Self {
        let mut a = Self::empty(choices.len(), l, n);
        for (m, &(bs, beam, phi)) in choices.iter().enumerate() {
            a.beta[m][bs] = true;
            a.x[m][bs][beam] = true;
            a.phi_scan_chosen[m] = phi;
        }
        a
    }

    pub fn m(&self) -> usize {
        self.beta.len()
    }

    /// The (BS, beam) pair serving UAV `m`: the first `x` entry set on an
    /// associated BS.
    pub fn serving(&self, m: usize) -> Option<(usize, usize)> {
        self.x[m].iter().enumerate().find_map(|(l, beams)| {
            if !self.beta[m][l] {
                return None;
            }
            beams.iter().position(|&b| b).map(|n| (l, n))
        })
    }

    pub fn total_utility(&self, util: &UtilityTensor) -> f64 {
        (0..self.m())
            .filter_map(|m| self.serving(m).map(|(l, n)| util.get(m, l, n)))
            .sum()
    }
}

fn check_capacity(m: usize, l: usize, n: usize) -> Result<()> {
    if m > l * n {
        return Err(Error::Infeasible {
            uavs: m,
            capacity: l * n,
        });
    }
    Ok(())
}

/// Stage 2: maximizes total utility with the Hungarian method over the
/// M x (L*N) utility matrix.
pub fn solve_assignment(util: &UtilityTensor) -> Result<Assignment> {
    check_capacity(util.m, util.l, util.n)?;
    let cols = util.columns();
    let picked = hungarian::solve_max(util.m, cols, &util.values)?;
    let choices: Vec<_> = picked
        .iter()
        .enumerate()
        .map(|(m, &j)| (j / util.n, j % util.n, util.phi_star[m * cols + j]))
        .collect();
    Ok(Assignment::from_choices(util.l, util.n, &choices))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub stage1_s: f64,
    pub stage2_s: f64,
    pub stage1_evals: u64,
}

#[derive(Debug, Clone)]
pub struct TwoStageOutcome {
    pub assignment: Assignment,
    pub table: BeamGainTable,
    pub utility: UtilityTensor,
    pub timings: StageTimings,
}

/// Stage 1 then Stage 2 on `gains`, timing each stage.
pub fn allocate_two_stage(
    scene: &Scene,
    gains: &LinkGainTensor,
    rf: &RfConstants,
    ann: &AnnealerConfig,
) -> Result<TwoStageOutcome> {
    check_capacity(scene.m(), scene.l(), scene.n())?;
    let t0 = Instant::now();
    let table = build_beam_gain_table(scene, ann);
    let stage1_s = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let utility = build_utility(&table, gains, rf)?;
    let assignment = solve_assignment(&utility)?;
    let stage2_s = t1.elapsed().as_secs_f64();

    Ok(TwoStageOutcome {
        timings: StageTimings {
            stage1_s,
            stage2_s,
            stage1_evals: table.stage1_evals,
        },
        assignment,
        table,
        utility,
    })
}

/// Uniformly random injective UAV -> (BS, beam) mapping. Beams steer to
/// their codebook sector centers since no channel or gain information is
/// used.
pub fn allocate_random(m: usize, l: usize, codebook: &BeamCodebook, seed: u64) -> Result<Assignment> {
    let n = codebook.n_beams;
    check_capacity(m, l, n)?;
    let mut rng = seed::rng(seed, &[seed::tag::RANDOM_ALLOC]);
    let mut cols: Vec<usize> = (0..l * n).collect();
    let (picked, _) = cols.partial_shuffle(&mut rng, m);
    let choices: Vec<_> = picked
        .iter()
        .map(|&j| (j / n, j % n, codebook.sector(j % n).center()))
        .collect();
    Ok(Assignment::from_choices(l, n, &choices))
}

/// Nearest-BS association with the best free beam by utility.
///
/// UAVs are served in index order. A UAV whose nearest BS has no free beam
/// moves to the next-nearest BS that has one. Distance ties and utility
/// ties go to the lower index.
pub fn allocate_closest_bs(links: &LinkTable, util: &UtilityTensor) -> Result<Assignment> {
    let (m, l, n) = (util.m, util.l, util.n);
    if links.m != m || links.l != l {
        return Err(Error::DimensionMismatch(format!(
            "links are {}x{} but utilities are {m}x{l}",
            links.m, links.l
        )));
    }
    check_capacity(m, l, n)?;
    let mut free = vec![vec![true; n]; l];
    let mut choices = Vec::with_capacity(m);
    for mi in 0..m {
        let mut order: Vec<usize> = (0..l).collect();
        order.sort_by(|&a, &b| {
            links
                .get(mi, a)
                .distance_3d
                .total_cmp(&links.get(mi, b).distance_3d)
                .then(a.cmp(&b))
        });
        let bs = order
            .into_iter()
            .find(|&li| free[li].iter().any(|&f| f))
            .ok_or(Error::Infeasible {
                uavs: m,
                capacity: l * n,
            })?;
        let mut best: Option<usize> = None;
        for ni in (0..n).filter(|&ni| free[bs][ni]) {
            if best.is_none_or(|b| util.get(mi, bs, ni) > util.get(mi, bs, b)) {
                best = Some(ni);
            }
        }
        let beam = best.expect("bs chosen with a free beam");
        free[bs][beam] = false;
        choices.push((bs, beam, util.phi_star[(mi * l + bs) * n + beam]));
    }
    Ok(Assignment::from_choices(l, n, &choices))
}
