//! SINR, interference and Shannon throughput for any assignment, plus the
//! constraint checker shared by every allocator.
//!
//! Scoring always uses the tensor passed in; the harness passes the
//! high-fidelity tensor regardless of which tensor drove the allocation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::allocator::{Assignment, StageTimings};
use crate::antenna::total_gain;
use crate::channel::{LinkGainTensor, RfConstants};
use crate::error::{Error, Result};
use crate::scene::Scene;

/// Which UAV's association gates an interference term.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterferenceIndexing {
    /// Beam `n'` of BS `l'` interferes when it serves another UAV `m'`.
    #[default]
    Interferer,
    /// Indices exactly as printed (`beta_{m,l'}` of the victim); identically
    /// zero for assignments satisfying C1.
    Victim,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationConfig {
    pub num_rrbs: usize,
    /// `alpha[m][l][r]`; `None` schedules every link on every RRB.
    pub rrb_schedule: Option<Vec<Vec<Vec<bool>>>>,
    pub interference_indexing: InterferenceIndexing,
    /// Use `P / N` per beam instead of `P`.
    pub split_power_across_beams: bool,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self {
            num_rrbs: 1,
            rrb_schedule: None,
            interference_indexing: InterferenceIndexing::Interferer,
            split_power_across_beams: false,
        }
    }
}

impl EvaluationConfig {
    pub fn validate(&self, m: usize, l: usize) -> Vec<String> {
        let mut p = Vec::new();
        if self.num_rrbs == 0 {
            p.push("evaluation.num_rrbs must be >= 1".into());
        }
        if let Some(s) = &self.rrb_schedule {
            let ok = s.len() == m
                && s.iter()
                    .all(|row| row.len() == l && row.iter().all(|r| r.len() == self.num_rrbs));
            if !ok {
                p.push(format!(
                    "evaluation.rrb_schedule must be {m} x {l} x {}",
                    self.num_rrbs
                ));
            }
        }
        p
    }

    fn scheduled(&self, m: usize, l: usize, r: usize) -> bool {
        self.rrb_schedule.as_ref().is_none_or(|s| s[m][l][r])
    }

    pub fn beam_power(&self, rf: &RfConstants, n_beams: usize) -> f64 {
        if self.split_power_across_beams {
            rf.tx_power_w / n_beams as f64
        } else {
            rf.tx_power_w
        }
    }
}

/// Everything the scoring functions read.
#[derive(Debug, Clone, Copy)]
pub struct EvalContext<'a> {
    pub scene: &'a Scene,
    pub gains: &'a LinkGainTensor,
    pub rf: &'a RfConstants,
    pub cfg: &'a EvaluationConfig,
}

impl EvalContext<'_> {
    fn received(&self, m: usize, l: usize, phi_scan: f64) -> f64 {
        let g = total_gain(self.scene.direction(m, l), phi_scan, &self.scene.antenna);
        self.cfg.beam_power(self.rf, self.scene.n())
            * self.gains.power_gain(m, l)
            * 10f64.powf(g / 10.0)
    }
}

/// Interference at UAV `m` on RRB `r`, watts.
pub fn interference_at(m: usize, r: usize, a: &Assignment, ctx: &EvalContext) -> f64 {
    let Some((serving_bs, _)) = a.serving(m) else {
        return 0.0;
    };
    let (big_m, l, n) = (ctx.scene.m(), ctx.scene.l(), ctx.scene.n());
    let mut total = 0.0;
    for lp in (0..l).filter(|&lp| lp != serving_bs) {
        for mp in (0..big_m).filter(|&mp| mp != m) {
            let owner = match ctx.cfg.interference_indexing {
                InterferenceIndexing::Interferer => mp,
                InterferenceIndexing::Victim => m,
            };
            if !a.beta[owner][lp] || !ctx.cfg.scheduled(owner, lp, r) {
                continue;
            }
            for np in 0..n {
                if a.x[owner][lp][np] {
                    total += ctx.received(m, lp, a.phi_scan_chosen[owner]);
                }
            }
        }
    }
    total
}

/// SINR of UAV `m` on RRB `r`; `None` if the UAV is unserved or its link is
/// not scheduled on `r`.
pub fn sinr(m: usize, r: usize, a: &Assignment, ctx: &EvalContext) -> Option<f64> {
    let (l, _) = a.serving(m)?;
    if !ctx.cfg.scheduled(m, l, r) {
        return None;
    }
    let signal = ctx.received(m, l, a.phi_scan_chosen[m]);
    Some(signal / (interference_at(m, r, a, ctx) + ctx.rf.noise_power_w))
}

/// `R_m = W sum_r log2(1 + SINR_r)`, bits/s.
pub fn throughput(m: usize, a: &Assignment, ctx: &EvalContext) -> f64 {
    (0..ctx.cfg.num_rrbs)
        .filter_map(|r| sinr(m, r, a, ctx))
        .map(|s| ctx.rf.bandwidth_hz * (1.0 + s).log2())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ServingLink {
    pub bs: usize,
    pub beam: usize,
    pub phi_scan: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputReport {
    /// Mean linear SINR over the RRBs each UAV is scheduled on.
    pub per_uav_sinr: Vec<f64>,
    pub per_uav_rate_bps: Vec<f64>,
    pub serving: Vec<Option<ServingLink>>,
    pub total_rate_bps: f64,
    pub mean_rate_bps: f64,
    pub seed: u64,
    pub config_digest: String,
    /// Wall-clock measurements; not serialized so reports stay
    /// reproducible byte for byte.
    #[serde(skip)]
    pub timings: StageTimings,
}

pub fn evaluate_all(a: &Assignment, ctx: &EvalContext) -> Result<ThroughputReport> {
    let (m, l) = (ctx.scene.m(), ctx.scene.l());
    if a.m() != m || ctx.gains.m != m || ctx.gains.l != l {
        return Err(Error::DimensionMismatch(format!(
            "assignment has {} UAVs, gains are {}x{}, scene is {m}x{l}",
            a.m(),
            ctx.gains.m,
            ctx.gains.l
        )));
    }
    let mut per_uav_sinr = Vec::with_capacity(m);
    let mut per_uav_rate_bps = Vec::with_capacity(m);
    for mi in 0..m {
        let sinrs: Vec<f64> = (0..ctx.cfg.num_rrbs)
            .filter_map(|r| sinr(mi, r, a, ctx))
            .collect();
        let mean = if sinrs.is_empty() {
            0.0
        } else {
            sinrs.iter().sum::<f64>() / sinrs.len() as f64
        };
        per_uav_sinr.push(mean);
        per_uav_rate_bps.push(
            sinrs
                .iter()
                .map(|s| ctx.rf.bandwidth_hz * (1.0 + s).log2())
                .sum(),
        );
    }
    let total_rate_bps: f64 = per_uav_rate_bps.iter().sum();
    Ok(ThroughputReport {
        serving: (0..m)
            .map(|mi| {
                a.serving(mi).map(|(bs, beam)| ServingLink {
                    bs,
                    beam,
                    phi_scan: a.phi_scan_chosen[mi],
                })
            })
            .collect(),
        mean_rate_bps: if m > 0 { total_rate_bps / m as f64 } else { 0.0 },
        total_rate_bps,
        per_uav_sinr,
        per_uav_rate_bps,
        seed: 0,
        config_digest: String::new(),
        timings: StageTimings::default(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// Matrix dimensions disagree with (M, L, N).
    Shape(String),
    /// UAV not associated with exactly one BS.
    C1 { uav: usize, associations: usize },
    /// BS serving more than N UAVs.
    C2 { bs: usize, load: usize },
    /// UAV not on exactly one associated beam.
    C3 { uav: usize, beams: usize },
    /// Beam shared by several UAVs.
    C4 { bs: usize, beam: usize, uavs: usize },
    /// Beam set on a BS the UAV is not associated with.
    Consistency { uav: usize, bs: usize, beam: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::C1 { uav, associations } => {
                write!(f, "C1: UAV {uav} associated with {associations} BSs")
            }
            Violation::C2 { bs, load } => write!(f, "C2: BS {bs} serves {load} UAVs"),
            Violation::C3 { uav, beams } => write!(f, "C3: UAV {uav} holds {beams} beams"),
            Violation::C4 { bs, beam, uavs } => {
                write!(f, "C4: beam {beam} of BS {bs} shared by {uavs} UAVs")
            }
            Violation::Consistency { uav, bs, beam } => write!(
                f,
                "beta/x: UAV {uav} on beam {beam} of BS {bs} without association"
            ),
        }
    }
}

/// Lists every broken constraint; empty iff the assignment is feasible.
pub fn validate(a: &Assignment, m: usize, l: usize, n: usize) -> Vec<Violation> {
    let shape_ok = a.beta.len() == m
        && a.x.len() == m
        && a.phi_scan_chosen.len() == m
        && a.beta.iter().all(|row| row.len() == l)
        && a.x.iter().all(|row| row.len() == l && row.iter().all(|b| b.len() == n));
    if !shape_ok {
        return vec![Violation::Shape(format!("expected {m} x {l} x {n}"))];
    }

    let mut out = Vec::new();
    for mi in 0..m {
        let associations = a.beta[mi].iter().filter(|&&b| b).count();
        if associations != 1 {
            out.push(Violation::C1 { uav: mi, associations });
        }
    }
    for li in 0..l {
        let load = (0..m).filter(|&mi| a.beta[mi][li]).count();
        if load > n {
            out.push(Violation::C2 { bs: li, load });
        }
    }
    for mi in 0..m {
        let beams = (0..l)
            .filter(|&li| a.beta[mi][li])
            .map(|li| a.x[mi][li].iter().filter(|&&x| x).count())
            .sum();
        if beams != 1 {
            out.push(Violation::C3 { uav: mi, beams });
        }
    }
    for li in 0..l {
        for ni in 0..n {
            let uavs = (0..m).filter(|&mi| a.x[mi][li][ni]).count();
            if uavs > 1 {
                out.push(Violation::C4 { bs: li, beam: ni, uavs });
            }
        }
    }
    for mi in 0..m {
        for li in 0..l {
            for ni in 0..n {
                if a.x[mi][li][ni] && !a.beta[mi][li] {
                    out.push(Violation::Consistency { uav: mi, bs: li, beam: ni });
                }
            }
        }
    }
    out
}
