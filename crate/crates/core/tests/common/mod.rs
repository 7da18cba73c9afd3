#![allow(dead_code)]

use corridor_rrm::allocator::{BeamCodebook, UtilityTensor};
use corridor_rrm::antenna::AntennaConfig;
use corridor_rrm::geometry::{square_layout, CorridorSpec, generate_corridor, Position3D};
use corridor_rrm::harness::ScenarioConfig;
use corridor_rrm::Scene;

/// Best total utility by exhaustive enumeration of injective mappings.
pub fn brute_force_best(util: &UtilityTensor) -> f64 {
    fn go(m: usize, util: &UtilityTensor, used: &mut [bool], acc: f64, best: &mut f64) {
        if m == util.m {
            *best = best.max(acc);
            return;
        }
        let cols = util.columns();
        for j in 0..cols {
            if !used[j] {
                used[j] = true;
                go(m + 1, util, used, acc + util.values[m * cols + j], best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    go(0, util, &mut vec![false; util.columns()], 0.0, &mut best);
    best
}

/// Default four-site square with `m` UAVs on a corridor at `altitude`.
pub fn square_scene(m: usize, altitude: f64, n_beams: usize) -> Scene {
    let center = Position3D::new(0.0, 0.0, 0.0);
    let bss = square_layout(&center, 400.0, 25.0);
    let uavs = generate_corridor(
        &CorridorSpec {
            center,
            radius: 200.0,
            altitude,
        },
        m,
    )
    .unwrap();
    Scene::new(bss, uavs, AntennaConfig::default(), BeamCodebook::new(n_beams)).unwrap()
}

/// Default config shrunk for fast tests.
pub fn small_config(uavs: usize, replications: usize) -> ScenarioConfig {
    let mut c = ScenarioConfig::default();
    c.uav_count = uavs;
    c.replications = replications;
    c.annealer.t_global = 40;
    c.annealer.t_local = 20;
    c
}
