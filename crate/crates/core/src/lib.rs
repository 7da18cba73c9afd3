//! Beam-aware radio resource management for UAVs flying a corridor
//! served by sectorized base stations with planar antenna arrays.
//!
//! The pipeline is: [`geometry`] places base stations and UAV waypoints,
//! [`antenna`] gives directional gain, [`channel`] produces link gains,
//! [`allocator`] picks UAV-to-BS-and-beam associations with scan angles,
//! [`evaluator`] scores them, and [`harness`] runs experiments.
//!
//! ```
//! use corridor_rrm::harness::{run_scenario, ScenarioConfig};
//!
//! let mut config = ScenarioConfig::default();
//! config.uav_count = 4;
//! let result = run_scenario(&config)?;
//! assert_eq!(result.replications[0].per_uav_rate_bps.len(), 4);
//! # Ok::<(), corridor_rrm::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod allocator;
pub mod antenna;
pub mod channel;
pub mod error;
pub mod evaluator;
pub mod geometry;
pub mod harness;
pub mod scene;
pub mod seed;
pub mod units;

pub use error::{Error, Result, TensorLoadError};
pub use scene::Scene;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/antenna.md")]
    mod antenna {}
    #[doc = include_str!("../../../book/src/channel.md")]
    mod channel {}
    #[doc = include_str!("../../../book/src/allocation.md")]
    mod allocation {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
}
