//! Scene geometry: base-station sites, circular corridor waypoints and the
//! BS-local spherical angles that drive the antenna and channel models.
//!
//! Frame conventions: `x` east, `y` north, `z` altitude, all in meters.
//! Zenith angle `theta` is measured from the BS vertical (0 = straight up,
//! pi/2 = horizon). Azimuth `phi` is the horizontal bearing relative to the
//! site boresight, wrapped to (-pi, pi].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Position3D) -> f64 {
        let (dx, dy, dz) = (other.x - self.x, other.y - self.y, other.z - self.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseStationSite {
    /// 1-based, contiguous.
    pub id: usize,
    pub position: Position3D,
    /// Array normal in the horizontal plane, radians from east.
    pub boresight_azimuth: f64,
}

impl BaseStationSite {
    /// Site whose boresight points at `target` in the horizontal plane.
    pub fn facing(id: usize, position: Position3D, target: &Position3D) -> Self {
        let boresight_azimuth = (target.y - position.y).atan2(target.x - position.x);
        Self {
            id,
            position,
            boresight_azimuth,
        }
    }
}

/// Checks that site ids run 1..=L without gaps or duplicates.
pub fn validate_sites(sites: &[BaseStationSite]) -> Vec<String> {
    let mut problems = Vec::new();
    for (i, s) in sites.iter().enumerate() {
        if s.id != i + 1 {
            problems.push(format!("bss[{i}].id = {} (expected {})", s.id, i + 1));
        }
        if !(s.position.z >= 0.0) {
            problems.push(format!("bss[{i}].position.z must be >= 0"));
        }
    }
    problems
}

/// Four sites on the corners of a square of side `side` centered on
/// `center`, each facing the center.
pub fn square_layout(center: &Position3D, side: f64, height: f64) -> Vec<BaseStationSite> {
    let h = side / 2.0;
    [(h, h), (-h, h), (-h, -h), (h, -h)]
        .iter()
        .enumerate()
        .map(|(i, &(dx, dy))| {
            let pos = Position3D::new(center.x + dx, center.y + dy, height);
            BaseStationSite::facing(i + 1, pos, center)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorridorSpec {
    /// Only `x` and `y` are used.
    pub center: Position3D,
    pub radius: f64,
    pub altitude: f64,
}

impl CorridorSpec {
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            problems.push(format!("corridor.radius must be > 0 (got {})", self.radius));
        }
        if !(self.altitude > 0.0 && self.altitude.is_finite()) {
            problems.push(format!(
                "corridor.altitude must be > 0 (got {})",
                self.altitude
            ));
        }
        problems
    }
}

/// `m` waypoints evenly spaced on the corridor circle; waypoint `k` sits at
/// angle `2*pi*k/m` counter-clockwise from east.
pub fn generate_corridor(spec: &CorridorSpec, m: usize) -> Result<Vec<Position3D>> {
    let mut problems = spec.validate();
    if m == 0 {
        problems.push("waypoint count must be >= 1".into());
    }
    if !problems.is_empty() {
        return Err(Error::Config(problems));
    }
    Ok((0..m)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / m as f64;
            Position3D::new(
                spec.center.x + spec.radius * a.cos(),
                spec.center.y + spec.radius * a.sin(),
                spec.altitude,
            )
        })
        .collect())
}

/// Wraps an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    pub distance_3d: f64,
    pub theta: f64,
    pub phi: f64,
}

pub fn link_geometry(bs: &BaseStationSite, uav: &Position3D) -> Result<LinkGeometry> {
    let (dx, dy, dz) = (
        uav.x - bs.position.x,
        uav.y - bs.position.y,
        uav.z - bs.position.z,
    );
    let distance_3d = (dx * dx + dy * dy + dz * dz).sqrt();
    if !(distance_3d > 0.0) {
        return Err(Error::DegenerateGeometry(format!(
            "UAV at ({}, {}, {}) coincides with BS {}",
            uav.x, uav.y, uav.z, bs.id
        )));
    }
    let theta = (dz / distance_3d).clamp(-1.0, 1.0).acos();
    let phi = wrap_angle(dy.atan2(dx) - bs.boresight_azimuth);
    Ok(LinkGeometry {
        distance_3d,
        theta,
        phi,
    })
}

/// Inverse of [`link_geometry`]: the point at `(distance, theta, phi)` in the
/// site's local frame.
pub fn position_from_link(bs: &BaseStationSite, link: &LinkGeometry) -> Position3D {
    let bearing = link.phi + bs.boresight_azimuth;
    let horiz = link.distance_3d * link.theta.sin();
    Position3D::new(
        bs.position.x + horiz * bearing.cos(),
        bs.position.y + horiz * bearing.sin(),
        bs.position.z + link.distance_3d * link.theta.cos(),
    )
}

/// Row-major (uav, bs) table of link geometries.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkTable {
    pub m: usize,
    pub l: usize,
    links: Vec<LinkGeometry>,
}

impl LinkTable {
    pub fn build(uavs: &[Position3D], bss: &[BaseStationSite]) -> Result<Self> {
        let mut links = Vec::with_capacity(uavs.len() * bss.len());
        for uav in uavs {
            for bs in bss {
                links.push(link_geometry(bs, uav)?);
            }
        }
        Ok(Self {
            m: uavs.len(),
            l: bss.len(),
            links,
        })
    }

    pub fn get(&self, m: usize, l: usize) -> &LinkGeometry {
        &self.links[m * self.l + l]
    }

    pub fn iter(&self) -> impl Iterator<Item = &LinkGeometry> {
        self.links.iter()
    }
}
