//! 3GPP TR 37.840 sectorized element pattern and uniform-planar-array
//! beamforming gain.
//!
//! All angles enter in radians in the BS-local frame of
//! [`LinkGeometry`](crate::geometry::LinkGeometry). The element-pattern
//! beamwidths are compared in degrees internally, so the tabulated 65/90
//! degree constants stay exact.
//!
//! Array elements are flattened row-major over (horizontal index,
//! vertical index): element `k = h * n_v + v`. The steering vector holds
//! the conjugate-transposed entries `V^H`, so the array factor is the plain
//! bilinear sum `sum_k v_k * w_k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::units::degrees;

pub const DEFAULT_GAIN_FLOOR_DB: f64 = -400.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntennaConfig {
    pub n_h: usize,
    pub n_v: usize,
    /// Horizontal element spacing in wavelengths.
    pub d_h: f64,
    /// Vertical element spacing in wavelengths.
    pub d_v: f64,
    /// Maximum element gain, dBi.
    pub g_e_max: f64,
    #[serde(with = "degrees", rename = "theta_3db_deg")]
    pub theta_3db: f64,
    #[serde(with = "degrees", rename = "phi_3db_deg")]
    pub phi_3db: f64,
    /// Front-to-back ratio, dB.
    pub a_m: f64,
    /// Vertical side-lobe limit, dB.
    pub sl_av: f64,
    #[serde(with = "degrees", rename = "theta_tilt_deg")]
    pub theta_tilt: f64,
    /// Value returned by [`array_gain`] when the array factor vanishes.
    pub gain_floor_db: f64,
}

impl Default for AntennaConfig {
    fn default() -> Self {
        Self {
            n_h: 4,
            n_v: 4,
            d_h: 0.5,
            d_v: 0.5,
            g_e_max: -8.0,
            theta_3db: 65f64.to_radians(),
            phi_3db: 90f64.to_radians(),
            a_m: 30.0,
            sl_av: 30.0,
            theta_tilt: 15f64.to_radians(),
            gain_floor_db: DEFAULT_GAIN_FLOOR_DB,
        }
    }
}

impl AntennaConfig {
    pub fn n_elements(&self) -> usize {
        self.n_h * self.n_v
    }

    /// Upper bound on [`total_gain`]: element peak plus full coherent gain.
    pub fn max_gain_db(&self) -> f64 {
        self.g_e_max + 10.0 * (self.n_elements() as f64).log10()
    }

    pub fn validate(&self) -> Vec<String> {
        let mut p = Vec::new();
        if self.n_h == 0 || self.n_v == 0 {
            p.push(format!(
                "antenna: n_h and n_v must be >= 1 (got {}x{})",
                self.n_h, self.n_v
            ));
        }
        let positive = [
            ("d_h", self.d_h),
            ("d_v", self.d_v),
            ("theta_3db_deg", self.theta_3db),
            ("phi_3db_deg", self.phi_3db),
            ("a_m", self.a_m),
            ("sl_av", self.sl_av),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                p.push(format!("antenna.{name} must be > 0"));
            }
        }
        if !self.g_e_max.is_finite() || !self.theta_tilt.is_finite() {
            p.push("antenna.g_e_max and theta_tilt_deg must be finite".into());
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringDirection {
    pub theta: f64,
    pub phi: f64,
}

impl SteeringDirection {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Self {
        Self::new(theta_deg.to_radians(), phi_deg.to_radians())
    }
}

impl From<&crate::geometry::LinkGeometry> for SteeringDirection {
    fn from(g: &crate::geometry::LinkGeometry) -> Self {
        Self::new(g.theta, g.phi)
    }
}

/// Vertical element cut `A_{E,V}(theta)`, dB, in `[-sl_av, 0]`.
pub fn element_gain_vertical(theta: f64, cfg: &AntennaConfig) -> f64 {
    let x = (theta.to_degrees() - 90.0) / cfg.theta_3db.to_degrees();
    -(12.0 * x * x).min(cfg.sl_av)
}

/// Horizontal element cut `A_{E,H}(phi)`, dB, in `[-a_m, 0]`.
pub fn element_gain_horizontal(phi: f64, cfg: &AntennaConfig) -> f64 {
    let x = phi.to_degrees() / cfg.phi_3db.to_degrees();
    -(12.0 * x * x).min(cfg.a_m)
}

/// Combined element pattern `A_E(theta, phi)`, dBi.
pub fn element_gain(theta: f64, phi: f64, cfg: &AntennaConfig) -> f64 {
    let attenuation = -(element_gain_vertical(theta, cfg) + element_gain_horizontal(phi, cfg));
    cfg.g_e_max - attenuation.min(cfg.a_m)
}

fn unit_phasor(phase: f64) -> Complex64 {
    let (s, c) = phase.sin_cos();
    Complex64::new(c, s)
}

/// Steering row `V^H(theta, phi)`; unit-modulus entries.
pub fn steering_vector(dir: SteeringDirection, cfg: &AntennaConfig) -> Vec<Complex64> {
    let tau = 2.0 * std::f64::consts::PI;
    let kh = tau * cfg.d_h * dir.theta.sin() * dir.phi.sin();
    let kv = tau * cfg.d_v * dir.theta.cos();
    let mut out = Vec::with_capacity(cfg.n_elements());
    for h in 0..cfg.n_h {
        for v in 0..cfg.n_v {
            out.push(unit_phasor(h as f64 * kh + v as f64 * kv));
        }
    }
    out
}

/// Beamforming weights for horizontal scan `phi_scan` at the configured
/// downtilt; unit Euclidean norm.
pub fn beamforming_vector(phi_scan: f64, cfg: &AntennaConfig) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cfg.n_elements());
    fill_beamforming(phi_scan, cfg, &mut out);
    out
}

fn fill_beamforming(phi_scan: f64, cfg: &AntennaConfig, out: &mut Vec<Complex64>) {
    let tau = 2.0 * std::f64::consts::PI;
    let kh = tau * cfg.d_h * phi_scan.sin() * cfg.theta_tilt.cos();
    let kv = tau * cfg.d_v * cfg.theta_tilt.sin();
    let amp = 1.0 / (cfg.n_elements() as f64).sqrt();
    out.clear();
    for h in 0..cfg.n_h {
        for v in 0..cfg.n_v {
            out.push(unit_phasor(-(h as f64 * kh - v as f64 * kv)) * amp);
        }
    }
}

pub fn array_factor(steering: &[Complex64], weights: &[Complex64]) -> Complex64 {
    steering.iter().zip(weights).map(|(v, w)| v * w).sum()
}

fn power_to_db(p: f64, floor_db: f64) -> f64 {
    if p > 0.0 {
        (10.0 * p.log10()).max(floor_db)
    } else {
        floor_db
    }
}

/// Array gain `A_V = 10 log10 |V^H W|^2`, dB, floored at
/// `cfg.gain_floor_db`.
pub fn array_gain(dir: SteeringDirection, phi_scan: f64, cfg: &AntennaConfig) -> f64 {
    let af = array_factor(&steering_vector(dir, cfg), &beamforming_vector(phi_scan, cfg));
    power_to_db(af.norm_sqr(), cfg.gain_floor_db)
}

/// Directional gain `G_5G = A_E + A_V`, dBi.
pub fn total_gain(dir: SteeringDirection, phi_scan: f64, cfg: &AntennaConfig) -> f64 {
    element_gain(dir.theta, dir.phi, cfg) + array_gain(dir, phi_scan, cfg)
}

/// `G_5G` as a function of scan angle for one fixed direction. Caches the
/// element gain and steering row so repeated evaluations only rebuild the
/// weights; results are bit-identical to [`total_gain`].
#[derive(Debug, Clone)]
pub struct ScanObjective<'a> {
    cfg: &'a AntennaConfig,
    element_db: f64,
    steering: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl<'a> ScanObjective<'a> {
    pub fn new(dir: SteeringDirection, cfg: &'a AntennaConfig) -> Self {
        Self {
            cfg,
            element_db: element_gain(dir.theta, dir.phi, cfg),
            steering: steering_vector(dir, cfg),
            scratch: Vec::with_capacity(cfg.n_elements()),
        }
    }

    pub fn gain_db(&mut self, phi_scan: f64) -> f64 {
        fill_beamforming(phi_scan, self.cfg, &mut self.scratch);
        let af = array_factor(&self.steering, &self.scratch);
        self.element_db + power_to_db(af.norm_sqr(), self.cfg.gain_floor_db)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn vertical_cut() {
        let cfg = AntennaConfig::default();
        close(element_gain_vertical(PI / 2.0, &cfg), 0.0, 1e-12);
        close(element_gain_vertical(155f64.to_radians(), &cfg), -12.0, 1e-9);
        close(element_gain_vertical(0.0, &cfg), -12.0 * (90.0f64 / 65.0).powi(2), 1e-9);
        close(element_gain_vertical(0.0, &cfg), -23.006, 1e-3);
    }

    #[test]
    fn horizontal_cut() {
        let cfg = AntennaConfig::default();
        assert_eq!(element_gain_horizontal(0.0, &cfg), 0.0);
        close(element_gain_horizontal(PI / 2.0, &cfg), -12.0, 1e-9);
        close(element_gain_horizontal(PI, &cfg), -30.0, 1e-12);
    }

    #[test]
    fn combined_element() {
        let cfg = AntennaConfig::default();
        close(element_gain(PI / 2.0, 0.0, &cfg), -8.0, 1e-12);
        close(element_gain(PI / 2.0, PI, &cfg), -38.0, 1e-9);
        close(
            element_gain(155f64.to_radians(), PI / 2.0, &cfg),
            -32.0,
            1e-9,
        );
    }

    #[test]
    fn steering_broadside_is_all_ones() {
        let cfg = AntennaConfig::default();
        for v in steering_vector(SteeringDirection::new(PI / 2.0, 0.0), &cfg) {
            close(v.re, 1.0, 1e-15);
            close(v.im, 0.0, 1e-15);
        }
    }

    #[test]
    fn steering_two_element_phase() {
        let cfg = AntennaConfig {
            n_h: 2,
            n_v: 1,
            ..Default::default()
        };
        let v = steering_vector(SteeringDirection::from_degrees(90.0, 30.0), &cfg);
        close(v[0].arg(), 0.0, 1e-15);
        close(v[1].arg(), PI / 2.0, 1e-12);
    }

    #[test]
    fn beamforming_uniform_without_scan_or_tilt() {
        let cfg = AntennaConfig {
            theta_tilt: 0.0,
            ..Default::default()
        };
        for w in beamforming_vector(0.0, &cfg) {
            close(w.re, 0.25, 1e-15);
            close(w.im, 0.0, 1e-15);
        }
    }

    #[test]
    fn beamforming_two_element_phase() {
        let cfg = AntennaConfig {
            n_h: 2,
            n_v: 1,
            ..Default::default()
        };
        let w = beamforming_vector(PI / 2.0, &cfg);
        let diff = (w[1] / w[0]).arg();
        close(diff, -PI * 15f64.to_radians().cos(), 1e-12);
        close(diff, -3.0345, 1e-4);
    }

    #[test]
    fn aligned_beam_reaches_full_array_gain() {
        // cos(theta) = -sin(tilt) and phi = phi_scan aligns every element.
        let cfg = AntennaConfig::default();
        let dir = SteeringDirection::from_degrees(105.0, 0.0);
        close(array_gain(dir, 0.0, &cfg), 10.0 * 16f64.log10(), 1e-9);
        let dir = SteeringDirection::from_degrees(105.0, 40.0);
        close(array_gain(dir, 40f64.to_radians(), &cfg), 12.041_199_826, 1e-8);
    }

    #[test]
    fn single_element_array_gain_is_zero() {
        let cfg = AntennaConfig {
            n_h: 1,
            n_v: 1,
            ..Default::default()
        };
        for (t, p, s) in [(0.3, 1.0, -2.0), (2.0, -0.5, 0.7), (PI / 2.0, 0.0, 0.0)] {
            close(array_gain(SteeringDirection::new(t, p), s, &cfg), 0.0, 1e-12);
            close(total_gain(SteeringDirection::new(PI / 2.0, 0.0), s, &cfg), -8.0, 1e-12);
        }
    }

    #[test]
    fn boresight_total_gain_untilted() {
        let cfg = AntennaConfig {
            theta_tilt: 0.0,
            ..Default::default()
        };
        let g = total_gain(SteeringDirection::new(PI / 2.0, 0.0), 0.0, &cfg);
        close(g, -8.0 + 10.0 * 16f64.log10(), 1e-9);
        close(g, 4.041, 1e-3);
    }

    #[test]
    fn back_lobe_bound() {
        let cfg = AntennaConfig::default();
        let dir = SteeringDirection::new(PI / 2.0, PI);
        for s in [-3.0, -1.0, 0.0, 0.5, 2.5] {
            assert!(total_gain(dir, s, &cfg) <= -38.0 + 10.0 * 16f64.log10() + 1e-9);
        }
    }

    #[test]
    fn null_is_floored() {
        // Two horizontal elements in antiphase cancel exactly.
        let cfg = AntennaConfig {
            n_h: 2,
            n_v: 1,
            theta_tilt: 0.0,
            ..Default::default()
        };
        // v = [1, e^{j pi sin(phi)}], w ~ [1, 1] at zero scan; sin(phi) = 1 -> v1 = -1.
        let g = array_gain(SteeringDirection::new(PI / 2.0, PI / 2.0), 0.0, &cfg);
        assert!(g >= cfg.gain_floor_db);
        assert!(g < -250.0);
    }

    #[test]
    fn scan_objective_matches_total_gain() {
        let cfg = AntennaConfig::default();
        let dir = SteeringDirection::new(1.1, -0.4);
        let mut obj = ScanObjective::new(dir, &cfg);
        for s in [-3.0, -0.3, 0.0, 1.7] {
            assert_eq!(obj.gain_db(s), total_gain(dir, s, &cfg));
        }
    }
}
