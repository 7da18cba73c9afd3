//! Channel-twin link gains.
//!
//! Three interchangeable providers fill a [`LinkGainTensor`]:
//! a deterministic few-ray model ([`few_ray`]), a Rician/UMi statistical
//! model ([`statistical`]) and a file importer ([`file`]). [`degrade`]
//! derives a lower-fidelity view of an existing tensor.
//!
//! The scalar link gain `|h_{m,l}|^2` is the mean element power over the
//! `n_elems` coefficients of the link. Synthetic providers emit one
//! coefficient per link.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LinkTable;

mod degrade;
pub mod few_ray;
pub mod file;
pub mod statistical;

pub use degrade::degrade;
pub use few_ray::generate_few_ray;
pub use statistical::generate_statistical;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RfConstants {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub noise_power_w: f64,
}

impl Default for RfConstants {
    fn default() -> Self {
        Self {
            carrier_hz: 3.5e9,
            bandwidth_hz: 30e6,
            tx_power_w: 10.0,
            noise_power_w: 0.3,
        }
    }
}

impl RfConstants {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    pub fn validate(&self) -> Vec<String> {
        [
            ("carrier_hz", self.carrier_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("tx_power_w", self.tx_power_w),
            ("noise_power_w", self.noise_power_w),
        ]
        .iter()
        .filter(|(_, v)| !(*v > 0.0 && v.is_finite()))
        .map(|(n, v)| format!("rf.{n} must be > 0 (got {v})"))
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderKind {
    FewRay,
    Statistical,
    Import,
}

impl std::str::FromStr for ProviderKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.replace('-', "_").as_str() {
            "few_ray" => Ok(Self::FewRay),
            "statistical" => Ok(Self::Statistical),
            "import" => Ok(Self::Import),
            other => Err(format!(
                "unknown channel provider {other:?} (expected few_ray, statistical or import)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelProviderSpec {
    pub kind: ProviderKind,
    /// Fidelity knob of the few-ray provider: one LOS ray plus
    /// `ray_count - 1` scatterers.
    pub ray_count: u64,
    pub rician_k_db: f64,
    pub seed: u64,
    pub import_path: Option<PathBuf>,
}

impl Default for ChannelProviderSpec {
    fn default() -> Self {
        Self {
            kind: ProviderKind::FewRay,
            ray_count: 1_000_000,
            rician_k_db: 3.0,
            seed: 0,
            import_path: None,
        }
    }
}

impl ChannelProviderSpec {
    pub fn k_linear(&self) -> f64 {
        10f64.powf(self.rician_k_db / 10.0)
    }

    pub fn validate(&self, field: &str) -> Vec<String> {
        let mut p = Vec::new();
        if self.ray_count == 0 {
            p.push(format!("{field}.ray_count must be >= 1"));
        }
        if !self.rician_k_db.is_finite() {
            p.push(format!("{field}.rician_k_db must be finite"));
        }
        if self.kind == ProviderKind::Import && self.import_path.is_none() {
            p.push(format!("{field}.import_path is required for kind = import"));
        }
        p
    }
}

/// Deterministic plus diffuse decomposition kept by the synthetic providers
/// so that [`degrade`] can redraw the diffuse part.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterModel {
    /// Per-link deterministic (LOS) coefficient, row-major (m, l).
    pub los: Vec<Complex64>,
    /// Expected diffuse power per link.
    pub scattered_power: Vec<f64>,
    /// Number of rays behind the tensor; `None` for the continuous
    /// statistical model.
    pub ray_count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkGainTensor {
    pub m: usize,
    pub l: usize,
    pub n_elems: usize,
    /// Row-major (m, l, k).
    pub coefficients: Option<Vec<Complex64>>,
    /// Row-major (m, l), linear.
    pub power_gains: Vec<f64>,
    pub scatter: Option<ScatterModel>,
}

impl LinkGainTensor {
    /// Tensor holding complex coefficients; power gains follow the
    /// aggregation rule.
    pub fn from_coefficients(
        m: usize,
        l: usize,
        n_elems: usize,
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        if coefficients.len() != m * l * n_elems {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for m={m}, l={l}, n_elems={n_elems}",
                coefficients.len()
            )));
        }
        let power_gains = aggregate_power(&coefficients, n_elems);
        Ok(Self {
            m,
            l,
            n_elems,
            coefficients: Some(coefficients),
            power_gains,
            scatter: None,
        })
    }

    pub fn from_power_gains(m: usize, l: usize, power_gains: Vec<f64>) -> Result<Self> {
        if power_gains.len() != m * l {
            return Err(Error::DimensionMismatch(format!(
                "{} power gains for m={m}, l={l}",
                power_gains.len()
            )));
        }
        if let Some(bad) = power_gains.iter().find(|g| !(**g >= 0.0 && g.is_finite())) {
            return Err(Error::DimensionMismatch(format!(
                "power gain {bad} is not a finite non-negative value"
            )));
        }
        Ok(Self {
            m,
            l,
            n_elems: 1,
            coefficients: None,
            power_gains,
            scatter: None,
        })
    }

    pub fn power_gain(&self, m: usize, l: usize) -> f64 {
        self.power_gains[m * self.l + l]
    }

    pub fn coefficient(&self, m: usize, l: usize, k: usize) -> Option<Complex64> {
        self.coefficients
            .as_ref()
            .map(|c| c[(m * self.l + l) * self.n_elems + k])
    }

    /// Scales every power gain by `factor`; coefficients by its square root.
    pub fn scaled(&self, factor: f64) -> Self {
        let amp = factor.sqrt();
        let coefficients = self
            .coefficients
            .as_ref()
            .map(|c| c.iter().map(|h| h * amp).collect::<Vec<_>>());
        let power_gains = match &coefficients {
            Some(c) => aggregate_power(c, self.n_elems),
            None => self.power_gains.iter().map(|g| g * factor).collect(),
        };
        Self {
            coefficients,
            power_gains,
            scatter: None,
            ..self.clone()
        }
    }
}

/// Mean element power `|h_{m,l}|^2 = (1/K) sum_k |h_{m,l,k}|^2`.
pub fn aggregate_power(coefficients: &[Complex64], n_elems: usize) -> Vec<f64> {
    coefficients
        .chunks(n_elems)
        .map(|link| link.iter().map(|h| h.norm_sqr()).sum::<f64>() / n_elems as f64)
        .collect()
}

/// Free-space path gain `(lambda / (4 pi d))^2`.
pub fn free_space_path_gain(distance: f64, carrier_hz: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::DegenerateGeometry(format!(
            "path gain requires distance > 0 (got {distance})"
        )));
    }
    let lambda = SPEED_OF_LIGHT / carrier_hz;
    Ok((lambda / (4.0 * std::f64::consts::PI * distance)).powi(2))
}

/// Carrier phase of the direct path, `2 pi d / lambda` reduced mod `2 pi`.
pub(crate) fn los_phase(distance: f64, carrier_hz: f64) -> f64 {
    let cycles = distance * carrier_hz / SPEED_OF_LIGHT;
    2.0 * std::f64::consts::PI * cycles.fract()
}

/// Dispatches on `spec.kind`. Import ignores the geometry except for a
/// dimension check.
pub fn generate(
    links: &LinkTable,
    spec: &ChannelProviderSpec,
    rf: &RfConstants,
) -> Result<LinkGainTensor> {
    match spec.kind {
        ProviderKind::FewRay => generate_few_ray(links, spec, rf),
        ProviderKind::Statistical => generate_statistical(links, spec, rf),
        ProviderKind::Import => {
            let path = spec
                .import_path
                .as_ref()
                .ok_or_else(|| Error::config("import provider needs import_path"))?;
            let t = file::import_tensor(path)?;
            if t.m != links.m || t.l != links.l {
                return Err(Error::DimensionMismatch(format!(
                    "imported tensor is {}x{} but the scenario has {} UAVs and {} BSs",
                    t.m, t.l, links.m, links.l
                )));
            }
            Ok(t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fspl_fixed_point() {
        let f = 3.5e9;
        let lambda = SPEED_OF_LIGHT / f;
        let g = free_space_path_gain(lambda / (4.0 * std::f64::consts::PI), f).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fspl_100m() {
        let g = free_space_path_gain(100.0, 3.5e9).unwrap();
        assert!((g - 4.645e-9).abs() / 4.645e-9 < 1e-3, "{g}");
    }

    #[test]
    fn fspl_inverse_square() {
        let a = free_space_path_gain(37.0, 2e9).unwrap();
        let b = free_space_path_gain(74.0, 2e9).unwrap();
        assert!((a / b - 4.0).abs() < 1e-12);
    }

    #[test]
    fn fspl_rejects_zero() {
        assert!(matches!(
            free_space_path_gain(0.0, 1e9),
            Err(Error::DegenerateGeometry(_))
        ));
    }

    #[test]
    fn aggregation_is_mean_power() {
        let c = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let t = LinkGainTensor::from_coefficients(1, 1, 2, c).unwrap();
        assert_eq!(t.power_gains, vec![1.0]);
    }

    #[test]
    fn provider_kind_parses() {
        assert_eq!("few-ray".parse::<ProviderKind>().unwrap(), ProviderKind::FewRay);
        assert!("raytrace".parse::<ProviderKind>().is_err());
    }
}
