//! Model-based channel: 3GPP UMi street-canyon LOS path loss with Rician
//! small-scale fading.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{los_phase, ChannelProviderSpec, LinkGainTensor, RfConstants, ScatterModel};
use crate::error::{Error, Result};
use crate::geometry::LinkTable;
use crate::seed::{self, tag};

/// `PL = 32.4 + 21 log10(d_3D) + 20 log10(f_c / 1 GHz)`, dB.
pub fn umi_path_loss_db(distance: f64, carrier_hz: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::DegenerateGeometry(format!(
            "path loss requires distance > 0 (got {distance})"
        )));
    }
    Ok(32.4 + 21.0 * distance.log10() + 20.0 * (carrier_hz / 1e9).log10())
}

/// Unit-mean Rician sample: specular part of power `K/(K+1)` at
/// `los_phase`, diffuse part `CN(0, 1/(K+1))`.
pub fn rician_fading<R: Rng>(k_linear: f64, los_phase: f64, rng: &mut R) -> Complex64 {
    let specular = (k_linear / (k_linear + 1.0)).sqrt();
    let diffuse = (1.0 / (k_linear + 1.0)).sqrt() * FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::from_polar(specular, los_phase) + Complex64::new(re, im) * diffuse
}

pub fn generate_statistical(
    links: &LinkTable,
    spec: &ChannelProviderSpec,
    rf: &RfConstants,
) -> Result<LinkGainTensor> {
    let k = spec.k_linear();
    let per_link: Vec<(Complex64, Complex64, f64)> = (0..links.m * links.l)
        .into_par_iter()
        .map(|idx| {
            let (m, l) = (idx / links.l, idx % links.l);
            let d = links.get(m, l).distance_3d;
            let pl = 10f64.powf(-umi_path_loss_db(d, rf.carrier_hz)? / 10.0);
            let phase = los_phase(d, rf.carrier_hz);
            let mut rng = seed::rng(spec.seed, &[tag::LINK, m as u64, l as u64]);
            let amp = pl.sqrt();
            let h = rician_fading(k, phase, &mut rng) * amp;
            let los = Complex64::from_polar(amp * (k / (k + 1.0)).sqrt(), phase);
            Ok((h, los, pl / (k + 1.0)))
        })
        .collect::<Result<_>>()?;

    let mut t = LinkGainTensor::from_coefficients(
        links.m,
        links.l,
        1,
        per_link.iter().map(|p| p.0).collect(),
    )?;
    t.scatter = Some(ScatterModel {
        los: per_link.iter().map(|p| p.1).collect(),
        scattered_power: per_link.iter().map(|p| p.2).collect(),
        ray_count: None,
    });
    Ok(t)
}
