//! Few-ray channel twin: one deterministic LOS ray plus seeded scatterers.
//!
//! The LOS ray carries the free-space amplitude and carrier phase. The
//! remaining `ray_count - 1` rays carry Rayleigh-drawn amplitudes,
//! renormalized so their powers sum to `P_los / K`, with uniform phases.
//! Beyond [`EXPLICIT_RAY_CAP`] scatterers the tail is summed in closed form
//! as a circular Gaussian of the matching power.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;

use super::{
    free_space_path_gain, los_phase, ChannelProviderSpec, LinkGainTensor, RfConstants,
    ScatterModel,
};
use crate::error::Result;
use crate::geometry::LinkTable;
use crate::seed::{self, tag};

pub const EXPLICIT_RAY_CAP: u64 = 4096;

/// Sum of `n` random-phase scatterers with total expected power `power`.
pub(crate) fn scattered_sum<R: Rng>(n: u64, power: f64, rng: &mut R) -> Complex64 {
    if n == 0 || power == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let explicit = n.min(EXPLICIT_RAY_CAP);
    let explicit_power = power * explicit as f64 / n as f64;

    let draws: Vec<(f64, f64)> = (0..explicit)
        .map(|_| {
            let p: f64 = Exp1.sample(rng);
            let phase = rng.random_range(0.0..2.0 * PI);
            (p, phase)
        })
        .collect();
    let total: f64 = draws.iter().map(|d| d.0).sum();
    let scale = if total > 0.0 { explicit_power / total } else { 0.0 };
    let mut acc: Complex64 = draws
        .iter()
        .map(|&(p, phase)| Complex64::from_polar((p * scale).sqrt(), phase))
        .sum();

    if n > explicit {
        let sigma = ((power - explicit_power) / 2.0).sqrt();
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        acc += Complex64::new(re * sigma, im * sigma);
    }
    acc
}

/// Generates the few-ray tensor. Link `(m, l)` draws from its own substream
/// keyed on `(spec.seed, m, l)`.
pub fn generate_few_ray(
    links: &LinkTable,
    spec: &ChannelProviderSpec,
    rf: &RfConstants,
) -> Result<LinkGainTensor> {
    let k = spec.k_linear();
    let ray_count = spec.ray_count.max(1);
    let per_link: Vec<(Complex64, Complex64, f64)> = (0..links.m * links.l)
        .into_par_iter()
        .map(|idx| {
            let (m, l) = (idx / links.l, idx % links.l);
            let d = links.get(m, l).distance_3d;
            let los_power = free_space_path_gain(d, rf.carrier_hz)?;
            let los = Complex64::from_polar(los_power.sqrt(), los_phase(d, rf.carrier_hz));
            let scattered_power = los_power / k;
            let mut rng = seed::rng(spec.seed, &[tag::LINK, m as u64, l as u64]);
            let h = los + scattered_sum(ray_count - 1, scattered_power, &mut rng);
            Ok((h, los, scattered_power))
        })
        .collect::<Result<_>>()?;

    let coefficients: Vec<Complex64> = per_link.iter().map(|p| p.0).collect();
    let mut t = LinkGainTensor::from_coefficients(links.m, links.l, 1, coefficients)?;
    t.scatter = Some(ScatterModel {
        los: per_link.iter().map(|p| p.1).collect(),
        scattered_power: per_link.iter().map(|p| p.2).collect(),
        ray_count: Some(ray_count),
    });
    Ok(t)
}
