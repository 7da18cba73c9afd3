use num_complex::Complex64;
use rayon::prelude::*;

use super::few_ray::scattered_sum;
use super::{LinkGainTensor, ScatterModel};
use crate::seed::{self, tag};

/// Lower-fidelity view of `tensor` at `target_ray_count` rays.
///
/// The deterministic (LOS) part of each link is kept. The diffuse part is
/// modeled as a subsample estimate of the source trace: with `S` source
/// rays and `R` target rays it keeps correlation `sqrt((R-1)/(S-1))` with
/// the source diffuse field and redraws the rest from an `R`-ray scatterer
/// sum, so the expected power is unchanged.
///
/// Tensors without a [`ScatterModel`] (imports, hand-built tensors) carry no
/// separable diffuse part and are returned unchanged, as are requests for
/// at least the source ray count.
pub fn degrade(tensor: &LinkGainTensor, target_ray_count: u64, seed: u64) -> LinkGainTensor {
    let (Some(scatter), Some(coefs)) = (&tensor.scatter, &tensor.coefficients) else {
        return tensor.clone();
    };
    if tensor.n_elems != 1 {
        return tensor.clone();
    }
    let target = target_ray_count.max(1);
    let rho = match scatter.ray_count {
        Some(source) if target >= source => return tensor.clone(),
        Some(source) => ((target - 1) as f64 / (source - 1) as f64).sqrt(),
        None => 0.0,
    };
    let fresh_weight = (1.0 - rho * rho).sqrt();

    let coefficients: Vec<Complex64> = (0..tensor.m * tensor.l)
        .into_par_iter()
        .map(|idx| {
            let (m, l) = (idx / tensor.l, idx % tensor.l);
            let los = scatter.los[idx];
            let source_diffuse = coefs[idx] - los;
            let mut rng = seed::rng(seed, &[tag::LINK, m as u64, l as u64]);
            let fresh = scattered_sum(target - 1, scatter.scattered_power[idx], &mut rng);
            los + source_diffuse * rho + fresh * fresh_weight
        })
        .collect();

    let mut out = LinkGainTensor::from_coefficients(tensor.m, tensor.l, 1, coefficients)
        .expect("dimensions carried over from a valid tensor");
    out.scatter = Some(ScatterModel {
        ray_count: Some(target),
        ..scatter.clone()
    });
    out
}
