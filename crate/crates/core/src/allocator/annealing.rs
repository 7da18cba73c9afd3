//! One-dimensional dual annealing: generalized simulated annealing
//! (Tsallis visiting distribution, generalized Metropolis acceptance) with a
//! bounded Brent refinement whenever the chain improves on the best point.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnealerConfig {
    /// Global (annealing) iterations.
    pub t_global: usize,
    /// Objective evaluations allowed per local refinement.
    pub t_local: usize,
    pub initial_temperature: f64,
    /// Visiting distribution shape `q_v`, in (1, 3).
    pub visiting_param: f64,
    /// Acceptance shape `q_a`, < 1.
    pub acceptance_param: f64,
    /// Global iterations without improvement before a random restart.
    pub restart_stall: usize,
    pub seed: u64,
}

impl Default for AnnealerConfig {
    fn default() -> Self {
        Self {
            t_global: 200,
            t_local: 50,
            initial_temperature: 5230.0,
            visiting_param: 2.62,
            acceptance_param: -5.0,
            restart_stall: 20,
            seed: 0,
        }
    }
}

impl AnnealerConfig {
    pub fn validate(&self) -> Vec<String> {
        let mut p = Vec::new();
        if self.t_global == 0 {
            p.push("annealer.t_global must be >= 1".into());
        }
        if !(self.initial_temperature > 0.0) {
            p.push("annealer.initial_temperature must be > 0".into());
        }
        if !(self.visiting_param > 1.0 && self.visiting_param < 3.0) {
            p.push(format!(
                "annealer.visiting_param must lie in (1, 3) (got {})",
                self.visiting_param
            ));
        }
        if !(self.acceptance_param < 1.0) {
            p.push("annealer.acceptance_param must be < 1".into());
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evals: u64,
}

const TAIL_LIMIT: f64 = 1e8;

/// Sampler for the Tsallis-Stariolo visiting distribution.
struct Visiting {
    qv: f64,
    sigma_base: f64,
}

impl Visiting {
    fn new(qv: f64) -> Self {
        let factor2 = ((4.0 - qv) * (qv - 1.0).ln()).exp();
        let factor3 = ((2.0 - qv) * 2f64.ln() / (qv - 1.0)).exp();
        let factor5 = 1.0 / (qv - 1.0) - 0.5;
        let d1 = 2.0 - factor5;
        let factor6 = PI * (1.0 - factor5) / (PI * (1.0 - factor5)).sin() / ln_gamma(d1).exp();
        // factor4 = sqrt(pi) * factor1 * factor2 / (factor3 * (3 - qv)); factor1 depends on T.
        let factor4_base = PI.sqrt() * factor2 / (factor3 * (3.0 - qv));
        Self {
            qv,
            sigma_base: factor6 / factor4_base,
        }
    }

    fn step<R: Rng>(&self, temperature: f64, rng: &mut R) -> f64 {
        let qv = self.qv;
        let factor1 = (temperature.ln() / (qv - 1.0)).exp();
        let sigma = (-(qv - 1.0) * (self.sigma_base / factor1).ln() / (3.0 - qv)).exp();
        let x: f64 = StandardNormal.sample(rng);
        let y: f64 = StandardNormal.sample(rng);
        let den = ((qv - 1.0) * y.abs().ln() / (3.0 - qv)).exp();
        let v = x * sigma / den;
        if v > TAIL_LIMIT {
            TAIL_LIMIT * rng.random::<f64>()
        } else if v < -TAIL_LIMIT {
            -TAIL_LIMIT * rng.random::<f64>()
        } else if v.is_finite() {
            v
        } else {
            0.0
        }
    }
}

/// Folds `x` back into `[lo, hi]` periodically.
fn wrap_into(x: f64, lo: f64, hi: f64) -> f64 {
    let range = hi - lo;
    if range <= 0.0 {
        return lo;
    }
    let r = (x - lo).rem_euclid(range) + lo;
    r.clamp(lo, hi)
}

/// Bounded Brent minimization (golden section with parabolic steps) on
/// `[lo, hi]`, started from `x0`, using at most `max_evals` evaluations.
pub fn brent_bounded<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    hi: f64,
    x0: f64,
    f0: f64,
    max_evals: usize,
) -> Minimum {
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    const XATOL: f64 = 1e-10;
    let (mut a, mut b) = (lo, hi);
    let (mut x, mut w, mut v) = (x0, x0, x0);
    let (mut fx, mut fw, mut fv) = (f0, f0, f0);
    let (mut d, mut e) = (0.0f64, 0.0f64);
    let mut evals = 0u64;

    while (evals as usize) < max_evals {
        let xm = 0.5 * (a + b);
        let tol1 = f64::EPSILON.sqrt() * x.abs() + XATOL / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            // Parabola through x, w, v.
            let mut r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            r = e;
            e = d;
            if p.abs() < (0.5 * q * r).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if (u - a) < tol2 || (b - u) < tol2 {
                    d = if xm >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let u = u.clamp(lo, hi);
        let fu = f(u);
        evals += 1;

        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    Minimum {
        x,
        value: fx,
        evals,
    }
}

/// Minimizes `f` over `[lo, hi]`.
///
/// Each global iteration runs a two-step Markov chain at the current
/// temperature `T0 (2^{qv-1} - 1) / ((i + 2)^{qv-1} - 1)`. A chain that
/// improves the best point triggers a Brent refinement of it. After
/// `restart_stall` iterations without improvement the chain restarts at a
/// random point.
pub fn dual_annealing<F, R>(mut f: F, lo: f64, hi: f64, cfg: &AnnealerConfig, rng: &mut R) -> Minimum
where
    F: FnMut(f64) -> f64,
    R: Rng,
{
    let mut evals = 0u64;
    fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64, evals: &mut u64) -> f64 {
        *evals += 1;
        f(x)
    }

    if !(hi > lo) {
        let x = lo;
        let value = eval(&mut f, x, &mut evals);
        return Minimum { x, value, evals };
    }

    let visiting = Visiting::new(cfg.visiting_param);
    let qv = cfg.visiting_param;
    let t1 = ((qv - 1.0) * 2f64.ln()).exp() - 1.0;
    let chain_len = 2;

    let mut current = rng.random_range(lo..=hi);
    let mut e_current = eval(&mut f, current, &mut evals);
    let (mut best, mut e_best) = (current, e_current);
    let mut stall = 0usize;

    for i in 0..cfg.t_global {
        let t2 = ((qv - 1.0) * ((i + 2) as f64).ln()).exp() - 1.0;
        let temperature = cfg.initial_temperature * t1 / t2;
        let temperature_step = temperature / (i + 1) as f64;
        let mut improved = false;

        for _ in 0..chain_len {
            let candidate = wrap_into(current + visiting.step(temperature, rng), lo, hi);
            let e = eval(&mut f, candidate, &mut evals);
            if e < e_current {
                current = candidate;
                e_current = e;
                if e < e_best {
                    best = candidate;
                    e_best = e;
                    improved = true;
                }
            } else {
                let pqv_temp = 1.0
                    - (1.0 - cfg.acceptance_param) * (e - e_current) / temperature_step;
                let pqv = if pqv_temp <= 0.0 {
                    0.0
                } else {
                    (pqv_temp.ln() / (1.0 - cfg.acceptance_param)).exp()
                };
                if rng.random::<f64>() <= pqv {
                    current = candidate;
                    e_current = e;
                }
            }
        }

        if improved {
            let mut counted = |x: f64| {
                evals += 1;
                f(x)
            };
            let local = brent_bounded(&mut counted, lo, hi, best, e_best, cfg.t_local);
            if local.value < e_best {
                best = local.x;
                e_best = local.value;
                current = best;
                e_current = e_best;
            }
            stall = 0;
        } else {
            stall += 1;
            if cfg.restart_stall > 0 && stall >= cfg.restart_stall {
                current = rng.random_range(lo..=hi);
                e_current = eval(&mut f, current, &mut evals);
                if e_current < e_best {
                    best = current;
                    e_best = e_current;
                }
                stall = 0;
            }
        }
    }

    Minimum {
        x: best,
        value: e_best,
        evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    #[test]
    fn brent_finds_parabola_vertex() {
        let mut f = |x: f64| (x - 0.3) * (x - 0.3) + 1.0;
        let f0 = f(-0.9);
        let m = brent_bounded(&mut f, -1.0, 2.0, -0.9, f0, 100);
        assert!((m.x - 0.3).abs() < 1e-7, "{m:?}");
    }

    #[test]
    fn brent_respects_bounds() {
        let mut f = |x: f64| x;
        let m = brent_bounded(&mut f, 0.5, 1.0, 0.8, 0.8, 100);
        assert!(m.x >= 0.5 && m.x - 0.5 < 1e-6, "{m:?}");
    }

    #[test]
    fn escapes_local_minimum() {
        // Rastrigin-like: global minimum at x = 0 among many local minima.
        let f = |x: f64| x * x + 10.0 * (1.0 - (2.0 * PI * x).cos());
        let cfg = AnnealerConfig::default();
        for s in 0..10 {
            let mut rng = seed::rng(s, &[]);
            let m = dual_annealing(f, -5.12, 5.12, &cfg, &mut rng);
            assert!(m.x.abs() < 1e-5, "seed {s}: {m:?}");
        }
    }

    #[test]
    fn degenerate_interval() {
        let mut rng = seed::rng(0, &[]);
        let m = dual_annealing(|x| x * 2.0, 1.0, 1.0, &AnnealerConfig::default(), &mut rng);
        assert_eq!(m.x, 1.0);
        assert_eq!(m.evals, 1);
    }

    #[test]
    fn visiting_steps_are_finite() {
        let v = Visiting::new(2.62);
        let mut rng = seed::rng(1, &[]);
        for t in [5230.0, 10.0, 1e-3] {
            for _ in 0..1000 {
                assert!(v.step(t, &mut rng).is_finite());
            }
        }
    }
}
