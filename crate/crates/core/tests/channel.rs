mod common;

use corridor_rrm::channel::{
    self, degrade, file, ChannelProviderSpec, LinkGainTensor, ProviderKind, RfConstants,
};
use corridor_rrm::seed;
use corridor_rrm::TensorLoadError;
use proptest::prelude::*;

fn few_ray(m: usize, rays: u64, seed: u64) -> (corridor_rrm::Scene, LinkGainTensor) {
    let s = common::square_scene(m, 100.0, 16);
    let spec = ChannelProviderSpec {
        kind: ProviderKind::FewRay,
        ray_count: rays,
        seed,
        ..Default::default()
    };
    let t = channel::generate(&s.links, &spec, &RfConstants::default()).unwrap();
    (s, t)
}

#[test]
fn degrade_preserves_mean_power() {
    let m = 5;
    let seeds = 1000;
    let (_, first) = few_ray(m, 1_000_000, 0);
    let scatter = first.scatter.clone().unwrap();
    let expected: Vec<f64> = scatter
        .los
        .iter()
        .zip(&scatter.scattered_power)
        .map(|(h, p)| h.norm_sqr() + p)
        .collect();
    let mut hf_sum = vec![0.0; m * 4];
    let mut lf_sum = vec![0.0; m * 4];
    for s in 0..seeds {
        let (_, hf) = few_ray(m, 1_000_000, s);
        let lf = degrade(&hf, 100, seed::derive(s, &[99]));
        for i in 0..m * 4 {
            hf_sum[i] += hf.power_gains[i];
            lf_sum[i] += lf.power_gains[i];
        }
    }
    let ratio = |sums: &[f64]| {
        sums.iter().zip(&expected).map(|(s, e)| s / seeds as f64 / e).collect::<Vec<_>>()
    };
    for r in [ratio(&hf_sum), ratio(&lf_sum)] {
        let pooled = r.iter().sum::<f64>() / r.len() as f64;
        assert!((pooled - 1.0).abs() < 0.03, "pooled {pooled}");
        assert!(r.iter().all(|x| (x - 1.0).abs() < 0.12), "{r:?}");
    }
}

#[test]
fn degrade_is_noop_at_or_above_source() {
    let (_, hf) = few_ray(3, 500, 4);
    assert_eq!(degrade(&hf, 500, 1), hf);
    assert_eq!(degrade(&hf, 10_000, 1), hf);
}

#[test]
fn degrade_moves_away_from_source() {
    let (_, hf) = few_ray(6, 1_000_000, 8);
    let near = degrade(&hf, 500_000, 3);
    let far = degrade(&hf, 10, 3);
    let dist = |t: &LinkGainTensor| {
        t.power_gains
            .iter()
            .zip(&hf.power_gains)
            .map(|(a, b)| ((a - b) / b).abs())
            .sum::<f64>()
    };
    assert!(dist(&near) < dist(&far));
}

#[test]
fn degrade_of_import_is_identity() {
    let t = LinkGainTensor::from_power_gains(2, 2, vec![1e-9, 2e-9, 3e-9, 4e-9]).unwrap();
    assert_eq!(degrade(&t, 10, 0), t);
}

#[test]
fn binary_and_json_round_trip() {
    let (_, hf) = few_ray(3, 50, 2);
    let dir = tempfile::tempdir().unwrap();
    for name in ["t.ctns", "t.json"] {
        let p = dir.path().join(name);
        file::export_tensor(&p, &hf).unwrap();
        let back = file::import_tensor(&p).unwrap();
        assert_eq!(back.m, 3);
        assert_eq!(back.l, 4);
        for (a, b) in back.power_gains.iter().zip(&hf.power_gains) {
            assert!((a - b).abs() <= 1e-15 * b);
        }
    }
}

#[test]
fn import_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.ctns");
    assert!(matches!(
        file::import_tensor(&missing),
        Err(corridor_rrm::Error::TensorLoad(TensorLoadError::Missing(_)))
    ));
    let (_, hf) = few_ray(2, 10, 1);
    let mut bytes = file::encode(&hf);
    bytes.pop();
    assert!(matches!(file::decode(&bytes), Err(TensorLoadError::DimensionMismatch(_))));
}

#[test]
fn import_checks_scene_dimensions() {
    let (_, hf) = few_ray(3, 10, 1);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.ctns");
    file::export_tensor(&p, &hf).unwrap();
    let other = common::square_scene(5, 100.0, 16);
    let spec = ChannelProviderSpec {
        kind: ProviderKind::Import,
        import_path: Some(p),
        ..Default::default()
    };
    assert!(matches!(
        channel::generate(&other.links, &spec, &RfConstants::default()),
        Err(corridor_rrm::Error::DimensionMismatch(_))
    ));
}

fn spearman(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(x: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
        let mut r = vec![0.0; x.len()];
        for (rank, &i) in idx.iter().enumerate() {
            r[i] = rank as f64;
        }
        r
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let d2: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - y).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

#[test]
fn high_k_few_ray_ranks_like_statistical_path_loss() {
    // With a dominant LOS both models order links by distance.
    let s = common::square_scene(10, 100.0, 16);
    let rf = RfConstants::default();
    let mk = |kind| ChannelProviderSpec {
        kind,
        rician_k_db: 40.0,
        ray_count: 1000,
        seed: 5,
        ..Default::default()
    };
    let a = channel::generate(&s.links, &mk(ProviderKind::FewRay), &rf).unwrap();
    let b = channel::generate(&s.links, &mk(ProviderKind::Statistical), &rf).unwrap();
    assert!(spearman(&a.power_gains, &b.power_gains) > 0.9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gains_are_finite_and_positive(seed in any::<u64>(), k_db in -10.0f64..30.0, rays in 1u64..5000) {
        let s = common::square_scene(4, 100.0, 16);
        for kind in [ProviderKind::FewRay, ProviderKind::Statistical] {
            let spec = ChannelProviderSpec { kind, ray_count: rays, rician_k_db: k_db, seed, ..Default::default() };
            let t = channel::generate(&s.links, &spec, &RfConstants::default()).unwrap();
            prop_assert!(t.power_gains.iter().all(|g| g.is_finite() && *g > 0.0));
            let again = channel::generate(&s.links, &spec, &RfConstants::default()).unwrap();
            prop_assert_eq!(&t, &again);
        }
    }

    #[test]
    fn degrade_is_deterministic(seed in any::<u64>(), target in 1u64..1000) {
        let (_, hf) = few_ray(2, 5000, seed);
        prop_assert_eq!(degrade(&hf, target, seed), degrade(&hf, target, seed));
    }
}
