mod common;

use common::small_config;
use corridor_rrm::channel::{self, file, ProviderKind};
use corridor_rrm::harness::{
    self, benchmark, emit_reports, gain_sweep, run_scenario, sweep, AllocatorKind,
    ExperimentResult, SweepAxis,
};
use corridor_rrm::harness::report::{results_json, summary_csv, SUMMARY_HEADER};
use corridor_rrm::seed::{self, tag};
use corridor_rrm::Error;

#[test]
fn identical_runs_give_identical_json() {
    let c = small_config(6, 3);
    let a = results_json(&[run_scenario(&c).unwrap()]);
    let b = results_json(&[run_scenario(&c).unwrap()]);
    assert_eq!(a, b);
}

#[test]
fn seed_changes_results() {
    let c = small_config(6, 1);
    let mut d = c.clone();
    d.seed = 2;
    assert_ne!(
        run_scenario(&c).unwrap().mean_rate_bps,
        run_scenario(&d).unwrap().mean_rate_bps
    );
}

#[test]
fn results_json_round_trips() {
    let c = small_config(5, 2);
    let r = vec![run_scenario(&c).unwrap()];
    let text = results_json(&r);
    let back: Vec<ExperimentResult> = serde_json::from_str(&text).unwrap();
    assert_eq!(results_json(&back), text);
    assert_eq!(back[0].config, c);
    assert_eq!(back[0].config_digest, c.digest());
    assert!(back[0].replications.iter().all(|rep| rep.config_digest == c.digest()));
}

#[test]
fn single_value_sweep_matches_run() {
    let c = small_config(5, 2);
    let swept = sweep(&c, SweepAxis::UavCount, &[5.0]).unwrap();
    assert_eq!(results_json(&swept), results_json(&[run_scenario(&c).unwrap()]));
    assert!(sweep(&c, SweepAxis::Altitude, &[]).is_err());
}

#[test]
fn sweeps_share_replication_seeds() {
    let c = small_config(4, 2);
    let out = sweep(&c, SweepAxis::Altitude, &[80.0, 120.0]).unwrap();
    for r in 0..2 {
        assert_eq!(out[0].replications[r].seed, out[1].replications[r].seed);
        assert_eq!(out[0].replications[r].seed, harness::replication_seed(c.seed, r));
    }
}

#[test]
fn more_uavs_lower_mean_rate() {
    let c = small_config(10, 4);
    let out = sweep(&c, SweepAxis::UavCount, &[10.0, 20.0]).unwrap();
    assert!(out[1].mean_rate_bps <= out[0].mean_rate_bps);
}

#[test]
fn two_stage_beats_random() {
    let mut c = small_config(12, 5);
    let best = run_scenario(&c).unwrap();
    c.allocator = AllocatorKind::Random;
    let random = run_scenario(&c).unwrap();
    assert!(best.mean_rate_bps >= random.mean_rate_bps);
}

#[test]
fn reports_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let c = small_config(4, 1);
    let results = vec![run_scenario(&c).unwrap(), run_scenario(&c).unwrap()];
    let rows = gain_sweep(&c.antenna, 105.0, 0.0, 37);
    let paths = emit_reports(&results, dir.path(), Some(&rows)).unwrap();
    assert_eq!(paths.len(), 3);
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    let gains = std::fs::read_to_string(dir.path().join("gain_sweep.csv")).unwrap();
    assert_eq!(gains.lines().count(), 38);
}

#[test]
fn empty_summary_is_header_only() {
    assert_eq!(summary_csv(&[]), format!("{SUMMARY_HEADER}\n"));
    let dir = tempfile::tempdir().unwrap();
    emit_reports(&[], dir.path(), None).unwrap();
    let json = std::fs::read_to_string(dir.path().join("results.json")).unwrap();
    assert_eq!(json.trim(), "[]");
}

#[test]
fn report_io_errors_name_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    match emit_reports(&[], &blocker.join("sub"), None) {
        Err(Error::Io { path, .. }) => assert!(path.starts_with(&blocker)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn csv_floats_round_trip() {
    let c = small_config(4, 2);
    let r = run_scenario(&c).unwrap();
    let csv = summary_csv(std::slice::from_ref(&r));
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let mean: f64 = row[6].parse().unwrap();
    assert_eq!(mean, r.mean_rate_bps / 1e6);
}

#[test]
fn infeasible_config_is_rejected() {
    let mut c = small_config(70, 1);
    c.codebook.n_beams = 16;
    let Err(Error::Config(msgs)) = run_scenario(&c) else {
        panic!("expected a config error");
    };
    assert!(msgs.iter().any(|m| m.contains("uav_count")));
}

#[test]
fn benchmark_reports_linear_evals() {
    let mut c = small_config(10, 1);
    c.annealer.restart_stall = 0;
    let rows = benchmark(&c, &[5, 10]).unwrap();
    assert_eq!(rows.iter().map(|r| r.uav_count).collect::<Vec<_>>(), vec![5, 10]);
    let ratio = rows[1].stage1_evals as f64 / rows[0].stage1_evals as f64;
    assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
}

#[test]
fn imported_channel_matches_generated() {
    let mut c = small_config(5, 1);
    c.channel_hf.kind = ProviderKind::FewRay;
    c.channel_hf.ray_count = 200;
    let direct = run_scenario(&c).unwrap();

    let scene = c.scene().unwrap();
    let spec = channel::ChannelProviderSpec {
        seed: seed::derive(harness::replication_seed(c.seed, 0), &[tag::CHANNEL_HF]),
        ..c.channel_hf.clone()
    };
    let t = channel::generate(&scene.links, &spec, &c.rf).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("hf.ctns");
    file::export_tensor(&p, &t).unwrap();

    let mut imported = c.clone();
    imported.channel_hf.kind = ProviderKind::Import;
    imported.channel_hf.import_path = Some(p);
    let via_file = run_scenario(&imported).unwrap();
    assert_eq!(
        direct.replications[0].per_uav_rate_bps,
        via_file.replications[0].per_uav_rate_bps
    );
}

#[test]
fn gain_sweep_peaks_at_scan() {
    let c = small_config(1, 1);
    let rows = gain_sweep(&c.antenna, 105.0, 20.0, 361);
    let best = rows.iter().max_by(|a, b| a.total_db.total_cmp(&b.total_db)).unwrap();
    assert!((best.phi_deg - 20.0).abs() <= 5.0, "{best:?}");
}
