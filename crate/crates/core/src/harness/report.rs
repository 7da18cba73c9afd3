//! Output files: `results.json`, `summary.csv`, `bench.csv`,
//! `gain_sweep.csv`.
//!
//! CSV floats carry 17 significant digits. `results.json` holds only
//! deterministic fields (no wall-clock timings), so identical inputs give
//! identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::run::{BenchRow, ExperimentResult, GainSweepRow};
use crate::error::{Error, Result};

pub const SUMMARY_HEADER: &str = "allocator,allocation_channel,evaluation_channel,uav_count,altitude_m,replications,mean_mbps,std_mbps,stage1_s,stage2_s,stage1_evals";

fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

pub fn results_json(results: &[ExperimentResult]) -> String {
    let mut s = serde_json::to_string_pretty(results).expect("results are always serializable");
    s.push('\n');
    s
}

pub fn summary_csv(results: &[ExperimentResult]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in results {
        let n = r.replications.len().max(1) as f64;
        let (s1, s2, evals) = r.timings().fold((0.0, 0.0, 0u64), |acc, t| {
            (acc.0 + t.stage1_s, acc.1 + t.stage2_s, acc.2 + t.stage1_evals)
        });
        let _ = writeln!(
            out,
            "{},{},{:?},{},{},{},{},{},{},{},{}",
            r.scenario.allocator,
            r.scenario.allocation_channel,
            r.scenario.evaluation_channel,
            r.scenario.uav_count,
            f17(r.scenario.altitude_m),
            r.replications.len(),
            f17(r.mean_rate_bps / 1e6),
            f17(r.std_rate_bps / 1e6),
            f17(s1 / n),
            f17(s2 / n),
            (evals as f64 / n).round() as u64,
        );
    }
    out
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("uav_count,triplets,stage1_evals,stage1_s,stage2_s,total_s\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.uav_count,
            r.triplets,
            r.stage1_evals,
            f17(r.stage1_s),
            f17(r.stage2_s),
            f17(r.total_s)
        );
    }
    out
}

pub fn gain_sweep_csv(rows: &[GainSweepRow]) -> String {
    let mut out = String::from("phi_deg,element_db,array_db,total_db\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            f17(r.phi_deg),
            f17(r.element_db),
            f17(r.array_db),
            f17(r.total_db)
        );
    }
    out
}

/// Writes `results.json` and `summary.csv` (and `gain_sweep.csv` when
/// rows are given) into `out_dir`, creating it if needed.
pub fn emit_reports(
    results: &[ExperimentResult],
    out_dir: &Path,
    gain_sweep: Option<&[GainSweepRow]>,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = vec![
        write(out_dir.join("results.json"), &results_json(results))?,
        write(out_dir.join("summary.csv"), &summary_csv(results))?,
    ];
    if let Some(rows) = gain_sweep {
        written.push(write(out_dir.join("gain_sweep.csv"), &gain_sweep_csv(rows))?);
    }
    Ok(written)
}

pub fn emit_bench(rows: &[BenchRow], out_dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    write(out_dir.join("bench.csv"), &bench_csv(rows))
}
