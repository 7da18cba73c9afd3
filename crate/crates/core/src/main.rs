use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use corridor_rrm::channel::{self, file, ProviderKind};
use corridor_rrm::harness::{
    self, report, AllocationChannel, AllocatorKind, ScenarioConfig, SweepAxis,
};
use corridor_rrm::seed::{self, tag};

#[derive(Parser)]
#[command(name = "corridor-rrm", version, about = "Beam-aware UAV corridor resource allocation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario per allocator and allocation channel.
    Run(RunArgs),
    /// Repeat a scenario over UAV counts or altitudes.
    Sweep(SweepArgs),
    /// Time the two-stage allocator for several UAV counts.
    Bench(BenchArgs),
    /// Tabulate antenna gain versus azimuth.
    GainSweep(GainArgs),
    /// Check a configuration file and print the resolved config.
    ValidateConfig {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write the first replication's evaluation channel to a file.
    ExportChannel {
        #[command(flatten)]
        common: Common,
        /// Output file; `.json` selects the JSON layout, otherwise binary.
        #[arg(long)]
        to: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario config (JSON). Omitted fields take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replications: Option<usize>,
    /// Evaluation channel: few_ray, statistical or import.
    #[arg(long)]
    channel: Option<ProviderKind>,
    #[arg(long)]
    import_path: Option<PathBuf>,
    /// Comma-separated UAV counts.
    #[arg(long, value_delimiter = ',')]
    uavs: Vec<usize>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct Selection {
    /// Comma-separated: two_stage, random, closest_bs.
    #[arg(long, value_delimiter = ',')]
    allocator: Vec<AllocatorKind>,
    /// Comma-separated: hf, lf, statistical.
    #[arg(long, value_delimiter = ',')]
    allocation_channel: Vec<AllocationChannel>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    select: Selection,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    select: Selection,
    /// Comma-separated corridor altitudes in meters (sweeps altitude
    /// instead of `--uavs`).
    #[arg(long, value_delimiter = ',')]
    altitudes: Vec<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct GainArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Zenith angle of the cut, degrees.
    #[arg(long, default_value_t = 105.0)]
    theta: f64,
    /// Scan angle, degrees.
    #[arg(long, default_value_t = 0.0)]
    scan: f64,
    #[arg(long, default_value_t = 721)]
    points: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn load(path: Option<&Path>) -> anyhow::Result<ScenarioConfig> {
    Ok(match path {
        Some(p) => ScenarioConfig::load(p)?,
        None => ScenarioConfig::default(),
    })
}

impl Common {
    fn resolve(&self) -> anyhow::Result<ScenarioConfig> {
        if let Some(n) = self.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("configuring the thread pool")?;
        }
        let mut c = load(self.config.as_deref())?;
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(r) = self.replications {
            c.replications = r;
        }
        if let Some(k) = self.channel {
            c.channel_hf.kind = k;
        }
        if let Some(p) = &self.import_path {
            c.channel_hf.import_path = Some(p.clone());
        }
        if let [m] = self.uavs[..] {
            c.uav_count = m;
        }
        c.validate()?;
        Ok(c)
    }
}

impl Selection {
    fn configs(&self, base: &ScenarioConfig, uavs: &[usize]) -> Vec<ScenarioConfig> {
        let uavs = if uavs.is_empty() { vec![base.uav_count] } else { uavs.to_vec() };
        let allocators = if self.allocator.is_empty() {
            vec![base.allocator]
        } else {
            self.allocator.clone()
        };
        let channels = if self.allocation_channel.is_empty() {
            vec![base.allocation_channel]
        } else {
            self.allocation_channel.clone()
        };
        let mut out = Vec::new();
        for &a in &allocators {
            for &ch in &channels {
                for &m in &uavs {
                    let mut c = base.clone();
                    c.allocator = a;
                    c.allocation_channel = ch;
                    c.uav_count = m;
                    out.push(c);
                }
            }
        }
        out
    }
}

fn print_summary(results: &[harness::ExperimentResult]) {
    for r in results {
        println!(
            "{:<10} alloc={:<11} M={:<3} h={:<6} mean={:.6e} Mbps std={:.3e}",
            r.scenario.allocator,
            r.scenario.allocation_channel,
            r.scenario.uav_count,
            r.scenario.altitude_m,
            r.mean_rate_mbps(),
            r.std_rate_bps / 1e6,
        );
    }
}

fn written(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run(args) => {
            let base = args.common.resolve()?;
            let results = args
                .select
                .configs(&base, &args.common.uavs)
                .iter()
                .map(harness::run_scenario)
                .collect::<Result<Vec<_>, _>>()?;
            print_summary(&results);
            written(&harness::emit_reports(&results, &args.out, None)?);
        }
        Command::Sweep(args) => {
            let base = args.common.resolve()?;
            let uavs = &args.common.uavs;
            let (axis, values): (SweepAxis, Vec<f64>) = match (uavs.len(), args.altitudes.is_empty()) {
                (0, true) => bail!("sweep needs --uavs or --altitudes"),
                (_, false) if uavs.len() > 1 => bail!("sweep one axis at a time"),
                (_, false) => (SweepAxis::Altitude, args.altitudes.clone()),
                _ => (SweepAxis::UavCount, uavs.iter().map(|&m| m as f64).collect()),
            };
            let mut results = Vec::new();
            for c in args.select.configs(&base, &[]) {
                results.extend(harness::sweep(&c, axis, &values)?);
            }
            print_summary(&results);
            written(&harness::emit_reports(&results, &args.out, None)?);
        }
        Command::Bench(args) => {
            let base = args.common.resolve()?;
            let counts = match args.common.uavs.as_slice() {
                [] => vec![10, 20, 30, 40],
                m => m.to_vec(),
            };
            let rows = harness::benchmark(&base, &counts)?;
            for r in &rows {
                println!(
                    "M={:<4} stage1={:.4}s stage2={:.6}s total={:.4}s evals={}",
                    r.uav_count, r.stage1_s, r.stage2_s, r.total_s, r.stage1_evals
                );
            }
            written(&[report::emit_bench(&rows, &args.out)?]);
        }
        Command::GainSweep(args) => {
            let c = load(args.config.as_deref())?;
            let rows = harness::gain_sweep(&c.antenna, args.theta, args.scan, args.points);
            written(&harness::emit_reports(&[], &args.out, Some(&rows))?);
        }
        Command::ValidateConfig { config } => {
            let c = load(config.as_deref())?;
            c.validate()?;
            println!("{}", c.to_json());
            eprintln!("ok (digest {})", c.digest());
        }
        Command::ExportChannel { common, to } => {
            let c = common.resolve()?;
            let scene = c.scene()?;
            let rep_seed = harness::replication_seed(c.seed, 0);
            let spec = channel::ChannelProviderSpec {
                seed: seed::derive(rep_seed, &[tag::CHANNEL_HF]),
                ..c.channel_hf.clone()
            };
            let tensor = channel::generate(&scene.links, &spec, &c.rf)?;
            file::export_tensor(&to, &tensor)?;
            eprintln!("wrote {}", to.display());
        }
    }
    Ok(())
}
