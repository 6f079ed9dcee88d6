use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use blobguide::simrun::{self, summary_header, summary_row};
use blobguide::{guidance, swarm};
use blobguide::{load_arena, RunConfig, StimulusMode, SweepConfig};

#[derive(Parser)]
#[command(
    name = "blobguide",
    version,
    about = "Guide a simulated slime-mould blob along a waypoint path"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one guided traversal.
    Run(RunArgs),
    /// Run a grid of modes x pID values x seeds and aggregate the results.
    Sweep(SweepArgs),
    /// Parse an arena file and check its invariants.
    Validate {
        #[arg(long)]
        arena: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    arena: PathBuf,
    #[arg(long, default_value_t = 2000)]
    particles: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    warmup: u64,
    #[arg(long, default_value_t = 50)]
    control_interval: u64,
    #[arg(long, default_value_t = guidance::DEFAULT_MASK_SIDE)]
    mask_side: usize,
    #[arg(long, default_value_t = guidance::DEFAULT_ATTRACTANT_WEIGHT)]
    attractant_weight: f64,
    #[arg(long, default_value_t = swarm::DEFAULT_LIGHT_ATTENUATION)]
    light_attenuation: f64,
    #[arg(long, default_value_t = 100_000)]
    max_steps: u64,
    #[arg(long, default_value_t = 10.0)]
    completion_radius: f64,
    #[arg(long, default_value_t = simrun::DEFAULT_GRACE_STEPS)]
    grace_steps: u64,
    /// Gaussian jitter (cells) of the attractant location.
    #[arg(long)]
    stimulus_noise: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> RunConfig {
        let mut c = RunConfig {
            arena: self.arena.clone(),
            particles: self.particles,
            seed: self.seed,
            grace_steps: self.grace_steps,
            out_dir: self.out.clone(),
            ..RunConfig::default()
        };
        c.swarm.light_attenuation = self.light_attenuation;
        let g = &mut c.guidance;
        g.warmup_steps = self.warmup;
        g.control_interval = self.control_interval;
        g.mask_side = self.mask_side;
        g.attractant_weight = self.attractant_weight;
        g.max_steps = self.max_steps;
        g.completion_radius = self.completion_radius;
        g.stimulus_noise = self.stimulus_noise;
        c
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "attract")]
    mode: StimulusMode,
    #[arg(long, default_value_t = 0.05)]
    pid: f64,
    #[arg(long)]
    no_oscillatory: bool,
    #[arg(long, default_value_t = 0)]
    frame_every: u64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',', default_values_t = [0.001, 0.005, 0.01, 0.05])]
    pids: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [StimulusMode::Attract, StimulusMode::Repel])]
    modes: Vec<StimulusMode>,
    #[arg(long, default_value_t = 5)]
    seeds: u32,
    /// Comma-separated oscillatory settings to sweep, e.g. `true,false`.
    #[arg(long, value_delimiter = ',', default_values_t = [true])]
    oscillatory: Vec<bool>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { arena } => {
            let (a, p) = load_arena(&arena)?;
            println!(
                "{}: {}x{}, {} obstacle cells, {} waypoints",
                arena.display(),
                a.width(),
                a.height(),
                a.obstacle_count(),
                p.len()
            );
        }
        Command::Run(args) => {
            let mut cfg = args.common.config();
            cfg.guidance.mode = args.mode;
            cfg.swarm.p_reset = args.pid;
            cfg.swarm.oscillatory = !args.no_oscillatory;
            cfg.frame_every = args.frame_every;
            let outcome = simrun::run(&cfg).context("run failed")?;
            println!("{}", summary_header());
            println!(
                "{}",
                summary_row(
                    cfg.guidance.mode,
                    args.pid,
                    cfg.swarm.oscillatory,
                    cfg.seed,
                    &outcome.summary
                )
            );
        }
        Command::Sweep(args) => {
            let mut cfg = SweepConfig::new(args.common.config());
            cfg.pids = args.pids;
            cfg.modes = args.modes;
            cfg.seeds = args.seeds;
            cfg.oscillatory = args.oscillatory;
            let table = simrun::sweep(&cfg).context("sweep failed")?;
            print!("{}", table.aggregates_csv());
        }
    }
    Ok(())
}
