//! Run orchestration: configuration, the scheduler loop, artifacts and sweeps.

mod export;
mod frame;
mod sweep;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::arena::{load_arena, Arena, LoadError, PathSpec};
use crate::fields::{IlluminationField, TrailField};
use crate::geom::Point;
use crate::guidance::{centroid, ControllerState, GuidanceParamError, GuidanceParams};
use crate::metrics::{summarize, ErrorTrace, RunSummary};
use crate::rng::SimRng;
use crate::swarm::{Population, SwarmError, SwarmParams};

pub use export::{
    summary_csv, summary_header, summary_row, trace_csv, trajectory_csv, TrajectoryRow,
};
pub use frame::render_frame;
pub use sweep::{sweep, sweep_loaded, Aggregate, SweepConfig, SweepRow, SweepTable};

/// Default number of steps the run continues after completion.
pub const DEFAULT_GRACE_STEPS: u64 = 2000;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Swarm(#[from] SwarmError),
    #[error(transparent)]
    Guidance(#[from] GuidanceParamError),
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub arena: PathBuf,
    pub swarm: SwarmParams,
    pub guidance: GuidanceParams,
    pub particles: usize,
    pub seed: u64,
    /// Write a frame every this many scheduler steps; 0 disables frames.
    pub frame_every: u64,
    /// Steps simulated after completion (orbit analysis).
    pub grace_steps: u64,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            arena: PathBuf::new(),
            swarm: SwarmParams::default(),
            guidance: GuidanceParams::default(),
            particles: 2000,
            seed: 1,
            frame_every: 0,
            grace_steps: DEFAULT_GRACE_STEPS,
            out_dir: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), RunError> {
        self.swarm.validate()?;
        self.guidance.validate()?;
        Ok(())
    }
}

/// Everything a finished run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: RunSummary,
    pub trace: ErrorTrace,
    pub trajectory: Vec<TrajectoryRow>,
    /// PPM bytes of the last simulated step.
    pub final_frame: Vec<u8>,
    pub final_centroid: Point,
    /// Scheduler steps simulated after warm-up.
    pub guided_steps: u64,
}

/// A live simulation: lattice, particles, controller and random stream.
pub struct Simulation<'a> {
    arena: &'a Arena,
    path: &'a PathSpec,
    swarm: SwarmParams,
    guidance: GuidanceParams,
    trail: TrailField,
    illum: IlluminationField,
    population: Population,
    controller: ControllerState,
    rng: SimRng,
    step: u64,
    guided: u64,
}

impl<'a> Simulation<'a> {
    /// Inoculates `particles` at the path start.
    pub fn new(
        arena: &'a Arena,
        path: &'a PathSpec,
        swarm: SwarmParams,
        guidance: GuidanceParams,
        particles: usize,
        seed: u64,
    ) -> Result<Self, RunError> {
        swarm.validate()?;
        guidance.validate()?;
        let mut rng = SimRng::seed(seed);
        let population = Population::inoculate(arena, path.start(), particles, &mut rng)?;
        Ok(Self {
            arena,
            path,
            swarm,
            guidance,
            trail: TrailField::new(arena),
            illum: IlluminationField::for_arena(arena),
            population,
            controller: ControllerState::new(),
            rng,
            step: 0,
            guided: 0,
        })
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Steps taken through [`Self::step_guided`].
    pub fn guided_steps(&self) -> u64 {
        self.guided
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn trail(&self) -> &TrailField {
        &self.trail
    }

    pub fn illumination(&self) -> &IlluminationField {
        &self.illum
    }

    pub fn controller(&self) -> &ControllerState {
        &self.controller
    }

    pub fn arena(&self) -> &Arena {
        self.arena
    }

    /// One scheduler step without any stimulus.
    pub fn step_unguided(&mut self) {
        self.population.step(
            self.arena,
            &mut self.trail,
            &self.illum,
            &self.swarm,
            &mut self.rng,
        );
        self.step += 1;
    }

    pub fn warm_up(&mut self) {
        for _ in 0..self.guidance.warmup_steps {
            self.step_unguided();
        }
    }

    /// Stimulus then one scheduler step. On control ticks the centroid is
    /// sampled into `trace` before the controller updates.
    pub fn step_guided(&mut self, trace: &mut ErrorTrace) -> Option<Point> {
        self.controller.apply_stimulus(
            &self.guidance,
            self.arena,
            &mut self.trail,
            &mut self.illum,
            self.path,
            &mut self.rng,
        );
        self.step_unguided();
        self.guided += 1;
        if !self.guided.is_multiple_of(self.guidance.control_interval) {
            return None;
        }
        let c = centroid(&self.population);
        trace.record(self.step, c, self.controller.target_index(), self.path);
        self.controller.maybe_advance_target(c, self.path);
        self.controller
            .check_completion(c, self.path, &self.guidance, self.step);
        Some(c)
    }

    pub fn render(&self) -> Vec<u8> {
        render_frame(
            self.arena,
            &self.trail,
            &self.illum,
            &self.population,
            Some(self.path),
            Some(self.controller.target(self.path)),
        )
    }
}

/// Runs warm-up and guidance on a loaded arena. `on_frame` receives
/// `(step, ppm)` every `frame_every` steps.
pub fn execute(
    arena: &Arena,
    path: &PathSpec,
    config: &RunConfig,
    mut on_frame: impl FnMut(u64, &[u8]) -> Result<(), RunError>,
) -> Result<RunOutcome, RunError> {
    config.validate()?;
    let mut sim = Simulation::new(
        arena,
        path,
        config.swarm.clone(),
        config.guidance.clone(),
        config.particles,
        config.seed,
    )?;
    let frame_due = |step: u64| config.frame_every > 0 && step.is_multiple_of(config.frame_every);

    for _ in 0..config.guidance.warmup_steps {
        sim.step_unguided();
        if frame_due(sim.step) {
            on_frame(sim.step, &sim.render())?;
        }
    }

    let start = sim.step;
    let mut trace = ErrorTrace::new();
    let mut trajectory = Vec::new();
    while sim.step - start < config.guidance.max_steps {
        let target = sim.controller.target_index();
        if let Some(c) = sim.step_guided(&mut trace) {
            trajectory.push(TrajectoryRow {
                step: sim.step,
                centroid: c,
                target_index: target,
            });
        }
        if frame_due(sim.step) {
            on_frame(sim.step, &sim.render())?;
        }
        if let Some(done) = sim.controller.completion_step() {
            if sim.step - done >= config.grace_steps {
                break;
            }
        }
    }

    let final_centroid = centroid(&sim.population);
    if trace.is_empty() {
        // budget shorter than one control interval
        trace.record(
            sim.step,
            final_centroid,
            sim.controller.target_index(),
            path,
        );
    }
    let summary = summarize(
        &trace,
        start,
        sim.controller.completion_step(),
        path.points()[path.last_index()],
    );
    Ok(RunOutcome {
        summary,
        trace,
        trajectory,
        final_frame: sim.render(),
        final_centroid,
        guided_steps: sim.step - start,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    std::fs::write(path, bytes).map_err(|source| RunError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<(), RunError> {
    std::fs::create_dir_all(path).map_err(|source| RunError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads the arena, executes the run and, when an output directory is set,
/// writes `trajectory.csv`, `trace.csv`, `summary.csv`, `final.ppm` and
/// `frames/frame_<step>.ppm`.
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    let (arena, path) = load_arena(&config.arena)?;
    let frames_dir = config.out_dir.as_ref().map(|d| d.join("frames"));
    if let Some(dir) = &config.out_dir {
        create_dir(dir)?;
        if config.frame_every > 0 {
            create_dir(frames_dir.as_ref().expect("set with out_dir"))?;
        }
    }
    let outcome = execute(&arena, &path, config, |step, ppm| match &frames_dir {
        Some(dir) => write_file(&dir.join(format!("frame_{step:06}.ppm")), ppm),
        None => Ok(()),
    })?;
    if let Some(dir) = &config.out_dir {
        write_file(
            &dir.join("trajectory.csv"),
            trajectory_csv(&outcome.trajectory).as_bytes(),
        )?;
        write_file(&dir.join("trace.csv"), trace_csv(&outcome.trace).as_bytes())?;
        let row = summary_row(
            config.guidance.mode,
            config.swarm.p_reset,
            config.swarm.oscillatory,
            config.seed,
            &outcome.summary,
        );
        write_file(&dir.join("summary.csv"), summary_csv(&[row]).as_bytes())?;
        write_file(&dir.join("final.ppm"), &outcome.final_frame)?;
    }
    Ok(outcome)
}
