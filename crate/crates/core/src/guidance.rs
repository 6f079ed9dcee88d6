//! Closed-loop waypoint guidance.
//!
//! Every control tick the controller observes the blob centroid, moves the
//! stimulus one waypoint further along the path once the blob is closer to the
//! current target than to the waypoint it is leaving, and latches completion
//! when the blob settles near the goal. Between ticks it keeps projecting the
//! stimulus: a point source of attractant at the target, or an unlit square
//! around the target with everything else illuminated.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arena::{Arena, PathSpec};
use crate::fields::{IlluminationField, TrailField};
use crate::geom::{Cell, Point};
use crate::rng::SimRng;
use crate::swarm::Population;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StimulusMode {
    /// Pull the blob with an attractant source at the target.
    Attract,
    /// Push the blob by lighting everything outside a square around the target.
    Repel,
}

impl StimulusMode {
    pub fn as_str(self) -> &'static str {
        match self {
            StimulusMode::Attract => "attract",
            StimulusMode::Repel => "repel",
        }
    }
}

impl fmt::Display for StimulusMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown stimulus mode `{0}` (expected attract or repel)")]
pub struct UnknownMode(String);

impl FromStr for StimulusMode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "attract" => Ok(StimulusMode::Attract),
            "repel" => Ok(StimulusMode::Repel),
            other => Err(UnknownMode(other.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("invalid guidance parameter: {0}")]
pub struct GuidanceParamError(String);

#[derive(Debug, Clone, PartialEq)]
pub struct GuidanceParams {
    /// Scheduler steps between controller observations.
    pub control_interval: u64,
    pub mode: StimulusMode,
    /// Attractant deposited at the target cell every guided step.
    pub attractant_weight: f64,
    /// Side of the unlit square in repel mode (odd).
    pub mask_side: usize,
    /// Centroid distance from the goal that counts as arrival.
    pub completion_radius: f64,
    /// Guided steps before the run is abandoned.
    pub max_steps: u64,
    /// Unguided steps after inoculation.
    pub warmup_steps: u64,
    /// Standard deviation (cells) of Gaussian jitter applied to the attractant
    /// location each step. `None` disables the jitter.
    pub stimulus_noise: Option<f64>,
}

/// A single-cell source is felt only within a cell or two of where it is
/// injected under the default damping, so it has to outweigh fresh agent
/// deposits by orders of magnitude to steer a slow blob.
pub const DEFAULT_ATTRACTANT_WEIGHT: f64 = 1000.0;

/// About one settled 2000-particle blob diameter.
pub const DEFAULT_MASK_SIDE: usize = 51;

impl Default for GuidanceParams {
    fn default() -> Self {
        Self {
            control_interval: 50,
            mode: StimulusMode::Attract,
            attractant_weight: DEFAULT_ATTRACTANT_WEIGHT,
            mask_side: DEFAULT_MASK_SIDE,
            completion_radius: 10.0,
            max_steps: 100_000,
            warmup_steps: 1000,
            stimulus_noise: None,
        }
    }
}

impl GuidanceParams {
    pub fn validate(&self) -> Result<(), GuidanceParamError> {
        let bad = |m: &str| Err(GuidanceParamError(m.to_string()));
        if self.control_interval == 0 {
            return bad("control interval must be >= 1");
        }
        if self.mask_side < 3 || self.mask_side.is_multiple_of(2) {
            return bad("mask side must be odd and >= 3");
        }
        if !(self.completion_radius > 0.0) {
            return bad("completion radius must be > 0");
        }
        if !(self.attractant_weight >= 0.0 && self.attractant_weight.is_finite()) {
            return bad("attractant weight must be >= 0");
        }
        if let Some(sigma) = self.stimulus_noise {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return bad("stimulus noise must be >= 0");
            }
        }
        Ok(())
    }
}

/// Mean particle position. Panics on an empty population.
pub fn centroid(population: &Population) -> Point {
    population
        .centroid()
        .expect("centroid of an empty population")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState {
    target_index: usize,
    completed: bool,
    completion_step: Option<u64>,
    /// Target the illumination mask was last centered on.
    masked_target: Option<usize>,
}

impl Default for ControllerState {
    fn default() -> Self {
        Self::new()
    }
}

impl ControllerState {
    pub fn new() -> Self {
        Self {
            target_index: 1,
            completed: false,
            completion_step: None,
            masked_target: None,
        }
    }

    /// Starts at an arbitrary target (tests and resumed runs).
    pub fn with_target(target_index: usize) -> Self {
        assert!(target_index >= 1, "target index starts at 1");
        Self {
            target_index,
            ..Self::new()
        }
    }

    pub fn target_index(&self) -> usize {
        self.target_index
    }

    pub fn completed(&self) -> bool {
        self.completed
    }

    pub fn completion_step(&self) -> Option<u64> {
        self.completion_step
    }

    pub fn target(&self, path: &PathSpec) -> Cell {
        path.waypoints()[self.target_index]
    }

    /// Selects the next waypoint when the centroid is strictly closer to the
    /// current target than to the waypoint before it. Returns whether the target
    /// moved. The last waypoint is terminal.
    pub fn maybe_advance_target(&mut self, c: Point, path: &PathSpec) -> bool {
        let t = self.target_index;
        if t >= path.last_index() {
            return false;
        }
        let pts = path.points();
        if c.distance(pts[t]) < c.distance(pts[t - 1]) {
            self.target_index += 1;
            true
        } else {
            false
        }
    }

    /// Projects this step's stimulus.
    ///
    /// Attract: deposits the attractant weight at the target cell (or at a
    /// jittered traversable cell when stimulus noise is on) and keeps the
    /// illumination off. Repel: centers the mask on the target whenever the
    /// target changed since the last call; nothing is deposited.
    pub fn apply_stimulus(
        &mut self,
        params: &GuidanceParams,
        arena: &Arena,
        trail: &mut TrailField,
        illum: &mut IlluminationField,
        path: &PathSpec,
        rng: &mut SimRng,
    ) {
        let target = self.target(path);
        match params.mode {
            StimulusMode::Attract => {
                if illum.is_active() {
                    illum.clear_mask();
                }
                let cell = match params.stimulus_noise {
                    Some(sigma) if sigma > 0.0 => {
                        let jittered = Cell::new(
                            (target.x as f64 + 0.5 + sigma * rng.gaussian()).floor() as i64,
                            (target.y as f64 + 0.5 + sigma * rng.gaussian()).floor() as i64,
                        );
                        if arena.is_traversable_cell(jittered) {
                            jittered
                        } else {
                            target
                        }
                    }
                    _ => target,
                };
                trail.deposit(cell, params.attractant_weight);
            }
            StimulusMode::Repel => {
                if self.masked_target != Some(self.target_index) || !illum.is_active() {
                    illum.set_mask(target, params.mask_side);
                    self.masked_target = Some(self.target_index);
                }
            }
        }
    }

    /// Latches completion the first time the last waypoint is targeted and the
    /// centroid is within the completion radius of the goal (inclusive).
    pub fn check_completion(
        &mut self,
        c: Point,
        path: &PathSpec,
        params: &GuidanceParams,
        step: u64,
    ) -> bool {
        if !self.completed
            && self.target_index == path.last_index()
            && c.distance(path.points()[path.last_index()]) <= params.completion_radius
        {
            self.completed = true;
            self.completion_step = Some(step);
        }
        self.completed
    }
}
