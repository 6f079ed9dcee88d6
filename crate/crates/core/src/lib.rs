//! Headless multi-agent simulation of a slime-mould "blob" and a closed-loop
//! controller that steers it along waypoint paths through obstacle arenas.
//!
//! A population of particles on a single-occupancy lattice senses a diffusing
//! chemoattractant trail with three forward sensors, turns toward the strongest
//! reading and deposits trail whenever it moves. The collective behaves like a
//! cohesive amoeboid mass. The controller observes its centroid at fixed
//! intervals and projects either an attractant source or an illumination mask
//! at the next waypoint.
//!
//! Modules, bottom-up:
//!
//! * [`arena`]: lattice geometry, obstacles, waypoint paths, the arena file format
//! * [`fields`]: trail diffusion and the illumination mask
//! * [`swarm`]: particle sensing, turning, moving and scheduling
//! * [`guidance`]: the closed-loop controller
//! * [`metrics`]: error traces and run summaries
//! * [`simrun`]: run loop, CSV/PPM artifacts and sweeps

pub mod arena;
pub mod fields;
pub mod geom;
pub mod guidance;
pub mod metrics;
pub mod rng;
pub mod simrun;
pub mod swarm;

pub use arena::{load_arena, parse_arena, serialize_arena, Arena, PathSpec};
pub use fields::{IlluminationField, TrailField};
pub use geom::{Cell, Point};
pub use guidance::{ControllerState, GuidanceParams, StimulusMode};
pub use metrics::{cohesion, summarize, ErrorTrace, RunSummary};
pub use rng::SimRng;
pub use simrun::{execute, run, sweep, RunConfig, RunOutcome, Simulation, SweepConfig};
pub use swarm::{Particle, Population, SwarmParams};
