//! Guidance error traces and run summaries.

use crate::arena::PathSpec;
use crate::geom::Point;
use crate::swarm::Population;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub step: u64,
    pub centroid: Point,
    pub target_index: usize,
    pub dist_to_target: f64,
    pub dist_to_path: f64,
}

/// Samples taken at control ticks, strictly increasing in step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ErrorTrace {
    samples: Vec<Sample>,
}

impl ErrorTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_samples(samples: Vec<Sample>) -> Self {
        assert!(
            samples.windows(2).all(|w| w[0].step < w[1].step),
            "trace steps must be strictly increasing"
        );
        Self { samples }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Appends a sample. Panics if `step` does not exceed the previous sample's step.
    pub fn record(&mut self, step: u64, centroid: Point, target_index: usize, path: &PathSpec) {
        if let Some(last) = self.samples.last() {
            assert!(
                step > last.step,
                "sample at step {step} after step {}",
                last.step
            );
        }
        self.samples.push(Sample {
            step,
            centroid,
            target_index,
            dist_to_target: centroid.distance(path.points()[target_index]),
            dist_to_path: path.distance_to_path(centroid),
        });
    }

    /// Distance-to-target just before and just after every change of target:
    /// `(step of the first sample with the new target, before, after)`.
    pub fn target_jumps(&self) -> Vec<(u64, f64, f64)> {
        self.samples
            .windows(2)
            .filter(|w| w[1].target_index != w[0].target_index)
            .map(|w| (w[1].step, w[0].dist_to_target, w[1].dist_to_target))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub completed: bool,
    /// Guided steps until completion; present iff completed.
    pub traversal_steps: Option<u64>,
    pub mean_path_error: f64,
    pub max_path_error: f64,
    pub sawtooth_score: f64,
    /// Mean centroid distance from the goal after completion.
    pub orbit_radius: Option<f64>,
}

/// Summarizes a trace.
///
/// Path error and sawtooth score cover samples up to and including the
/// completion step (the whole trace when the run did not complete). The
/// sawtooth score is the fraction of consecutive same-target sample pairs whose
/// distance-to-target does not increase; with no such pairs it is 1. The orbit
/// radius is the mean centroid distance from `goal` over samples after
/// completion.
pub fn summarize(
    trace: &ErrorTrace,
    guidance_start: u64,
    completion_step: Option<u64>,
    goal: Point,
) -> RunSummary {
    assert!(!trace.is_empty(), "summarize needs at least one sample");
    let samples = trace.samples();
    let split = completion_step.map_or(samples.len(), |c| samples.partition_point(|s| s.step <= c));
    let tracked = &samples[..split.max(1)];
    let grace = &samples[split..];

    let n = tracked.len() as f64;
    let mean_path_error = tracked.iter().map(|s| s.dist_to_path).sum::<f64>() / n;
    let max_path_error = tracked.iter().map(|s| s.dist_to_path).fold(0.0, f64::max);

    let (mut pairs, mut falling) = (0usize, 0usize);
    for w in tracked.windows(2) {
        if w[0].target_index == w[1].target_index {
            pairs += 1;
            if w[1].dist_to_target <= w[0].dist_to_target {
                falling += 1;
            }
        }
    }
    let sawtooth_score = if pairs == 0 {
        1.0
    } else {
        falling as f64 / pairs as f64
    };

    let orbit_radius = match (completion_step, grace.is_empty()) {
        (Some(_), false) => {
            Some(grace.iter().map(|s| s.centroid.distance(goal)).sum::<f64>() / grace.len() as f64)
        }
        _ => None,
    };

    RunSummary {
        completed: completion_step.is_some(),
        traversal_steps: completion_step.map(|c| c - guidance_start),
        mean_path_error,
        max_path_error,
        sawtooth_score,
        orbit_radius,
    }
}

/// Fraction of particles within twice the inoculation radius of the centroid.
pub fn cohesion(population: &Population, inoculation_radius: f64) -> f64 {
    let c = population
        .centroid()
        .expect("cohesion of an empty population");
    let limit = 2.0 * inoculation_radius;
    let inside = population
        .particles()
        .iter()
        .filter(|p| p.pos.distance(c) <= limit)
        .count();
    inside as f64 / population.len() as f64
}
