//! CSV artifacts. Headers always present, `.` decimal separator, LF endings.
//! Floats use Rust's shortest round-trip formatting; absent values are empty.

use std::fmt::Write as _;

use crate::geom::Point;
use crate::guidance::StimulusMode;
use crate::metrics::{ErrorTrace, RunSummary};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub step: u64,
    pub centroid: Point,
    pub target_index: usize,
}

pub fn trajectory_csv(rows: &[TrajectoryRow]) -> String {
    let mut out = String::from("step,cx,cy,target_index\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.step, r.centroid.x, r.centroid.y, r.target_index
        );
    }
    out
}

pub fn trace_csv(trace: &ErrorTrace) -> String {
    let mut out = String::from("step,dist_target,dist_path\n");
    for s in trace.samples() {
        let _ = writeln!(out, "{},{},{}", s.step, s.dist_to_target, s.dist_to_path);
    }
    out
}

pub fn summary_header() -> &'static str {
    "mode,pid,oscillatory,seed,completed,traversal_steps,mean_path_error,max_path_error,sawtooth_score,orbit_radius"
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn summary_row(
    mode: StimulusMode,
    pid: f64,
    oscillatory: bool,
    seed: u64,
    s: &RunSummary,
) -> String {
    format!(
        "{mode},{pid},{oscillatory},{seed},{},{},{},{},{},{}",
        s.completed,
        opt(s.traversal_steps),
        s.mean_path_error,
        s.max_path_error,
        s.sawtooth_score,
        opt(s.orbit_radius),
    )
}

pub fn summary_csv(rows: &[String]) -> String {
    let mut out = String::from(summary_header());
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}
