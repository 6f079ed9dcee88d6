//! Parameter sweeps over oscillatory flag × stimulus mode × pID × seed.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::export::{summary_csv, summary_row};
use super::{create_dir, execute, write_file, RunConfig, RunError};
use crate::arena::{load_arena, Arena, PathSpec};
use crate::guidance::StimulusMode;
use crate::metrics::RunSummary;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub pids: Vec<f64>,
    pub modes: Vec<StimulusMode>,
    /// Runs per grid cell; seeds are `base.seed, base.seed + 1, ...`.
    pub seeds: u32,
    pub oscillatory: Vec<bool>,
}

impl SweepConfig {
    pub fn new(base: RunConfig) -> Self {
        Self {
            base,
            pids: vec![0.001, 0.005, 0.01, 0.05],
            modes: vec![StimulusMode::Attract, StimulusMode::Repel],
            seeds: 5,
            oscillatory: vec![true],
        }
    }

    fn jobs(&self) -> Vec<(bool, StimulusMode, f64, u64)> {
        let mut jobs = Vec::new();
        for &osc in &self.oscillatory {
            for &mode in &self.modes {
                for &pid in &self.pids {
                    for k in 0..u64::from(self.seeds) {
                        jobs.push((osc, mode, pid, self.base.seed.wrapping_add(k)));
                    }
                }
            }
        }
        jobs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub mode: StimulusMode,
    pub pid: f64,
    pub oscillatory: bool,
    pub seed: u64,
    pub result: Result<RunSummary, String>,
}

/// Per-cell statistics. Traversal statistics cover completed runs only; path
/// error covers every run that produced a summary. Standard deviations are
/// sample deviations (zero for fewer than two values).
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub mode: StimulusMode,
    pub pid: f64,
    pub oscillatory: bool,
    pub runs: usize,
    pub completed: usize,
    pub traversal_mean: Option<f64>,
    pub traversal_sd: Option<f64>,
    pub path_error_mean: Option<f64>,
    pub path_error_sd: Option<f64>,
}

fn mean_sd(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    (Some(mean), Some(sd))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<Aggregate>,
}

impl SweepTable {
    fn from_rows(rows: Vec<SweepRow>) -> Self {
        let mut aggregates: Vec<Aggregate> = Vec::new();
        let mut start = 0;
        while start < rows.len() {
            let key = (rows[start].oscillatory, rows[start].mode, rows[start].pid);
            let end = start
                + rows[start..]
                    .iter()
                    .take_while(|r| (r.oscillatory, r.mode, r.pid) == key)
                    .count();
            let cell = &rows[start..end];
            let ok: Vec<&RunSummary> = cell.iter().filter_map(|r| r.result.as_ref().ok()).collect();
            let traversal: Vec<f64> = ok
                .iter()
                .filter_map(|s| s.traversal_steps)
                .map(|t| t as f64)
                .collect();
            let errors: Vec<f64> = ok.iter().map(|s| s.mean_path_error).collect();
            let (traversal_mean, traversal_sd) = mean_sd(&traversal);
            let (path_error_mean, path_error_sd) = mean_sd(&errors);
            aggregates.push(Aggregate {
                mode: key.1,
                pid: key.2,
                oscillatory: key.0,
                runs: cell.len(),
                completed: traversal.len(),
                traversal_mean,
                traversal_sd,
                path_error_mean,
                path_error_sd,
            });
            start = end;
        }
        Self { rows, aggregates }
    }

    pub fn aggregate(&self, mode: StimulusMode, pid: f64, oscillatory: bool) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.mode == mode && a.pid == pid && a.oscillatory == oscillatory)
    }

    /// One summary row per run. Failed runs appear with `completed=false` and
    /// empty metrics; their messages are in [`Self::failures_csv`].
    pub fn runs_csv(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| match &r.result {
                Ok(s) => summary_row(r.mode, r.pid, r.oscillatory, r.seed, s),
                Err(_) => format!(
                    "{},{},{},{},false,,,,,",
                    r.mode, r.pid, r.oscillatory, r.seed
                ),
            })
            .collect();
        summary_csv(&rows)
    }

    pub fn aggregates_csv(&self) -> String {
        let mut out = String::from(
            "mode,pid,oscillatory,runs,completed_runs,traversal_mean,traversal_sd,path_error_mean,path_error_sd\n",
        );
        let f = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for a in &self.aggregates {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                a.mode,
                a.pid,
                a.oscillatory,
                a.runs,
                a.completed,
                f(a.traversal_mean),
                f(a.traversal_sd),
                f(a.path_error_mean),
                f(a.path_error_sd)
            );
        }
        out
    }

    pub fn failures_csv(&self) -> String {
        let mut out = String::from("mode,pid,oscillatory,seed,error\n");
        for r in &self.rows {
            if let Err(e) = &r.result {
                let _ = writeln!(
                    out,
                    "{},{},{},{},\"{}\"",
                    r.mode,
                    r.pid,
                    r.oscillatory,
                    r.seed,
                    e.replace('"', "\"\"")
                );
            }
        }
        out
    }
}

/// Runs the whole grid on an already loaded arena. Runs execute in parallel;
/// rows come back in grid order.
pub fn sweep_loaded(arena: &Arena, path: &PathSpec, config: &SweepConfig) -> SweepTable {
    let rows = config
        .jobs()
        .into_par_iter()
        .map(|(oscillatory, mode, pid, seed)| {
            let mut run = config.base.clone();
            run.swarm.oscillatory = oscillatory;
            run.swarm.p_reset = pid;
            run.guidance.mode = mode;
            run.seed = seed;
            run.frame_every = 0;
            let result = execute(arena, path, &run, |_, _| Ok(()))
                .map(|o| o.summary)
                .map_err(|e| e.to_string());
            SweepRow {
                mode,
                pid,
                oscillatory,
                seed,
                result,
            }
        })
        .collect();
    SweepTable::from_rows(rows)
}

/// Loads the arena named in the base config, runs the grid and writes
/// `runs.csv`, `aggregates.csv` and (if any run failed) `failures.csv`.
pub fn sweep(config: &SweepConfig) -> Result<SweepTable, RunError> {
    let (arena, path) = load_arena(&config.base.arena)?;
    let table = sweep_loaded(&arena, &path, config);
    if let Some(dir) = &config.base.out_dir {
        create_dir(dir)?;
        write_file(&dir.join("runs.csv"), table.runs_csv().as_bytes())?;
        write_file(
            &dir.join("aggregates.csv"),
            table.aggregates_csv().as_bytes(),
        )?;
        if table.rows.iter().any(|r| r.result.is_err()) {
            write_file(&dir.join("failures.csv"), table.failures_csv().as_bytes())?;
        }
    }
    Ok(table)
}
