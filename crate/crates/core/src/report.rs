//! JSON run reports and the bench aggregate table.
//!
//! The shape of [`RunReport`] is described by `schema/run_report.schema.json`
//! next to the crate manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bench::InstanceSpec;
use crate::cegar::{CegarOptions, CegarOutcome, Status, StepRecord, StrategyKind};
use crate::quadtree::{CostDenominator, GridMapping};
use crate::Result;

pub const REPORT_VERSION: u32 = 1;

/// The shipped schema, for validators that do not read the file.
pub const RUN_REPORT_SCHEMA: &str = include_str!("../schema/run_report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionsReport {
    pub strategy: StrategyKind,
    pub abstract_answer_sets: usize,
    pub debug_timeout_ms: u64,
    pub tighten: bool,
    pub cost_denominator: CostDenominator,
    pub seed: u64,
    pub global_timeout_ms: Option<u64>,
}

impl From<&CegarOptions> for OptionsReport {
    fn from(o: &CegarOptions) -> Self {
        OptionsReport {
            strategy: o.strategy.kind,
            abstract_answer_sets: o.abstract_answer_sets,
            debug_timeout_ms: o.strategy.debug_timeout.as_millis() as u64,
            tighten: o.tighten,
            cost_denominator: o.cost_denominator,
            seed: o.seed,
            global_timeout_ms: o.global_timeout.map(|t| t.as_millis() as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeReport {
    pub status: Status,
    pub steps: usize,
    pub cost: f64,
    pub final_mapping: GridMapping,
    /// Concrete answer set atoms when one was found.
    pub witness: Option<Vec<String>>,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: u32,
    /// Path of the instance file, if the instance came from one.
    pub instance_path: Option<String>,
    pub instance: InstanceSpec,
    pub options: OptionsReport,
    pub initial_mapping: GridMapping,
    pub step_log: Vec<StepRecord>,
    pub outcome: OutcomeReport,
}

impl RunReport {
    pub fn new(
        instance: &InstanceSpec,
        instance_path: Option<&Path>,
        opts: &CegarOptions,
        m0: &GridMapping,
        out: &CegarOutcome,
    ) -> Self {
        RunReport {
            version: REPORT_VERSION,
            instance_path: instance_path.map(|p| p.display().to_string()),
            instance: instance.clone(),
            options: opts.into(),
            initial_mapping: m0.clone(),
            step_log: out.step_log.clone(),
            outcome: OutcomeReport {
                status: out.status,
                steps: out.steps,
                cost: out.cost,
                final_mapping: out.final_mapping.clone(),
                witness: out
                    .witness
                    .as_ref()
                    .map(|w| w.iter().map(|a| a.to_atom().to_string()).collect()),
                wall_ms: out.elapsed.as_millis() as u64,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Invalid(format!("run report: {e}")))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// One run of the bench harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub problem: String,
    pub n: u32,
    pub seed: u64,
    pub strategy: StrategyKind,
    pub repeat: usize,
    pub status: Status,
    pub steps: usize,
    pub cost: f64,
    pub wall_ms: u64,
}

/// Mean and minimum over the runs of one problem and strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub problem: String,
    pub strategy: StrategyKind,
    pub runs: usize,
    pub unsat: usize,
    pub mean_steps: f64,
    pub min_steps: usize,
    pub mean_cost: f64,
    pub min_cost: f64,
    pub mean_ms: f64,
}

pub fn aggregate(runs: &[BenchRun]) -> Vec<BenchRow> {
    let mut groups: BTreeMap<(String, StrategyKind), Vec<&BenchRun>> = BTreeMap::new();
    for r in runs {
        groups.entry((r.problem.clone(), r.strategy)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((problem, strategy), rs)| {
            let k = rs.len() as f64;
            BenchRow {
                problem,
                strategy,
                runs: rs.len(),
                unsat: rs.iter().filter(|r| r.status == Status::AbstractUnsat).count(),
                mean_steps: rs.iter().map(|r| r.steps as f64).sum::<f64>() / k,
                min_steps: rs.iter().map(|r| r.steps).min().unwrap_or(0),
                mean_cost: rs.iter().map(|r| r.cost).sum::<f64>() / k,
                min_cost: rs.iter().map(|r| r.cost).fold(f64::INFINITY, f64::min),
                mean_ms: rs.iter().map(|r| r.wall_ms as f64).sum::<f64>() / k,
            }
        })
        .collect()
}

/// Fixed-width text table of aggregate rows.
pub fn format_table(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<14} {:<10} {:>5} {:>6} {:>10} {:>9} {:>10} {:>9} {:>10}",
        "problem", "strategy", "runs", "unsat", "mean_steps", "min_steps", "mean_cost", "min_cost", "mean_ms"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<14} {:<10} {:>5} {:>6} {:>10.2} {:>9} {:>10.4} {:>9.4} {:>10.1}",
            r.problem,
            r.strategy.name(),
            r.runs,
            r.unsat,
            r.mean_steps,
            r.min_steps,
            r.mean_cost,
            r.min_cost,
            r.mean_ms
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub version: u32,
    pub runs: Vec<BenchRun>,
    pub rows: Vec<BenchRow>,
}
