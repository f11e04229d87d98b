//! Abstraction refinement over quad-tree mappings.
//!
//! Each iteration abstracts the program under the current mapping, takes a
//! few abstract answer sets and checks whether any of them is the image of
//! a real answer set. Spurious ones are debugged; the violated constraints
//! point at abstract regions, and the best scoring region is split.

mod check;
mod debug;
mod query;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abstraction::{abstract_program, AbstractOptions};
use crate::bench::{GridAxes, InstanceSpec, Problem};
use crate::ground::{ground_with, GroundAtom, GroundMode, GroundProgram};
use crate::quadtree::{CostDenominator, GridMapping, Region};
use crate::solver::{enumerate_answer_sets, is_answer_set, Interpretation, SearchStatus, SolveBudget};
use crate::syntax::{Constant, Program};
use crate::{Error, Result};

pub use check::{check_concreteness, derive_hints, CheckContext};
pub use debug::{build_debug_program, diagnose, DebugProgram, Diagnosis, Relax};
pub use query::{build_spuriousness_query, QueryKind, QueryRule};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[value(rename_all = "kebab-case")]
pub enum StrategyKind {
    #[default]
    Default,
    /// A cheap debug pass over query constraints first, then a focused one.
    TwoPhase,
    /// Check prefixes of the time horizon.
    TimeInc,
    /// Check region by region, most suspicious first.
    GridInc,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::Default,
        StrategyKind::TwoPhase,
        StrategyKind::TimeInc,
        StrategyKind::GridInc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Default => "default",
            StrategyKind::TwoPhase => "two-phase",
            StrategyKind::TimeInc => "time-inc",
            StrategyKind::GridInc => "grid-inc",
        }
    }
}

impl std::fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub kind: StrategyKind,
    /// Budget of every single solver call inside a check.
    pub debug_timeout: Duration,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            kind: StrategyKind::Default,
            debug_timeout: Duration::from_millis(50_000),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Concrete,
    Spurious,
    /// A solver call ran out of time.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefineHint {
    pub element: Vec<Constant>,
    pub region: Region,
    pub weight: usize,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub verdict: Verdict,
    /// An answer set of the concrete program mapping onto the checked one.
    pub witness: Option<Interpretation>,
    pub hints: Vec<RefineHint>,
    /// Number of violated constraints in the best debug model.
    pub debug_optimum: Option<usize>,
    /// Incremental stages solved, 1 without staging.
    pub stages: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CegarOptions {
    pub strategy: Strategy,
    /// Abstract answer sets checked per iteration.
    pub abstract_answer_sets: usize,
    pub tighten: bool,
    pub cost_denominator: CostDenominator,
    /// Recorded in reports; the search itself is deterministic.
    pub seed: u64,
    pub global_timeout: Option<Duration>,
}

impl Default for CegarOptions {
    fn default() -> Self {
        CegarOptions {
            strategy: Strategy::default(),
            abstract_answer_sets: 3,
            tighten: false,
            cost_denominator: CostDenominator::Literal,
            seed: 0,
            global_timeout: None,
        }
    }
}

/// A program over an n x n grid.
#[derive(Debug, Clone)]
pub struct CegarTask {
    pub program: Program,
    pub axes: GridAxes,
    pub time_sort: Option<String>,
    pub n: u32,
    pub branching: u32,
}

impl CegarTask {
    pub fn new(problem: Problem, program: Program, n: u32) -> Self {
        CegarTask {
            program,
            axes: problem.axes(),
            time_sort: problem.time_sort().map(str::to_string),
            n,
            branching: problem.branching(n),
        }
    }

    pub fn from_instance(spec: &InstanceSpec) -> Result<Self> {
        Ok(Self::new(spec.problem, spec.problem.program(spec)?, spec.n))
    }

    /// The four-region (or nine-region) starting mapping.
    pub fn initial_mapping(&self) -> Result<GridMapping> {
        GridMapping::initial(self.n, self.branching)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// A concrete answer set was found.
    Concrete,
    /// The abstract program has no answer set, so neither has the program.
    AbstractUnsat,
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Concrete => "concrete",
            Status::AbstractUnsat => "abstract_unsat",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub mapping: String,
    pub cost: f64,
    pub abstract_rules: usize,
    pub abstract_answer_sets: usize,
    pub verdicts: Vec<Verdict>,
    pub debug_optima: Vec<Option<usize>>,
    pub hints: Vec<RefineHint>,
    pub refined: Option<Region>,
    pub abstract_ms: u128,
    pub check_ms: u128,
}

#[derive(Debug, Clone)]
pub struct CegarOutcome {
    pub status: Status,
    pub final_mapping: GridMapping,
    /// Concrete answer set, as atoms of the concrete program.
    pub witness: Option<Vec<GroundAtom>>,
    /// Refinement steps taken.
    pub steps: usize,
    pub cost: f64,
    pub step_log: Vec<StepRecord>,
    pub elapsed: Duration,
}

/// Picks the leaf to split: the one with the largest total hint weight per
/// cell, ties broken top-left. Without usable hints the largest leaf is
/// split.
pub fn decide_refinement(m: &GridMapping, hint_sets: &[Vec<RefineHint>]) -> Result<Region> {
    if m.is_identity() {
        return Err(Error::Grid("the mapping is already the identity".into()));
    }
    let mut weight: BTreeMap<Region, usize> = BTreeMap::new();
    for h in hint_sets.iter().flatten() {
        if h.region.side() > 1 {
            *weight.entry(h.region).or_default() += h.weight;
        }
    }
    let best = weight.into_iter().max_by(|(ra, wa), (rb, wb)| {
        // compare wa/|a| with wb/|b| exactly
        let lhs = *wa as u64 * u64::from(rb.size());
        let rhs = *wb as u64 * u64::from(ra.size());
        lhs.cmp(&rhs).then(rb.top_left_key().cmp(&ra.top_left_key()))
    });
    match best {
        Some((r, _)) => Ok(r),
        None => m
            .largest_leaf()
            .ok_or_else(|| Error::Grid("no leaf to split".into())),
    }
}

fn ms(d: Duration) -> u128 {
    d.as_millis()
}

/// Runs abstraction refinement from `m0` until an abstract program has no
/// answer set, a concrete answer set turns up, or the global timeout hits.
pub fn run_loop(task: &CegarTask, m0: GridMapping, opts: &CegarOptions) -> Result<CegarOutcome> {
    let started = Instant::now();
    if m0.n() != task.n {
        return Err(Error::Grid(format!("mapping is for n={}, grid has n={}", m0.n(), task.n)));
    }
    let concrete = ground_with(&task.program, GroundMode::Pruned)?;
    let mut grid = m0;
    let mut log: Vec<StepRecord> = Vec::new();
    let mut prior: BTreeMap<Region, usize> = BTreeMap::new();
    let outcome = |status, grid: GridMapping, witness, log: Vec<StepRecord>| CegarOutcome {
        status,
        cost: grid.cost(opts.cost_denominator),
        steps: log.iter().filter(|s| s.refined.is_some()).count(),
        final_mapping: grid,
        witness,
        step_log: log,
        elapsed: started.elapsed(),
    };
    loop {
        let t0 = Instant::now();
        let m = task.axes.mapping(&grid)?;
        let ap = abstract_program(&task.program, &m, AbstractOptions { tighten: opts.tighten })?;
        let ag = ground_with(&ap.program, GroundMode::Pruned)?;
        let mut budget = SolveBudget::models(opts.abstract_answer_sets.max(1));
        if let Some(t) = remaining(opts, started) {
            budget = budget.with_timeout(t);
        }
        let e = enumerate_answer_sets(&ag, &budget);
        let abstract_ms = ms(t0.elapsed());
        let mut record = StepRecord {
            step: log.len(),
            mapping: grid.to_string(),
            cost: grid.cost(opts.cost_denominator),
            abstract_rules: ap.program.rules.len(),
            abstract_answer_sets: e.models.len(),
            verdicts: Vec::new(),
            debug_optima: Vec::new(),
            hints: Vec::new(),
            refined: None,
            abstract_ms,
            check_ms: 0,
        };
        if e.models.is_empty() {
            let status = if e.status == SearchStatus::TimedOut {
                Status::Unknown
            } else {
                Status::AbstractUnsat
            };
            log.push(record);
            return Ok(outcome(status, grid, None, log));
        }
        let models: Vec<BTreeSet<GroundAtom>> = e
            .models
            .iter()
            .map(|i| i.true_atoms.iter().map(|&a| ag.atoms.atom(a).clone()).collect())
            .collect();
        let strategy = Strategy {
            debug_timeout: match remaining(opts, started) {
                Some(r) => r.min(opts.strategy.debug_timeout),
                None => opts.strategy.debug_timeout,
            },
            ..opts.strategy.clone()
        };
        let ctx = CheckContext {
            program: &task.program,
            ground: &concrete,
            grid: &grid,
            mapping: &m,
            abstraction: &ap,
            abstract_ground: &ag,
            axes: &task.axes,
            time_sort: task.time_sort.as_deref(),
            strategy: &strategy,
            prior: &prior,
        };
        let t1 = Instant::now();
        let results: Vec<CheckResult> = models
            .par_iter()
            .map(|i| check_concreteness(&ctx, i))
            .collect::<Result<_>>()?;
        record.check_ms = ms(t1.elapsed());
        record.verdicts = results.iter().map(|r| r.verdict).collect();
        record.debug_optima = results.iter().map(|r| r.debug_optimum).collect();
        if let Some(w) = results.iter().find_map(|r| r.witness.as_ref()) {
            if !is_answer_set(&concrete, w) {
                return Err(Error::Invalid("witness failed verification".into()));
            }
            let atoms = w.atoms(&concrete).into_iter().cloned().collect();
            log.push(record);
            return Ok(outcome(Status::Concrete, grid, Some(atoms), log));
        }
        let hint_sets: Vec<Vec<RefineHint>> = results.into_iter().map(|r| r.hints).collect();
        let region = decide_refinement(&grid, &hint_sets)?;
        prior.clear();
        for h in hint_sets.iter().flatten() {
            *prior.entry(h.region).or_default() += h.weight;
        }
        record.hints = merge_hints(&hint_sets);
        record.refined = Some(region);
        log.push(record);
        grid = grid.split(&region)?;
        // children inherit their parent's weight for the next ordering
        let inherited: Vec<(Region, usize)> = prior
            .iter()
            .filter(|(r, _)| **r == region)
            .flat_map(|(_, &w)| grid.leaves().iter().filter(|l| region.contains_region(l)).map(move |l| (*l, w)))
            .collect();
        prior.extend(inherited);
        if remaining(opts, started).is_some_and(|r| r.is_zero()) {
            return Ok(outcome(Status::Unknown, grid, None, log));
        }
    }
}

fn remaining(opts: &CegarOptions, started: Instant) -> Option<Duration> {
    opts.global_timeout.map(|t| t.saturating_sub(started.elapsed()))
}

/// Hints of several checks summed per element, heaviest first.
fn merge_hints(sets: &[Vec<RefineHint>]) -> Vec<RefineHint> {
    let mut acc: BTreeMap<(Region, Vec<Constant>), usize> = BTreeMap::new();
    for h in sets.iter().flatten() {
        *acc.entry((h.region, h.element.clone())).or_default() += h.weight;
    }
    let mut out: Vec<RefineHint> = acc
        .into_iter()
        .map(|((region, element), weight)| RefineHint { element, region, weight })
        .collect();
    out.sort_by_key(|h| (std::cmp::Reverse(h.weight), h.region.top_left_key()));
    out
}

/// Grounds `task` and checks one abstract answer set; a convenience for
/// callers outside the loop.
pub fn check_once(
    task: &CegarTask,
    grid: &GridMapping,
    abstract_model: &BTreeSet<GroundAtom>,
    strategy: &Strategy,
    tighten: bool,
) -> Result<CheckResult> {
    let concrete: GroundProgram = ground_with(&task.program, GroundMode::Pruned)?;
    let m = task.axes.mapping(grid)?;
    let ap = abstract_program(&task.program, &m, AbstractOptions { tighten })?;
    let ag = ground_with(&ap.program, GroundMode::Pruned)?;
    let prior = BTreeMap::new();
    let ctx = CheckContext {
        program: &task.program,
        ground: &concrete,
        grid,
        mapping: &m,
        abstraction: &ap,
        abstract_ground: &ag,
        axes: &task.axes,
        time_sort: task.time_sort.as_deref(),
        strategy,
        prior: &prior,
    };
    check_concreteness(&ctx, abstract_model)
}
