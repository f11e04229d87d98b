use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use absgrid::bench::{generate_instance, InstanceSpec, Problem, PROBLEMS};
use absgrid::cegar::{run_loop, CegarOptions, CegarTask, Status, Strategy, StrategyKind};
use absgrid::ground::{ground_with, GroundMode};
use absgrid::quadtree::{CostDenominator, GridMapping};
use absgrid::render::{render, RenderFormat};
use absgrid::report::{aggregate, format_table, BenchReport, BenchRun, RunReport, REPORT_VERSION};
use absgrid::solver::{enumerate_answer_sets, SearchStatus, SolveBudget};
use absgrid::syntax::parse_program;
use absgrid::{abstraction, Error, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

/// Exit code when the global timeout ends a run.
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "absgrid", version, about = "Domain abstraction and quad-tree refinement for grid ASP problems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate answer sets of a program.
    Solve(SolveArgs),
    /// Print the abstract program of an instance under a grid mapping.
    Abstract(AbstractArgs),
    /// Run abstraction refinement on an unsatisfiable instance.
    Refine(RefineArgs),
    /// Cost of a grid mapping.
    Cost(CostArgs),
    /// Draw a grid mapping over an instance.
    Render(RenderArgs),
    /// Run every strategy over generated instances and aggregate.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, ignore_case = true)]
    problem: Problem,
    /// Instance facts file written by `bench --emit`; generated from
    /// `--n` and `--seed` when absent.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    n: u32,
    #[arg(long, env = "ABSGRID_SEED", default_value_t = 0)]
    seed: u64,
    /// Generate only instances a brute-force oracle proves unsatisfiable.
    #[arg(long)]
    certify: bool,
}

impl InstanceArgs {
    fn load(&self) -> Result<InstanceSpec> {
        let spec = match &self.instance {
            Some(path) => InstanceSpec::from_lp(&std::fs::read_to_string(path)?)?,
            None => generate_instance(self.problem, self.n, self.seed, self.certify)?,
        };
        if spec.problem != self.problem {
            return Err(Error::Invalid(format!(
                "instance is a {} instance, not {}",
                spec.problem, self.problem
            )));
        }
        Ok(spec)
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Program files, read as one program.
    files: Vec<PathBuf>,
    /// Solve a benchmark instance instead of files.
    #[arg(long, ignore_case = true, requires = "instance")]
    problem: Option<Problem>,
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Answer sets to print; 0 prints all.
    #[arg(short = 'n', long, default_value_t = 1)]
    models: usize,
    #[arg(long)]
    timeout_ms: Option<u64>,
}

#[derive(Args)]
struct AbstractArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    /// Grid mapping text; the initial mapping when absent.
    #[arg(long)]
    mapping: Option<String>,
    #[arg(long)]
    tighten: bool,
}

#[derive(Args)]
struct LoopArgs {
    #[arg(long, value_enum, default_value_t = StrategyKind::Default)]
    strategy: StrategyKind,
    #[arg(long, default_value_t = 3)]
    abstract_answer_sets: usize,
    #[arg(long, default_value_t = 50_000)]
    debug_timeout_ms: u64,
    #[arg(long)]
    tighten: bool,
    #[arg(long, value_enum, default_value_t = CostDenominator::Literal)]
    cost_denominator: CostDenominator,
    /// Stop the whole run after this long.
    #[arg(long)]
    timeout_ms: Option<u64>,
}

impl LoopArgs {
    fn options(&self, kind: StrategyKind, seed: u64) -> CegarOptions {
        CegarOptions {
            strategy: Strategy {
                kind,
                debug_timeout: Duration::from_millis(self.debug_timeout_ms),
            },
            abstract_answer_sets: self.abstract_answer_sets,
            tighten: self.tighten,
            cost_denominator: self.cost_denominator,
            seed,
            global_timeout: self.timeout_ms.map(Duration::from_millis),
        }
    }
}

#[derive(Args)]
struct RefineArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[command(flatten)]
    run: LoopArgs,
    /// Starting grid mapping; the initial four-region mapping when absent.
    #[arg(long)]
    mapping: Option<String>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Draw the final mapping to stdout.
    #[arg(long, value_enum)]
    render: Option<RenderFormat>,
}

#[derive(Args)]
struct CostArgs {
    #[arg(long)]
    mapping: String,
    #[arg(long, value_enum, default_value_t = CostDenominator::Literal)]
    cost_denominator: CostDenominator,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long)]
    mapping: Option<String>,
    #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
    render: RenderFormat,
    /// Write to a file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Problems to run; all five when absent.
    #[arg(long, value_delimiter = ',', ignore_case = true)]
    problems: Vec<Problem>,
    /// Grid side for reachability and the planning problems.
    #[arg(long, default_value_t = 8)]
    n: u32,
    /// Grid side for sudoku and the knight's tour.
    #[arg(long, default_value_t = 4)]
    small_n: u32,
    /// Instances per problem, seeds `seed..seed+instances`.
    #[arg(long, default_value_t = 10)]
    instances: u64,
    #[arg(long, env = "ABSGRID_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Strategies to compare; all four when absent.
    #[arg(long, value_delimiter = ',', value_enum)]
    strategies: Vec<StrategyKind>,
    #[arg(long)]
    certify: bool,
    #[command(flatten)]
    run: LoopArgs,
    /// Write the generated instance files into this directory.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// JSON file with every run and the aggregate rows.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn parse_mapping(text: Option<&str>, task: &CegarTask) -> Result<GridMapping> {
    match text {
        Some(t) => {
            let m: GridMapping = t.parse()?;
            if m.n() != task.n {
                return Err(Error::Grid(format!("mapping is for n={}, instance has n={}", m.n(), task.n)));
            }
            Ok(m)
        }
        None => task.initial_mapping(),
    }
}

fn solve(a: &SolveArgs) -> Result<ExitCode> {
    let program = match (&a.problem, &a.instance) {
        (Some(problem), Some(path)) => problem.program_from_text(&std::fs::read_to_string(path)?)?,
        _ => {
            if a.files.is_empty() {
                return Err(Error::Invalid("give program files or --problem with --instance".into()));
            }
            let mut text = String::new();
            for f in &a.files {
                text.push_str(&std::fs::read_to_string(f)?);
                text.push('\n');
            }
            parse_program(&text)?
        }
    };
    let g = ground_with(&program, GroundMode::Pruned)?;
    let mut budget = if a.models == 0 {
        SolveBudget::unlimited()
    } else {
        SolveBudget::models(a.models)
    };
    if let Some(ms) = a.timeout_ms {
        budget = budget.with_timeout(Duration::from_millis(ms));
    }
    let e = enumerate_answer_sets(&g, &budget);
    for (k, m) in e.models.iter().enumerate() {
        println!("Answer: {}", k + 1);
        println!("{}", m.display(&g));
    }
    match (e.models.is_empty(), e.status) {
        (_, SearchStatus::TimedOut) => {
            println!("UNKNOWN");
            Ok(ExitCode::from(EXIT_TIMEOUT))
        }
        (true, _) => {
            println!("UNSATISFIABLE");
            Ok(ExitCode::SUCCESS)
        }
        (false, _) => {
            println!("SATISFIABLE");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn abstract_cmd(a: &AbstractArgs) -> Result<ExitCode> {
    let spec = a.inst.load()?;
    let task = CegarTask::from_instance(&spec)?;
    let grid = parse_mapping(a.mapping.as_deref(), &task)?;
    let m = task.axes.mapping(&grid)?;
    let ap = abstraction::abstract_program(&task.program, &m, abstraction::AbstractOptions { tighten: a.tighten })?;
    println!("% mapping: {grid}");
    print!("{}", ap.program);
    Ok(ExitCode::SUCCESS)
}

fn refine(a: &RefineArgs) -> Result<ExitCode> {
    let spec = a.inst.load()?;
    let task = CegarTask::from_instance(&spec)?;
    let m0 = parse_mapping(a.mapping.as_deref(), &task)?;
    let opts = a.run.options(a.run.strategy, a.inst.seed);
    let out = run_loop(&task, m0.clone(), &opts)?;
    println!(
        "{} {} n={} strategy={}: {} after {} steps, cost {:.4}, {} ms",
        spec.problem,
        spec.seed,
        spec.n,
        opts.strategy.kind,
        out.status,
        out.steps,
        out.cost,
        out.elapsed.as_millis()
    );
    println!("final mapping: {}", out.final_mapping);
    if let Some(path) = &a.report {
        RunReport::new(&spec, a.inst.instance.as_deref(), &opts, &m0, &out).write(path)?;
    }
    if let Some(format) = a.render {
        print!("{}", render(&out.final_mapping, &spec, format)?);
    }
    if out.status == Status::Unknown && opts.global_timeout.is_some() {
        return Ok(ExitCode::from(EXIT_TIMEOUT));
    }
    Ok(ExitCode::SUCCESS)
}

fn cost(a: &CostArgs) -> Result<ExitCode> {
    let m: GridMapping = a.mapping.parse()?;
    println!("{}", m.cost(a.cost_denominator));
    Ok(ExitCode::SUCCESS)
}

fn render_cmd(a: &RenderArgs) -> Result<ExitCode> {
    let spec = a.inst.load()?;
    let task = CegarTask::from_instance(&spec)?;
    let grid = parse_mapping(a.mapping.as_deref(), &task)?;
    let text = render(&grid, &spec, a.render)?;
    match &a.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn emit(dir: &Path, spec: &InstanceSpec) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let name = format!("{}_n{}_s{}.lp", spec.problem, spec.n, spec.seed);
    std::fs::write(dir.join(name), spec.to_lp())?;
    Ok(())
}

fn bench(a: &BenchArgs) -> Result<ExitCode> {
    let problems = if a.problems.is_empty() { PROBLEMS.to_vec() } else { a.problems.clone() };
    let strategies = if a.strategies.is_empty() {
        StrategyKind::ALL.to_vec()
    } else {
        a.strategies.clone()
    };
    let mut specs = Vec::new();
    for &p in &problems {
        let n = match p {
            Problem::Sudoku | Problem::KnightsTour => a.small_n,
            _ => a.n,
        };
        for seed in a.seed..a.seed + a.instances {
            let spec = generate_instance(p, n, seed, a.certify)?;
            if let Some(dir) = &a.emit {
                emit(dir, &spec)?;
            }
            specs.push(spec);
        }
    }
    let jobs: Vec<(&InstanceSpec, StrategyKind, usize)> = specs
        .iter()
        .flat_map(|s| strategies.iter().flat_map(move |&k| (0..a.repeats).map(move |r| (s, k, r))))
        .collect();
    let started = Instant::now();
    let runs: Vec<BenchRun> = jobs
        .par_iter()
        .map(|&(spec, kind, repeat)| {
            let task = CegarTask::from_instance(spec)?;
            let out = run_loop(&task, task.initial_mapping()?, &a.run.options(kind, spec.seed))?;
            eprintln!("{} seed {} {}: {} in {} steps", spec.problem, spec.seed, kind, out.status, out.steps);
            Ok(BenchRun {
                problem: spec.problem.to_string(),
                n: spec.n,
                seed: spec.seed,
                strategy: kind,
                repeat,
                status: out.status,
                steps: out.steps,
                cost: out.cost,
                wall_ms: out.elapsed.as_millis() as u64,
            })
        })
        .collect::<Result<_>>()?;
    let rows = aggregate(&runs);
    print!("{}", format_table(&rows));
    eprintln!("{} runs in {:.1} s", runs.len(), started.elapsed().as_secs_f64());
    if let Some(path) = &a.report {
        let report = BenchReport {
            version: REPORT_VERSION,
            runs,
            rows,
        };
        std::fs::write(path, serde_json::to_string_pretty(&report).expect("reports serialize") + "\n")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Solve(a) => solve(a),
        Cmd::Abstract(a) => abstract_cmd(a),
        Cmd::Refine(a) => refine(a),
        Cmd::Cost(a) => cost(a),
        Cmd::Render(a) => render_cmd(a),
        Cmd::Bench(a) => bench(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
