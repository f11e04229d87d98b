use std::path::PathBuf;
use std::process::{Command, Output};

use absgrid::bench::fig1c_reachability;
use absgrid::quadtree::GridMapping;
use absgrid::report::RunReport;

fn absgrid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_absgrid"))
        .args(args)
        .env_remove("ABSGRID_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fig1c_file(dir: &tempfile::TempDir) -> PathBuf {
    let p = dir.path().join("f.lp");
    std::fs::write(&p, fig1c_reachability().to_lp()).unwrap();
    p
}

const FIG1C_MAPPING: &str =
    "n=8 b=2; x=1..4 y=1..4; x=5..8 y=1..4; x=1..4 y=5..8; x=5..6 y=5..6; x=7 y=5; x=8 y=5; x=7 y=6; x=8 y=6; x=5 y=7; x=6 y=7; x=5 y=8; x=6 y=8; x=7..8 y=7..8";

#[test]
fn refine_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fig1c_file(&dir);
    let report = dir.path().join("out.json");
    let o = absgrid(&[
        "refine",
        "--problem",
        "R",
        "--instance",
        inst.to_str().unwrap(),
        "--strategy",
        "two-phase",
        "--seed",
        "7",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: RunReport = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r.outcome.status.to_string(), "abstract_unsat");
    assert_eq!(r.options.seed, 7);
    assert_eq!(r.options.strategy.name(), "two-phase");
    assert_eq!(r.options.debug_timeout_ms, 50_000);
    assert_eq!(r.options.abstract_answer_sets, 3);
    assert!(stdout(&o).contains("abstract_unsat"));
}

#[test]
fn cost_of_the_figure_mapping() {
    let o = absgrid(&["cost", "--mapping", FIG1C_MAPPING]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.1125");
    let o = absgrid(&["cost", "--mapping", FIG1C_MAPPING, "--cost-denominator", "per-level-count"]);
    assert!(o.status.success());
    assert_ne!(stdout(&o).trim(), "0.1125");
}

#[test]
fn render_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fig1c_file(&dir);
    for (flag, format) in [("ascii", absgrid::render::RenderFormat::Ascii), ("svg", absgrid::render::RenderFormat::Svg)] {
        let o = absgrid(&["render", "--problem", "r", "--instance", inst.to_str().unwrap(), "--mapping", FIG1C_MAPPING, "--render", flag]);
        assert!(o.status.success());
        let m: GridMapping = FIG1C_MAPPING.parse().unwrap();
        assert_eq!(stdout(&o), absgrid::render::render(&m, &fig1c_reachability(), format).unwrap());
    }
}

#[test]
fn solve_and_abstract() {
    let dir = tempfile::tempdir().unwrap();
    let prog = dir.path().join("p.lp");
    std::fs::write(&prog, "{a}. b :- not a.\n").unwrap();
    let o = absgrid(&["solve", "-n", "0", prog.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("Answer: 2") && out.contains("SATISFIABLE"), "{out}");
    let inst = fig1c_file(&dir);
    let o = absgrid(&["abstract", "--problem", "r", "--instance", inst.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("isCluster"), "{text}");
    absgrid::syntax::parse_program(&text).unwrap();
}

#[test]
fn generated_instances_follow_the_seed_variable() {
    let run = |seed: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_absgrid"));
        c.args(["refine", "--problem", "reachability", "--n", "8", "--certify"]).args(extra);
        match seed {
            Some(s) => c.env("ABSGRID_SEED", s),
            None => c.env_remove("ABSGRID_SEED"),
        };
        let o = c.output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    let mapping = |out: &str| out.lines().find(|l| l.starts_with("final mapping")).unwrap().to_string();
    let env_seed = run(Some("3"), &[]);
    assert!(env_seed.starts_with("reachability 3 "), "{env_seed}");
    assert_eq!(mapping(&env_seed), mapping(&run(None, &["--seed", "3"])));
    assert!(run(Some("3"), &["--seed", "4"]).starts_with("reachability 4 "));
}

#[test]
fn bench_prints_an_aggregate_table() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("bench.json");
    let o = absgrid(&[
        "bench",
        "--problems",
        "r",
        "--instances",
        "2",
        "--certify",
        "--strategies",
        "default,grid-inc",
        "--emit",
        dir.path().to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    assert!(table.lines().next().unwrap().contains("mean_steps"));
    assert_eq!(table.lines().count(), 3, "{table}");
    let bench: absgrid::report::BenchReport = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(bench.runs.len(), 4);
    assert!(dir.path().join("reachability_n8_s1.lp").exists());
}

#[test]
fn errors_and_timeouts_have_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lp");
    std::fs::write(&bad, "p(X :- q.").unwrap();
    let o = absgrid(&["solve", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = absgrid(&["cost", "--mapping", "n=8 b=2; x=1..3 y=1..4"]);
    assert_eq!(o.status.code(), Some(1));
    let inst = fig1c_file(&dir);
    let o = absgrid(&["refine", "--problem", "r", "--instance", inst.to_str().unwrap(), "--timeout-ms", "0"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}
