use absgrid::bench::fig1c_reachability;
use absgrid::cegar::{run_loop, CegarOptions, CegarTask, Status, StrategyKind};
use absgrid::quadtree::GridMapping;
use absgrid::report::{aggregate, BenchRun, RunReport, RUN_REPORT_SCHEMA};

fn fig1c_report(kind: StrategyKind) -> RunReport {
    let spec = fig1c_reachability();
    let task = CegarTask::from_instance(&spec).unwrap();
    let mut opts = CegarOptions::default();
    opts.strategy.kind = kind;
    opts.seed = 7;
    let m0 = task.initial_mapping().unwrap();
    let out = run_loop(&task, m0.clone(), &opts).unwrap();
    RunReport::new(&spec, None, &opts, &m0, &out)
}

#[test]
fn reports_match_the_shipped_schema() {
    let schema: serde_json::Value = serde_json::from_str(RUN_REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for kind in StrategyKind::ALL {
        let report = fig1c_report(kind);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let errors: Vec<String> = validator.iter_errors(&json).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{kind}: {errors:?}");
    }
}

#[test]
fn schema_rejects_a_bad_status() {
    let schema: serde_json::Value = serde_json::from_str(RUN_REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&fig1c_report(StrategyKind::Default).to_json()).unwrap();
    json["outcome"]["status"] = "solved".into();
    assert!(!validator.is_valid(&json));
}

#[test]
fn report_round_trips() {
    let report = fig1c_report(StrategyKind::TwoPhase);
    let back: RunReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back, report);
    for s in &report.step_log {
        let m: GridMapping = s.mapping.parse().unwrap();
        assert_eq!(m.to_string(), s.mapping);
    }
    let last: GridMapping = report.step_log.last().unwrap().mapping.parse().unwrap();
    assert_eq!(last, report.outcome.final_mapping);
}

#[test]
fn steps_and_costs_are_consistent() {
    let report = fig1c_report(StrategyKind::Default);
    assert_eq!(report.outcome.status, Status::AbstractUnsat);
    let refined = report.step_log.iter().filter(|s| s.refined.is_some()).count();
    assert_eq!(report.outcome.steps, refined);
    assert_eq!(report.step_log.len(), refined + 1);
    for w in report.step_log.windows(2) {
        assert!(w[1].cost > w[0].cost, "{} then {}", w[0].cost, w[1].cost);
    }
    assert_eq!(report.step_log.last().unwrap().cost, report.outcome.cost);
}

#[test]
fn aggregate_rows() {
    let run = |strategy, steps, cost| BenchRun {
        problem: "reachability".into(),
        n: 8,
        seed: 0,
        strategy,
        repeat: 0,
        status: Status::AbstractUnsat,
        steps,
        cost,
        wall_ms: 10,
    };
    let rows = aggregate(&[
        run(StrategyKind::Default, 2, 0.5),
        run(StrategyKind::Default, 4, 0.25),
        run(StrategyKind::GridInc, 3, 0.3),
    ]);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].strategy, StrategyKind::Default);
    assert_eq!((rows[0].mean_steps, rows[0].min_steps), (3.0, 2));
    assert_eq!((rows[0].mean_cost, rows[0].min_cost), (0.375, 0.25));
    assert_eq!(rows[1].runs, 1);
}
