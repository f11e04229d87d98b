use std::time::Instant;

use absgrid::bench::fig1c_reachability;
use absgrid::cegar::{run_loop, CegarOptions, CegarTask, Status};
use absgrid::quadtree::{CostDenominator, Region};

#[test]
fn fig1c_default_strategy() {
    let spec = fig1c_reachability();
    let task = CegarTask::from_instance(&spec).unwrap();
    let t = Instant::now();
    let out = run_loop(&task, task.initial_mapping().unwrap(), &CegarOptions::default()).unwrap();
    for s in &out.step_log {
        eprintln!(
            "step {} cost {:.4} |A|={} {:?} refined {:?} hints {:?} ({} ms + {} ms)",
            s.step,
            s.cost,
            s.abstract_answer_sets,
            s.verdicts,
            s.refined.map(|r| r.to_string()),
            s.hints.iter().take(3).map(|h| (h.region.to_string(), h.weight)).collect::<Vec<_>>(),
            s.abstract_ms,
            s.check_ms
        );
    }
    eprintln!("final {} in {:?}", out.final_mapping, t.elapsed());
    assert_eq!(out.status, Status::AbstractUnsat);
    assert!(out.final_mapping.cost(CostDenominator::Literal) < 0.8);
    let quads = [(1, 1), (5, 1), (1, 5), (5, 5)].map(|(x, y)| Region {
        x: (x, x + 3),
        y: (y, y + 3),
    });
    assert!(quads.iter().any(|q| out.final_mapping.leaves().contains(q)));
}
