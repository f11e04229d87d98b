use absgrid::bench::{fig1a_sudoku, fig1c_reachability, generate_instance, oracle, InstanceSpec, Problem, PROBLEMS};
use absgrid::ground::ground;
use absgrid::solver::{enumerate_answer_sets, SolveBudget};

fn asp_satisfiable(spec: &InstanceSpec) -> bool {
    let p = spec.problem.program(spec).unwrap();
    let g = ground(&p).unwrap();
    !enumerate_answer_sets(&g, &SolveBudget::models(1)).models.is_empty()
}

#[test]
fn encodings_agree_with_oracles() {
    for problem in PROBLEMS {
        let sizes: &[u32] = match problem {
            Problem::Reachability => &[4, 8],
            Problem::VisitallPlan => &[2, 4],
            _ => &[4],
        };
        let mut seen = [0usize; 2];
        for &n in sizes {
            for seed in 0..12 {
                let spec = generate_instance(problem, n, seed, false).unwrap();
                let want = oracle::satisfiable(&spec);
                assert_eq!(asp_satisfiable(&spec), want, "{problem} n={n} seed={seed}\n{}", spec.to_lp());
                seen[want as usize] += 1;
            }
        }
        eprintln!("{problem}: {} unsat, {} sat", seen[0], seen[1]);
    }
}

#[test]
fn certified_instances_are_unsat() {
    for problem in PROBLEMS {
        let spec = generate_instance(problem, 4, 7, true).unwrap();
        assert!(spec.certified);
        assert!(!asp_satisfiable(&spec), "{problem}");
    }
}

#[test]
fn generator_is_deterministic() {
    for problem in PROBLEMS {
        assert_eq!(
            generate_instance(problem, 4, 3, true).unwrap(),
            generate_instance(problem, 4, 3, true).unwrap()
        );
    }
}

#[test]
fn figure_instances() {
    let r = fig1c_reachability();
    assert!(r.certified);
    assert_eq!(oracle::unreachable_cells(&r), vec![(7, 7), (8, 7), (6, 8), (7, 8), (8, 8)]);
    assert!(!asp_satisfiable(&r));
    let s = fig1a_sudoku();
    assert_eq!(InstanceSpec::from_lp(&s.to_lp()).unwrap(), s);
}
