mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use absgrid::abstraction::{abstract_program, AbstractOptions};
use absgrid::bench::GridAxes;
use absgrid::cegar::{check_concreteness, CheckContext, Strategy, StrategyKind, Verdict};
use absgrid::ground::{ground, ground_with, GroundAtom, GroundMode, GroundProgram};
use absgrid::quadtree::GridMapping;
use absgrid::solver::{enumerate_answer_sets, is_answer_set, Interpretation, SolveBudget};
use common::{random_mapping, random_program};
use rand::rngs::StdRng;
use rand::SeedableRng;

const AXES: GridAxes = GridAxes {
    x_sort: "s",
    y_sort: "t",
    object: "o",
    order: ["s", "t"],
};

/// All answer sets by trying every subset of the non-fact atoms against
/// the reduct definition.
fn brute_force_answer_sets(g: &GroundProgram) -> Vec<Interpretation> {
    let facts: Vec<u32> = (0..g.atom_count() as u32).filter(|&a| g.is_ground_atom_true_fact(a)).collect();
    let free: Vec<u32> = (0..g.atom_count() as u32).filter(|a| !facts.contains(a)).collect();
    assert!(free.len() <= 16);
    (0u32..1 << free.len())
        .map(|bits| {
            Interpretation::new(
                facts
                    .iter()
                    .copied()
                    .chain(free.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &a)| a)),
            )
        })
        .filter(|i| is_answer_set(g, i))
        .collect()
}

fn free_atoms(g: &GroundProgram) -> usize {
    (0..g.atom_count() as u32).filter(|&a| !g.is_ground_atom_true_fact(a)).count()
}

#[test]
fn verdict_matches_brute_force() {
    let mut cases = 0;
    let mut kinds: BTreeMap<Verdict, usize> = BTreeMap::new();
    let dummy_grid = GridMapping::initial(2, 2).unwrap();
    for seed in 0.. {
        if cases >= 100 {
            break;
        }
        let mut rng = StdRng::seed_from_u64(seed);
        let joint = seed % 2 == 1;
        let p = random_program(&mut rng, 3, 2, joint);
        let m = random_mapping(&mut rng, &p, joint);
        let full = ground(&p).unwrap();
        if free_atoms(&full) > 10 {
            continue;
        }
        let ap = abstract_program(&p, &m, AbstractOptions::default()).unwrap();
        let ag = ground_with(&ap.program, GroundMode::Pruned).unwrap();
        let concrete = ground_with(&p, GroundMode::Pruned).unwrap();
        let images: BTreeSet<BTreeSet<GroundAtom>> = brute_force_answer_sets(&full)
            .iter()
            .map(|i| i.atoms(&full).into_iter().map(|a| m.lift_atom(&p, a).unwrap()).collect())
            .collect();
        let prior = BTreeMap::new();
        for model in enumerate_answer_sets(&ag, &SolveBudget::models(4)).models {
            let abs: BTreeSet<GroundAtom> = model.atoms(&ag).into_iter().cloned().collect();
            let core: BTreeSet<GroundAtom> = abs.iter().filter(|a| !ap.is_aux_predicate(&a.predicate)).cloned().collect();
            let want = if images.contains(&core) {
                Verdict::Concrete
            } else {
                Verdict::Spurious
            };
            for kind in StrategyKind::ALL {
                let strategy = Strategy {
                    kind,
                    debug_timeout: Duration::from_secs(10),
                };
                let ctx = CheckContext {
                    program: &p,
                    ground: &concrete,
                    grid: &dummy_grid,
                    mapping: &m,
                    abstraction: &ap,
                    abstract_ground: &ag,
                    axes: &AXES,
                    time_sort: Some("t"),
                    strategy: &strategy,
                    prior: &prior,
                };
                let got = check_concreteness(&ctx, &abs).unwrap();
                assert_eq!(got.verdict, want, "seed {seed} {kind}\n{p}\n{m}\n{}", model.display(&ag));
                if let Some(w) = &got.witness {
                    assert!(is_answer_set(&concrete, w));
                }
            }
            *kinds.entry(want).or_default() += 1;
            cases += 1;
        }
    }
    eprintln!("{kinds:?}");
    assert!(kinds.len() == 2, "both verdicts should occur: {kinds:?}");
}
