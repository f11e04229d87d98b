mod common;

use std::collections::BTreeSet;

use absgrid::abstraction::{abstract_program, AbstractOptions};
use absgrid::ground::{ground, ground_with, GroundAtom, GroundMode};
use absgrid::mapping::DomainMapping;
use absgrid::solver::{enumerate_answer_sets, is_answer_set, SolveBudget};
use common::{random_mapping, random_program};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn check_over_approximation(seed: u64, joint: bool, tighten: bool) {
    let mut rng = StdRng::seed_from_u64(seed);
    let p = random_program(&mut rng, 3, 2, joint);
    let m = random_mapping(&mut rng, &p, joint);
    let g = ground(&p).unwrap();
    let sets = enumerate_answer_sets(&g, &SolveBudget::unlimited());
    let ap = abstract_program(&p, &m, AbstractOptions { tighten })
        .unwrap_or_else(|e| panic!("seed {seed}: {e}\n{p}"));
    let ga = ground_with(&ap.program, GroundMode::Pruned).unwrap();
    for i in &sets.models {
        let atoms: Vec<&GroundAtom> = i.true_atoms.iter().map(|&a| g.atoms.atom(a)).collect();
        let img = ap
            .image_interpretation(&p, &m, &ga, atoms)
            .unwrap()
            .unwrap_or_else(|| panic!("seed {seed}: image atom missing\n{p}\n{m}\n{}", ap.program));
        assert!(
            is_answer_set(&ga, &img),
            "seed {seed}: image of {} is not an abstract answer set\n{p}\n{m}\n{}",
            i.display(&g),
            ap.program
        );
    }
}

#[test]
fn over_approximation_one_dimensional() {
    for seed in 0..200 {
        check_over_approximation(seed, false, false);
    }
}

#[test]
fn over_approximation_joint() {
    for seed in 1000..1200 {
        check_over_approximation(seed, true, false);
    }
}

#[test]
fn over_approximation_tightened() {
    for seed in 2000..2200 {
        check_over_approximation(seed, seed % 2 == 0, true);
    }
}

fn projected(g: &absgrid::ground::GroundProgram, models: &[absgrid::solver::Interpretation], keep: impl Fn(&str) -> bool) -> BTreeSet<BTreeSet<GroundAtom>> {
    models
        .iter()
        .map(|i| {
            i.true_atoms
                .iter()
                .map(|&a| g.atoms.atom(a).clone())
                .filter(|a| keep(&a.predicate))
                .collect()
        })
        .collect()
}

#[test]
fn identity_mapping_is_conservative() {
    for seed in 0..100u64 {
        let joint = seed % 2 == 0;
        let mut rng = StdRng::seed_from_u64(seed + 5000);
        let p = random_program(&mut rng, 3, 2, joint);
        let sorts: Vec<String> = if joint { vec!["s".into(), "t".into()] } else { vec!["s".into()] };
        let m = DomainMapping::identity(&p, &sorts).unwrap();
        let ap = abstract_program(&p, &m, AbstractOptions::default()).unwrap();
        let g = ground(&p).unwrap();
        let ga = ground_with(&ap.program, GroundMode::Pruned).unwrap();
        let all = SolveBudget::unlimited();
        let concrete = projected(&g, &enumerate_answer_sets(&g, &all).models, |_| true);
        let abstract_ = projected(&ga, &enumerate_answer_sets(&ga, &all).models, |pr| !ap.is_aux_predicate(pr));
        assert_eq!(concrete, abstract_, "seed {seed}\n{p}");
    }
}
