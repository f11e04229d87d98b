use std::collections::BTreeSet;

use absgrid::ground::{ground, AtomId, GroundProgram};
use absgrid::solver::{enumerate_answer_sets, is_answer_set, solve_minimize, Interpretation, SearchStatus, SolveBudget};
use absgrid::syntax::parse_program;
use proptest::prelude::*;

const N: usize = 6;

fn atom(i: usize) -> String {
    format!("p{i}")
}

fn rule_text((kind, head, pos, neg): &(u8, usize, Vec<usize>, Vec<usize>)) -> String {
    let mut body: Vec<String> = pos.iter().map(|&i| atom(i)).collect();
    body.extend(neg.iter().map(|&i| format!("not {}", atom(i))));
    let head = match kind % 4 {
        0 => format!("{{{}}}", atom(*head)),
        1 => String::new(),
        _ => atom(*head),
    };
    if body.is_empty() {
        if head.is_empty() {
            return String::new();
        }
        return format!("{head}.");
    }
    format!("{head} :- {}.", body.join(", "))
}

fn program() -> impl Strategy<Value = String> {
    let rule = (
        any::<u8>(),
        0..N,
        prop::collection::vec(0..N, 0..3),
        prop::collection::vec(0..N, 0..2),
    );
    prop::collection::vec(rule, 1..9).prop_map(|rs| {
        let mut text = String::new();
        for r in &rs {
            text.push_str(&rule_text(r));
            text.push('\n');
        }
        text
    })
}

/// Every subset of the atom table, filtered by the stable-model definition.
fn oracle(g: &GroundProgram) -> BTreeSet<Interpretation> {
    let n = g.atom_count();
    (0u32..(1 << n))
        .map(|mask| Interpretation::new((0..n as AtomId).filter(|&a| mask >> a & 1 == 1)))
        .filter(|i| is_answer_set(g, i))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn engine_matches_reduct_oracle(src in program()) {
        let g = ground(&parse_program(&src).unwrap()).unwrap();
        let expected = oracle(&g);
        let e = enumerate_answer_sets(&g, &SolveBudget::unlimited());
        prop_assert_eq!(e.status, SearchStatus::Exhausted);
        let got: BTreeSet<Interpretation> = e.models.iter().cloned().collect();
        prop_assert_eq!(got.len(), e.models.len(), "duplicate models");
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn minimization_matches_oracle(src in program(), pick in prop::collection::vec(0..N, 1..4)) {
        let g = ground(&parse_program(&src).unwrap()).unwrap();
        let names: BTreeSet<String> = pick.iter().map(|&i| atom(i)).collect();
        let set: BTreeSet<AtomId> = g.atoms.iter().filter(|(_, a)| names.contains(&a.predicate)).map(|(id, _)| id).collect();
        let expected = oracle(&g).iter().map(|m| m.true_atoms.intersection(&set).count()).min();
        let o = solve_minimize(&g, &SolveBudget::default().minimizing(set));
        prop_assert!(o.optimal);
        prop_assert_eq!(o.cost, expected);
        if let Some(m) = &o.model {
            prop_assert!(is_answer_set(&g, m));
        }
    }
}
