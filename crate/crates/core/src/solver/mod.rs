//! Stable-model computation for ground programs.
//!
//! [`reduct`] and [`least_model`] implement the textbook definitions and
//! serve as a reference; [`enumerate_answer_sets`] and [`solve_minimize`]
//! run the conflict-driven engine.

mod engine;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::ground::{AtomId, GroundAtom, GroundProgram, GroundRule};
use engine::{Engine, Step, Stop};

/// A set of true atoms; everything else is false.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation {
    pub true_atoms: BTreeSet<AtomId>,
}

impl Interpretation {
    pub fn new(atoms: impl IntoIterator<Item = AtomId>) -> Self {
        Interpretation {
            true_atoms: atoms.into_iter().collect(),
        }
    }

    pub fn contains(&self, a: AtomId) -> bool {
        self.true_atoms.contains(&a)
    }

    pub fn len(&self) -> usize {
        self.true_atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.true_atoms.is_empty()
    }

    /// True atoms resolved against `g`, sorted.
    pub fn atoms<'g>(&self, g: &'g GroundProgram) -> Vec<&'g GroundAtom> {
        let mut v: Vec<&GroundAtom> = self.true_atoms.iter().map(|&a| g.atoms.atom(a)).collect();
        v.sort();
        v
    }

    /// Renders the true atoms as `p(1,2) q(a)` in sorted order.
    pub fn display(&self, g: &GroundProgram) -> String {
        self.atoms(g)
            .iter()
            .map(|a| a.to_atom().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveBudget {
    pub max_models: Option<usize>,
    pub timeout: Option<Duration>,
    /// Atoms whose number of true members [`solve_minimize`] minimizes.
    pub minimize_atoms: Option<BTreeSet<AtomId>>,
    /// [`solve_minimize`] gives up improving after this many conflicts
    /// without a better model.
    pub stall_conflicts: Option<u64>,
}

impl SolveBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn models(n: usize) -> Self {
        SolveBudget {
            max_models: Some(n),
            ..Default::default()
        }
    }

    pub fn with_timeout(mut self, t: Duration) -> Self {
        self.timeout = Some(t);
        self
    }

    pub fn minimizing(mut self, atoms: BTreeSet<AtomId>) -> Self {
        self.minimize_atoms = Some(atoms);
        self
    }

    pub fn with_stall_conflicts(mut self, n: u64) -> Self {
        self.stall_conflicts = Some(n);
        self
    }
}

/// Why a search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// The search space was exhausted; the result is complete.
    Exhausted,
    /// The requested number of models was found.
    LimitReached,
    TimedOut,
    /// Minimization stopped improving within its conflict budget.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub models: Vec<Interpretation>,
    pub status: SearchStatus,
}

impl Enumeration {
    /// True if the search proved there are no answer sets.
    pub fn proved_unsat(&self) -> bool {
        self.models.is_empty() && self.status == SearchStatus::Exhausted
    }
}

#[derive(Debug, Clone)]
pub struct Optimum {
    /// Best model found, if any.
    pub model: Option<Interpretation>,
    /// Number of minimized atoms true in `model`.
    pub cost: Option<usize>,
    /// The search proved `model` optimal (or proved unsatisfiability).
    pub optimal: bool,
    pub status: SearchStatus,
}

fn deadline(budget: &SolveBudget) -> Option<Instant> {
    budget.timeout.map(|t| Instant::now() + t)
}

fn to_interp(model: &[bool]) -> Interpretation {
    Interpretation::new(model.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as AtomId))
}

/// Enumerates answer sets in a deterministic order.
pub fn enumerate_answer_sets(g: &GroundProgram, budget: &SolveBudget) -> Enumeration {
    let mut e = Engine::new(g);
    e.set_deadline(deadline(budget));
    let mut models = Vec::new();
    loop {
        if budget.max_models.is_some_and(|m| models.len() >= m) {
            return Enumeration {
                models,
                status: SearchStatus::LimitReached,
            };
        }
        match e.next_model() {
            Step::Model(m) => {
                let i = to_interp(&m);
                debug_assert!(is_answer_set(g, &i), "engine returned a non-stable model");
                models.push(i);
                e.block_current();
            }
            Step::Done(stop) => {
                let status = match stop {
                    Stop::Exhausted => SearchStatus::Exhausted,
                    Stop::Timeout => SearchStatus::TimedOut,
                    Stop::ConflictLimit => SearchStatus::Stalled,
                };
                return Enumeration { models, status };
            }
        }
    }
}

/// Finds an answer set with the fewest true atoms among `minimize` by
/// branch and bound. On timeout the best model so far is returned with
/// `optimal == false`. Without `minimize_atoms` any answer set is optimal.
pub fn solve_minimize(g: &GroundProgram, budget: &SolveBudget) -> Optimum {
    let mut e = Engine::new(g);
    e.set_deadline(deadline(budget));
    let atoms: Vec<AtomId> = budget
        .minimize_atoms
        .iter()
        .flatten()
        .copied()
        .filter(|&a| (a as usize) < g.atom_count())
        .collect();
    let mut best: Option<(Interpretation, usize)> = None;
    loop {
        match e.next_model() {
            Step::Model(m) => {
                let cost = atoms.iter().filter(|&&a| m[a as usize]).count();
                best = Some((to_interp(&m), cost));
                if cost == 0 {
                    return finish(best, SearchStatus::Exhausted);
                }
                e.restart();
                e.set_bound(&atoms, cost - 1);
                e.set_conflict_budget(budget.stall_conflicts);
            }
            Step::Done(Stop::Exhausted) => return finish(best, SearchStatus::Exhausted),
            Step::Done(Stop::Timeout) => return finish(best, SearchStatus::TimedOut),
            Step::Done(Stop::ConflictLimit) => return finish(best, SearchStatus::Stalled),
        }
    }
}

fn finish(best: Option<(Interpretation, usize)>, status: SearchStatus) -> Optimum {
    let optimal = status == SearchStatus::Exhausted;
    match best {
        Some((m, c)) => Optimum {
            model: Some(m),
            cost: Some(c),
            optimal,
            status,
        },
        None => Optimum {
            model: None,
            cost: None,
            optimal,
            status,
        },
    }
}

/// Kept-rule reduct: the rules whose body holds in `i`, with negative
/// literals removed.
///
/// Choice rules `{h} :- B.` are read as `h :- B, not h'.` together with
/// `h' :- B, not h.` for a fresh atom `h'`; the reduct keeps whichever of
/// the two survives. Fresh atoms are appended to the atom table of the
/// returned program and never appear in `i`.
pub fn reduct(g: &GroundProgram, i: &Interpretation) -> GroundProgram {
    let mut out = GroundProgram {
        rules: Vec::new(),
        atoms: g.atoms.clone(),
    };
    for r in &g.rules {
        if r.neg.iter().any(|a| i.contains(*a)) || !r.pos.iter().all(|a| i.contains(*a)) {
            continue;
        }
        let mut kept = GroundRule {
            head: r.head,
            choice: false,
            pos: r.pos.clone(),
            neg: Vec::new(),
            origin: r.origin,
            subst: r.subst.clone(),
        };
        if r.choice {
            let h = r.head.expect("choice rules have a head");
            if !i.contains(h) {
                let atom = g.atoms.atom(h);
                let shadow = GroundAtom::new(format!("{}'", atom.predicate), atom.args.clone());
                kept.head = Some(out.atoms.intern(shadow));
            }
        }
        out.rules.push(kept);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeastModel {
    pub model: Interpretation,
    /// False if some constraint body holds in `model`.
    pub consistent: bool,
}

/// Least model of a negation-free program. Negative literals and choice
/// rules are ignored (such rules never fire), so callers should pass a
/// reduct.
pub fn least_model(g: &GroundProgram) -> LeastModel {
    let n = g.atom_count();
    let mut truth = vec![false; n];
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut missing: Vec<usize> = Vec::with_capacity(g.rules.len());
    let mut queue = Vec::new();
    for (ri, r) in g.rules.iter().enumerate() {
        let active = !r.choice && r.neg.is_empty();
        let mut pos = r.pos.clone();
        pos.sort_unstable();
        pos.dedup();
        missing.push(if active { pos.len() } else { usize::MAX });
        if active {
            for &a in &pos {
                occ[a as usize].push(ri);
            }
            if pos.is_empty() {
                queue.push(ri);
            }
        }
    }
    let mut consistent = true;
    while let Some(ri) = queue.pop() {
        match g.rules[ri].head {
            None => consistent = false,
            Some(h) if !truth[h as usize] => {
                truth[h as usize] = true;
                for &r2 in &occ[h as usize] {
                    missing[r2] -= 1;
                    if missing[r2] == 0 {
                        queue.push(r2);
                    }
                }
            }
            Some(_) => {}
        }
    }
    LeastModel {
        model: to_interp(&truth),
        consistent,
    }
}

/// Checks the stable-model condition directly.
pub fn is_answer_set(g: &GroundProgram, i: &Interpretation) -> bool {
    let lm = least_model(&reduct(g, i));
    let restricted: BTreeSet<AtomId> = lm
        .model
        .true_atoms
        .iter()
        .copied()
        .filter(|&a| (a as usize) < g.atom_count())
        .collect();
    lm.consistent && restricted == i.true_atoms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::ground;
    use crate::syntax::parse_program;

    fn gp(src: &str) -> GroundProgram {
        ground(&parse_program(src).unwrap()).unwrap()
    }

    fn shown(g: &GroundProgram, e: &Enumeration) -> Vec<String> {
        let mut v: Vec<String> = e.models.iter().map(|m| m.display(g)).collect();
        v.sort();
        v
    }

    #[test]
    fn even_loop_has_two_answer_sets() {
        let g = gp("a :- not b. b :- not a.");
        let e = enumerate_answer_sets(&g, &SolveBudget::unlimited());
        assert_eq!(shown(&g, &e), vec!["a", "b"]);
        assert_eq!(e.status, SearchStatus::Exhausted);
    }

    #[test]
    fn odd_loop_and_positive_loop() {
        let g = gp("a :- not a.");
        assert!(enumerate_answer_sets(&g, &SolveBudget::unlimited()).proved_unsat());
        let g = gp("a :- b. b :- a.");
        assert_eq!(shown(&g, &enumerate_answer_sets(&g, &SolveBudget::unlimited())), vec![""]);
    }

    #[test]
    fn choice_and_constraint() {
        let g = gp("{a}. {b}. :- a, b.");
        let e = enumerate_answer_sets(&g, &SolveBudget::unlimited());
        assert_eq!(shown(&g, &e), vec!["", "a", "b"]);
        let e = enumerate_answer_sets(&g, &SolveBudget::models(1));
        assert_eq!(e.models.len(), 1);
        assert_eq!(e.status, SearchStatus::LimitReached);
    }

    #[test]
    fn reduct_removes_negation() {
        let g = gp("a :- not b. c :- a, not a.");
        let i = Interpretation::new([g.atoms.get(&GroundAtom::new("a", vec![])).unwrap()]);
        let r = reduct(&g, &i);
        assert_eq!(r.to_string(), "a.\n");
        assert!(is_answer_set(&g, &i));
    }

    #[test]
    fn minimization_finds_fewest() {
        let g = gp("{a}. {b}. {c}. :- not a, not b. :- not c, not b.");
        let set: BTreeSet<AtomId> = g.atoms.iter().map(|(id, _)| id).collect();
        let o = solve_minimize(&g, &SolveBudget::default().minimizing(set));
        assert!(o.optimal);
        assert_eq!(o.cost, Some(1));
        assert_eq!(o.model.unwrap().display(&g), "b");
    }

    #[test]
    fn reduct_keeps_positive_loop() {
        let g = gp("a :- b. b :- a.");
        let all = Interpretation::new(g.atoms.iter().map(|(id, _)| id));
        assert_eq!(reduct(&g, &all).rules.len(), 2);
        assert!(least_model(&reduct(&g, &all)).model.is_empty());
        assert!(!is_answer_set(&g, &all));
        let g = gp("a :- not b.");
        let b = Interpretation::new([g.atoms.get(&GroundAtom::new("b", vec![])).unwrap()]);
        assert!(reduct(&g, &b).rules.is_empty());
    }

    #[test]
    fn least_model_facts_and_inconsistency() {
        let lm = least_model(&gp("a. b :- a."));
        assert_eq!(lm.model.len(), 2);
        assert!(lm.consistent);
        assert!(!least_model(&gp("a. :- a.")).consistent);
        assert!(least_model(&GroundProgram::default()).model.is_empty());
    }
}
