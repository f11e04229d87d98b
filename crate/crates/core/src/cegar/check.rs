use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use super::debug::{build_debug_program, diagnose, Diagnosis, Relax};
use super::query::{build_spuriousness_query, QueryKind, QueryRule};
use super::{CheckResult, RefineHint, Strategy, StrategyKind, Verdict};
use crate::abstraction::AbstractProgram;
use crate::bench::GridAxes;
use crate::ground::{GroundAtom, GroundProgram};
use crate::mapping::DomainMapping;
use crate::normalize::sort_at;
use crate::quadtree::{GridMapping, Region};
use crate::solver::{enumerate_answer_sets, is_answer_set, Interpretation, SearchStatus, SolveBudget};
use crate::syntax::{Constant, Program};
use crate::Result;

/// Everything a concreteness check reads; shared by parallel checks.
pub struct CheckContext<'a> {
    pub program: &'a Program,
    /// Grounding of `program`.
    pub ground: &'a GroundProgram,
    pub grid: &'a GridMapping,
    pub mapping: &'a DomainMapping,
    pub abstraction: &'a AbstractProgram,
    /// Grounding of the abstract program.
    pub abstract_ground: &'a GroundProgram,
    pub axes: &'a GridAxes,
    pub time_sort: Option<&'a str>,
    pub strategy: &'a Strategy,
    /// Hint weights of the previous refinement, ordering grid-inc stages.
    pub prior: &'a BTreeMap<Region, usize>,
}

impl CheckContext<'_> {
    /// Abstract labels of the grid objects of an atom. Original atoms are
    /// lifted; abstract atoms are read as they are.
    fn labels(&self, a: &GroundAtom, lifted: bool) -> Vec<Vec<Constant>> {
        let Ok(objects) = self.mapping.object_positions(self.program, &a.predicate, a.args.len()) else {
            return Vec::new();
        };
        objects
            .iter()
            .filter_map(|obj| {
                let t: Vec<Constant> = obj.iter().map(|&i| a.args[i].clone()).collect();
                if lifted {
                    Some(t)
                } else {
                    self.mapping.lift_tuple(&t).map(<[Constant]>::to_vec)
                }
            })
            .collect()
    }

    pub fn region_of(&self, label: &[Constant]) -> Option<Region> {
        let first = self.mapping.preimage(label)?.first()?;
        let (x, y) = self.axes.xy(first)?;
        self.grid.leaf_at(x, y).copied()
    }

    fn is_proper(&self, label: &[Constant]) -> bool {
        self.mapping.preimage(label).is_some_and(|p| p.len() > 1)
    }

    /// Abstract elements in the bodies of the abstract rules deriving
    /// `target` in `model`.
    fn support_labels(&self, target: &GroundAtom, model: &BTreeSet<GroundAtom>) -> BTreeSet<Vec<Constant>> {
        let ag = self.abstract_ground;
        let mut out = BTreeSet::new();
        let Some(head) = ag.atoms.get(target) else {
            return out;
        };
        let holds = |a: &u32| model.contains(ag.atoms.atom(*a));
        for r in &ag.rules {
            if r.head == Some(head) && r.pos.iter().all(holds) && !r.neg.iter().any(holds) {
                for &a in &r.pos {
                    let atom = ag.atoms.atom(a);
                    if !self.abstraction.is_aux_predicate(&atom.predicate) {
                        out.extend(self.labels(atom, true));
                    }
                }
            }
        }
        out
    }

    /// Abstract elements a constraint of `gq` concerns. A required abstract
    /// atom also brings the elements its abstract derivation used.
    fn rule_labels(
        &self,
        gq: &GroundProgram,
        query: &[QueryRule],
        query_at: &[Option<usize>],
        model: &BTreeSet<GroundAtom>,
        i: usize,
    ) -> BTreeSet<Vec<Constant>> {
        let mut out = BTreeSet::new();
        if let Some(Some(q)) = query_at.get(i) {
            let qr = &query[*q];
            out.extend(self.labels(&qr.target, qr.kind != QueryKind::Forbid));
            if qr.kind == QueryKind::Require {
                out.extend(self.support_labels(&qr.target, model));
            }
            return out;
        }
        let r = &gq.rules[i];
        for &a in r.pos.iter().chain(&r.neg) {
            if (a as usize) < self.ground.atoms.len() {
                out.extend(self.labels(gq.atoms.atom(a), false));
            }
        }
        out
    }

    fn time_of(&self, a: &GroundAtom) -> Option<i64> {
        let ts = self.time_sort?;
        (0..a.args.len())
            .filter(|&i| sort_at(self.program, &a.predicate, a.args.len(), i).as_deref() == Some(ts))
            .filter_map(|i| match &a.args[i] {
                Constant::Int(v) => Some(*v),
                _ => None,
            })
            .max()
    }
}

/// Combined program `g ∪ hit rules ∪ selected constraints`, with the query
/// rule behind every added rule.
fn combine(g: &GroundProgram, query: &[QueryRule], include: &dyn Fn(usize) -> bool) -> Result<(GroundProgram, Vec<Option<usize>>)> {
    let mut gq = g.clone();
    let mut query_at = vec![None; g.rules.len()];
    for (q, qr) in query.iter().enumerate() {
        if qr.kind == QueryKind::Hit || include(q) {
            gq.add_rule(&qr.rule, None)?;
            query_at.push(Some(q));
        }
    }
    Ok((gq, query_at))
}

/// Constraint subsets checked in order; the last one is the whole query.
fn stages(ctx: &CheckContext, query: &[QueryRule]) -> Vec<BTreeSet<usize>> {
    let constraints: Vec<usize> = (0..query.len()).filter(|&q| query[q].kind != QueryKind::Hit).collect();
    let all: BTreeSet<usize> = constraints.iter().copied().collect();
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    match ctx.strategy.kind {
        StrategyKind::Default | StrategyKind::TwoPhase => {}
        StrategyKind::TimeInc => {
            let times: Vec<Option<i64>> = query.iter().map(|q| ctx.time_of(&q.target)).collect();
            let steps: BTreeSet<i64> = times.iter().flatten().copied().collect();
            for t in steps {
                out.push(constraints.iter().copied().filter(|&q| times[q].is_some_and(|v| v <= t)).collect());
            }
        }
        StrategyKind::GridInc => {
            let regions: Vec<BTreeSet<Region>> = query
                .iter()
                .map(|q| {
                    ctx.labels(&q.target, q.kind != QueryKind::Forbid)
                        .iter()
                        .filter_map(|l| ctx.region_of(l))
                        .collect()
                })
                .collect();
            let mut mentions: BTreeMap<Region, usize> = BTreeMap::new();
            for q in &constraints {
                if query[*q].kind == QueryKind::Require {
                    for r in &regions[*q] {
                        *mentions.entry(*r).or_default() += 1;
                    }
                }
            }
            let mut order: Vec<Region> = ctx.grid.leaves().to_vec();
            order.sort_by_key(|r| {
                (
                    std::cmp::Reverse(ctx.prior.get(r).copied().unwrap_or(0)),
                    std::cmp::Reverse(mentions.get(r).copied().unwrap_or(0)),
                    r.top_left_key(),
                )
            });
            let mut open: BTreeSet<Region> = BTreeSet::new();
            for r in order {
                open.insert(r);
                out.push(
                    constraints
                        .iter()
                        .copied()
                        .filter(|&q| !regions[q].is_empty() && regions[q].is_subset(&open))
                        .collect(),
                );
            }
        }
    }
    out.push(all);
    out.dedup();
    out.retain(|s| !s.is_empty());
    if out.is_empty() {
        out.push(BTreeSet::new());
    }
    out
}

/// Decides whether `abstract_model` (an answer set of the abstract program)
/// is concrete. Strategies change how the check is staged and how the
/// debug program is focused, never the verdict.
pub fn check_concreteness(ctx: &CheckContext, abstract_model: &BTreeSet<GroundAtom>) -> Result<CheckResult> {
    let started = Instant::now();
    let query = build_spuriousness_query(ctx.program, ctx.ground, ctx.mapping, ctx.abstraction, abstract_model)?;
    let timeout = ctx.strategy.debug_timeout;
    let stages = stages(ctx, &query);
    let last = stages.len() - 1;
    for (k, stage) in stages.iter().enumerate() {
        let (gq, query_at) = combine(ctx.ground, &query, &|q| stage.contains(&q))?;
        let e = enumerate_answer_sets(&gq, &SolveBudget::models(1).with_timeout(timeout));
        if let Some(model) = e.models.first() {
            if k < last {
                continue;
            }
            let witness = Interpretation::new(
                model.true_atoms.iter().copied().filter(|&a| (a as usize) < ctx.ground.atoms.len()),
            );
            debug_assert!(is_answer_set(ctx.ground, &witness));
            return Ok(CheckResult {
                verdict: Verdict::Concrete,
                witness: Some(witness),
                hints: Vec::new(),
                debug_optimum: None,
                stages: k + 1,
                elapsed: started.elapsed(),
            });
        }
        let verdict = if e.status == SearchStatus::TimedOut {
            Verdict::Unknown
        } else {
            Verdict::Spurious
        };
        let (hints, optimum) = localize(ctx, &gq, &query, &query_at, abstract_model, timeout);
        return Ok(CheckResult {
            verdict,
            witness: None,
            hints,
            debug_optimum: optimum,
            stages: k + 1,
            elapsed: started.elapsed(),
        });
    }
    unreachable!("the last stage always decides")
}

/// Hints from one or two debug passes over `gq`.
fn localize(
    ctx: &CheckContext,
    gq: &GroundProgram,
    query: &[QueryRule],
    query_at: &[Option<usize>],
    model: &BTreeSet<GroundAtom>,
    timeout: Duration,
) -> (Vec<RefineHint>, Option<usize>) {
    let is_query = |i: usize| query_at.get(i).is_some_and(Option::is_some);
    let labels = |i: usize| ctx.rule_labels(gq, query, query_at, model, i);
    if ctx.strategy.kind != StrategyKind::TwoPhase {
        let d = diagnose(&build_debug_program(gq, &|_, _| Relax::Instance), timeout);
        return (derive_hints(ctx, &d, &labels), d.optimum);
    }
    // phase 1: query constraints one by one, program constraints per rule
    let phase1 = build_debug_program(gq, &|i, r| {
        if is_query(i) {
            Relax::Instance
        } else {
            Relax::Shared(format!("rule{}", r.origin.map_or(0, |o| o + 1)))
        }
    });
    let d1 = diagnose(&phase1, timeout);
    let mut culprit_rules: BTreeSet<Option<usize>> = BTreeSet::new();
    let mut culprit_labels: BTreeSet<Vec<Constant>> = BTreeSet::new();
    for group in &d1.groups {
        for &i in group {
            if is_query(i) {
                culprit_labels.extend(labels(i));
            } else {
                culprit_rules.insert(gq.rules[i].origin);
            }
        }
    }
    // phase 2: focus on instances of culprit rules near the culprits
    let phase2 = build_debug_program(gq, &|i, r| {
        if is_query(i) {
            return Relax::Instance;
        }
        if !culprit_rules.contains(&r.origin) {
            return Relax::Hard;
        }
        if culprit_labels.is_empty() || !labels(i).is_disjoint(&culprit_labels) {
            Relax::Instance
        } else {
            Relax::Hard
        }
    });
    let d2 = diagnose(&phase2, timeout);
    if d2.model.is_some() {
        (derive_hints(ctx, &d2, &labels), d2.optimum)
    } else {
        (derive_hints(ctx, &d1, &labels), d1.optimum)
    }
}

/// Refinement hints from a diagnosis: every abstract element a violated
/// instance mentions, if it stands for more than one cell, weighted by the
/// number of violated `ab` atoms mentioning it. Shared `ab` atoms carry no
/// location and are skipped.
pub fn derive_hints(
    ctx: &CheckContext,
    d: &Diagnosis,
    labels: &dyn Fn(usize) -> BTreeSet<Vec<Constant>>,
) -> Vec<RefineHint> {
    let mut weights: BTreeMap<Vec<Constant>, usize> = BTreeMap::new();
    for group in d.groups.iter().filter(|g| g.len() == 1) {
        for l in labels(group[0]) {
            if ctx.is_proper(&l) {
                *weights.entry(l).or_default() += 1;
            }
        }
    }
    let mut hints: Vec<RefineHint> = weights
        .into_iter()
        .filter_map(|(element, weight)| {
            ctx.region_of(&element).map(|region| RefineHint {
                element,
                region,
                weight,
            })
        })
        .collect();
    hints.sort_by_key(|h| (std::cmp::Reverse(h.weight), h.region.top_left_key()));
    hints
}
