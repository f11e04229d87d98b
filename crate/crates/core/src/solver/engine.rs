//! Conflict-driven search over the completion of a ground program.
//!
//! Variables are the program atoms followed by one variable per distinct rule
//! body. Clauses encode body definitions, rule satisfaction, and support
//! (every true atom needs a true body). Unfounded sets are detected after
//! unit propagation by a least-fixpoint computation over non-false bodies;
//! each detection adds the corresponding loop formula as a clause, so the
//! models returned are exactly the answer sets. An optional cardinality
//! bound over a set of atoms drives branch-and-bound minimization.
//!
//! Decisions follow activity scores bumped during conflict analysis, ties
//! broken by atom id, with saved phases and Luby restarts. Everything is
//! deterministic.

use std::collections::HashMap;
use std::time::Instant;

use crate::ground::{AtomId, GroundProgram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Lit(u32);

impl Lit {
    fn new(var: u32, positive: bool) -> Self {
        Lit(var << 1 | u32::from(!positive))
    }
    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }
    fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }
    fn negate(self) -> Self {
        Lit(self.0 ^ 1)
    }
    fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stop {
    Exhausted,
    Timeout,
    ConflictLimit,
}

pub(crate) enum Step {
    Model(Vec<bool>),
    Done(Stop),
}

const NONE: u32 = u32::MAX;
/// Reason of a literal implied by the cardinality bound; the clause is
/// rebuilt on demand in conflict analysis.
const CARD: u32 = u32::MAX - 1;
const LEARNT_LIMIT: usize = 20_000;
const RESTART_UNIT: u64 = 64;
const DECAY: f64 = 0.95;

/// The Luby sequence 1 1 2 1 1 2 4 ... at 0-based position `i`.
fn luby(mut i: u64) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

pub(crate) struct Engine {
    n_atoms: usize,
    // body structure
    body_pos: Vec<Vec<u32>>,
    // rules (head, body) that can support an atom
    rule_head: Vec<u32>,
    rule_body: Vec<u32>,
    head_rules: Vec<Vec<u32>>,
    pos_occ: Vec<Vec<u32>>,
    body_rules: Vec<Vec<u32>>,
    clauses: Vec<Clause>,
    watches: Vec<Vec<u32>>,
    assign: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail_pos: Vec<usize>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    unsat: bool,
    /// Atoms on a cycle of the positive dependency graph; only they can
    /// be unfounded once the completion holds.
    cyclic: Vec<bool>,
    has_cycles: bool,
    /// Cyclic atoms in each body.
    cyclic_in_body: Vec<u32>,
    /// Bodies of rules with a cyclic head.
    feeds_cycle: Vec<bool>,
    dirty: bool,
    seen: Vec<bool>,
    learnt_count: usize,
    card: Option<(Vec<Lit>, usize)>,
    deadline: Option<Instant>,
    ticks: u64,
    activity: Vec<f64>,
    var_inc: f64,
    phase: Vec<bool>,
    conflicts: u64,
    conflict_limit: Option<u64>,
    restarts: u64,
    next_restart: u64,
}

impl Engine {
    pub(crate) fn new(g: &GroundProgram) -> Self {
        let n_atoms = g.atom_count();
        let mut body_index: HashMap<(Vec<u32>, Vec<u32>), u32> = HashMap::new();
        let mut body_pos: Vec<Vec<u32>> = Vec::new();
        let mut body_neg: Vec<Vec<u32>> = Vec::new();
        let mut intern = |pos: &[AtomId], neg: &[AtomId]| {
            let mut p = pos.to_vec();
            p.sort_unstable();
            p.dedup();
            let mut n = neg.to_vec();
            n.sort_unstable();
            n.dedup();
            let next = body_pos.len() as u32;
            *body_index.entry((p.clone(), n.clone())).or_insert_with(|| {
                body_pos.push(p);
                body_neg.push(n);
                next
            })
        };
        let mut rule_head = Vec::new();
        let mut rule_body = Vec::new();
        let mut constraints = Vec::new();
        let mut definite = Vec::new();
        for r in &g.rules {
            let b = intern(&r.pos, &r.neg);
            match r.head {
                Some(h) => {
                    rule_head.push(h);
                    rule_body.push(b);
                    if !r.choice {
                        definite.push((h, b));
                    }
                }
                None => constraints.push(b),
            }
        }
        let n_bodies = body_pos.len();
        let n_vars = n_atoms + n_bodies;
        let bvar = |b: u32| n_atoms as u32 + b;
        let mut head_rules = vec![Vec::new(); n_atoms];
        let mut body_rules = vec![Vec::new(); n_bodies];
        for (i, (&h, &b)) in rule_head.iter().zip(&rule_body).enumerate() {
            head_rules[h as usize].push(i as u32);
            body_rules[b as usize].push(i as u32);
        }
        let mut pos_occ = vec![Vec::new(); n_atoms];
        for (b, pos) in body_pos.iter().enumerate() {
            for &a in pos {
                pos_occ[a as usize].push(b as u32);
            }
        }
        let cyclic = cyclic_atoms(n_atoms, &rule_head, &rule_body, &body_pos);
        let cyclic_in_body: Vec<u32> = body_pos
            .iter()
            .map(|p| p.iter().filter(|&&a| cyclic[a as usize]).count() as u32)
            .collect();
        let mut feeds_cycle = vec![false; n_bodies];
        for (&h, &b) in rule_head.iter().zip(&rule_body) {
            if cyclic[h as usize] {
                feeds_cycle[b as usize] = true;
            }
        }
        let has_cycles = cyclic.iter().any(|&c| c);
        let mut e = Engine {
            n_atoms,
            body_pos,
            rule_head,
            rule_body,
            head_rules,
            pos_occ,
            body_rules,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n_vars],
            assign: vec![0; n_vars],
            level: vec![0; n_vars],
            reason: vec![NONE; n_vars],
            trail_pos: vec![0; n_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            unsat: false,
            cyclic,
            has_cycles,
            cyclic_in_body,
            feeds_cycle,
            dirty: has_cycles,
            seen: vec![false; n_vars],
            learnt_count: 0,
            card: None,
            deadline: None,
            ticks: 0,
            activity: vec![0.0; n_atoms],
            var_inc: 1.0,
            phase: vec![false; n_atoms],
            conflicts: 0,
            conflict_limit: None,
            restarts: 0,
            next_restart: RESTART_UNIT,
        };
        for b in 0..n_bodies {
            let bv = bvar(b as u32);
            let mut def = vec![Lit::new(bv, true)];
            for &a in &e.body_pos[b].clone() {
                e.add_clause(vec![Lit::new(bv, false), Lit::new(a, true)]);
                def.push(Lit::new(a, false));
            }
            for &a in &body_neg[b] {
                e.add_clause(vec![Lit::new(bv, false), Lit::new(a, false)]);
                def.push(Lit::new(a, true));
            }
            e.add_clause(def);
        }
        for b in constraints {
            e.add_clause(vec![Lit::new(bvar(b), false)]);
        }
        for (h, b) in definite {
            e.add_clause(vec![Lit::new(bvar(b), false), Lit::new(h, true)]);
        }
        for a in 0..n_atoms {
            let mut sup = vec![Lit::new(a as u32, false)];
            let mut bodies: Vec<u32> = e.head_rules[a].iter().map(|&r| e.rule_body[r as usize]).collect();
            bodies.sort_unstable();
            bodies.dedup();
            sup.extend(bodies.into_iter().map(|b| Lit::new(bvar(b), true)));
            e.add_clause(sup);
        }
        e
    }

    pub(crate) fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    /// Stops the search after `n` more conflicts.
    pub(crate) fn set_conflict_budget(&mut self, n: Option<u64>) {
        self.conflict_limit = n.map(|n| self.conflicts + n);
    }

    /// Requires at most `bound` of `atoms` to be true.
    pub(crate) fn set_bound(&mut self, atoms: &[AtomId], bound: usize) {
        let lits = atoms.iter().map(|&a| Lit::new(a, true)).collect();
        self.card = Some((lits, bound));
        self.dirty = true;
    }

    fn value(&self, l: Lit) -> i8 {
        let v = self.assign[l.var()];
        if l.is_neg() {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var();
        self.assign[v] = if l.is_neg() { -1 } else { 1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail_pos[v] = self.trail.len();
        self.trail.push(l);
        if l.is_neg() && v >= self.n_atoms && self.feeds_cycle[v - self.n_atoms] {
            self.dirty = true;
        }
    }

    /// Adds a clause at the current state. Returns a conflicting clause id if
    /// every literal is false.
    fn add_clause(&mut self, mut lits: Vec<Lit>) -> Option<u32> {
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var() == w[1].var()) {
            return None;
        }
        self.attach(lits, false)
    }

    fn attach(&mut self, mut lits: Vec<Lit>, learnt: bool) -> Option<u32> {
        if lits.is_empty() {
            self.unsat = true;
            return None;
        }
        // watch the two best literals: non-false first, then false by
        // decreasing level
        let key = |l: Lit| {
            let v = self.value(l);
            (v == -1, std::cmp::Reverse(if v == -1 { self.level[l.var()] } else { u32::MAX }))
        };
        for w in 0..lits.len().min(2) {
            let best = (w..lits.len()).min_by_key(|&i| key(lits[i])).unwrap_or(w);
            lits.swap(w, best);
        }
        let id = self.clauses.len() as u32;
        if learnt {
            self.learnt_count += 1;
        }
        let first = lits[0];
        let first_val = self.value(first);
        let second_false = lits.len() < 2 || self.value(lits[1]) == -1;
        if lits.len() >= 2 {
            self.watches[lits[0].idx()].push(id);
            self.watches[lits[1].idx()].push(id);
        }
        self.clauses.push(Clause {
            lits,
            learnt,
            deleted: false,
        });
        if first_val == -1 {
            if self.decision_level() == 0 {
                self.unsat = true;
            }
            return Some(id);
        }
        if first_val == 0 && second_false {
            if lits_len_is_one(&self.clauses[id as usize]) && self.decision_level() > 0 {
                // unit facts belong to level 0
                self.clauses[id as usize].learnt = false;
            }
            self.enqueue(first, id);
        }
        None
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = p.negate();
            let mut ws = std::mem::take(&mut self.watches[false_lit.idx()]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let cid = ws[i];
                let c = &mut self.clauses[cid as usize];
                if c.deleted {
                    ws.swap_remove(i);
                    continue;
                }
                if c.lits[0] == false_lit {
                    c.lits.swap(0, 1);
                }
                let other = c.lits[0];
                let other_val = {
                    let v = self.assign[other.var()];
                    if other.is_neg() {
                        -v
                    } else {
                        v
                    }
                };
                if other_val == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.lits.len() {
                    let l = c.lits[k];
                    let v = self.assign[l.var()];
                    let lv = if l.is_neg() { -v } else { v };
                    if lv != -1 {
                        c.lits.swap(1, k);
                        self.watches[c.lits[1].idx()].push(cid);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    ws.swap_remove(i);
                    continue;
                }
                if other_val == -1 {
                    conflict = Some(cid);
                    break;
                }
                self.enqueue(other, cid);
                i += 1;
            }
            let rest = std::mem::take(&mut self.watches[false_lit.idx()]);
            ws.extend(rest);
            self.watches[false_lit.idx()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    /// Cardinality bound propagation; returns a conflict clause if violated.
    fn propagate_card(&mut self) -> Option<u32> {
        let (lits, bound) = self.card.as_ref()?;
        let bound = *bound;
        if lits.iter().filter(|&&l| self.value(l) == 1).count() < bound {
            return None;
        }
        let trues: Vec<Lit> = lits.iter().copied().filter(|&l| self.value(l) == 1).collect();
        if trues.len() > bound {
            let clause: Vec<Lit> = trues[..=bound].iter().map(|l| l.negate()).collect();
            return self.attach_learnt_reason(clause);
        }
        if trues.len() == bound {
            let open: Vec<Lit> = lits.iter().copied().filter(|&l| self.value(l) == 0).collect();
            for l in open {
                self.enqueue(l.negate(), CARD);
            }
        }
        None
    }

    /// The clause behind `p` having been implied by the bound: the bound
    /// literals true before it, negated, and `p`.
    fn card_reason(&self, p: Lit) -> Vec<Lit> {
        let at = self.trail_pos[p.var()];
        let mut clause = vec![p];
        if let Some((lits, _)) = &self.card {
            clause.extend(
                lits.iter()
                    .filter(|&&l| self.value(l) == 1 && self.trail_pos[l.var()] < at)
                    .map(|l| l.negate()),
            );
        }
        clause
    }

    fn attach_learnt_reason(&mut self, clause: Vec<Lit>) -> Option<u32> {
        self.attach(clause, true)
    }

    /// Greatest-unfounded-set propagation.
    fn propagate_unfounded(&mut self) -> Option<u32> {
        if !self.dirty {
            return None;
        }
        self.dirty = false;
        let n_bodies = self.body_pos.len();
        // non-cyclic atoms that are not false count as supported
        let mut missing = self.cyclic_in_body.clone();
        let mut supported = vec![false; self.n_atoms];
        let mut queue: Vec<u32> = (0..n_bodies as u32).filter(|&b| missing[b as usize] == 0).collect();
        while let Some(b) = queue.pop() {
            if self.assign[self.n_atoms + b as usize] == -1 {
                continue;
            }
            for &r in &self.body_rules[b as usize] {
                let h = self.rule_head[r as usize] as usize;
                if self.cyclic[h] && !supported[h] {
                    supported[h] = true;
                    for &b2 in &self.pos_occ[h] {
                        missing[b2 as usize] -= 1;
                        if missing[b2 as usize] == 0 {
                            queue.push(b2);
                        }
                    }
                }
            }
        }
        let unfounded: Vec<usize> = (0..self.n_atoms)
            .filter(|&a| self.cyclic[a] && !supported[a] && self.assign[a] != -1)
            .collect();
        if unfounded.is_empty() {
            return None;
        }
        let mut in_set = vec![false; self.n_atoms];
        for &a in &unfounded {
            in_set[a] = true;
        }
        // Every non-false body of an atom in the set has a positive atom in
        // the set, so the closure of one atom under those atoms is itself
        // unfounded, and usually has far fewer external bodies.
        let mut covered = vec![false; self.n_atoms];
        let mut in_comp = vec![false; self.n_atoms];
        // true atoms first so a conflict is reported before propagating
        let mut order = unfounded;
        order.sort_by_key(|&a| self.assign[a] != 1);
        for start in order {
            if covered[start] || self.assign[start] == -1 {
                continue;
            }
            let mut comp = vec![start];
            in_comp[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let a = comp[i];
                i += 1;
                for &r in &self.head_rules[a] {
                    let b = self.rule_body[r as usize] as usize;
                    if self.assign[self.n_atoms + b] == -1 {
                        continue;
                    }
                    for &p in &self.body_pos[b] {
                        let p = p as usize;
                        if in_set[p] && !in_comp[p] {
                            in_comp[p] = true;
                            comp.push(p);
                        }
                    }
                }
            }
            let mut external: Vec<u32> = Vec::new();
            for &a in &comp {
                for &r in &self.head_rules[a] {
                    let b = self.rule_body[r as usize];
                    if !self.body_pos[b as usize].iter().any(|&p| in_comp[p as usize]) {
                        external.push(b);
                    }
                }
            }
            external.sort_unstable();
            external.dedup();
            for &a in &comp {
                in_comp[a] = false;
            }
            for a in comp {
                if covered[a] || self.assign[a] == -1 {
                    continue;
                }
                covered[a] = true;
                let mut clause = vec![Lit::new(a as u32, false)];
                clause.extend(external.iter().map(|&b| Lit::new((self.n_atoms + b as usize) as u32, true)));
                if let Some(c) = self.attach(clause, true) {
                    return Some(c);
                }
            }
        }
        None
    }

    fn full_propagate(&mut self) -> Option<u32> {
        loop {
            if let Some(c) = self.propagate() {
                return Some(c);
            }
            if let Some(c) = self.propagate_card() {
                return Some(c);
            }
            if self.qhead < self.trail.len() {
                continue;
            }
            if let Some(c) = self.propagate_unfounded() {
                return Some(c);
            }
            if self.qhead == self.trail.len() {
                return None;
            }
        }
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for l in self.trail.drain(lim..) {
            let v = l.var();
            if v < self.n_atoms {
                self.phase[v] = !l.is_neg();
            }
            self.assign[v] = 0;
            self.reason[v] = NONE;
        }
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
        self.dirty = self.has_cycles;
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut counter = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let mut confl = confl;
        let cur = self.decision_level();
        loop {
            let lits = match p {
                Some(p) if confl == CARD => self.card_reason(p),
                _ => self.clauses[confl as usize].lits.clone(),
            };
            for &q in &lits {
                if Some(q) == p {
                    continue;
                }
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= cur {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            self.seen[lit.var()] = false;
            counter -= 1;
            if counter == 0 {
                learnt[0] = lit.negate();
                break;
            }
            p = Some(lit);
            confl = self.reason[lit.var()];
            debug_assert!(confl != NONE);
        }
        for l in &learnt[1..] {
            self.seen[l.var()] = false;
        }
        let bt = learnt[1..].iter().map(|l| self.level[l.var()]).max().unwrap_or(0);
        (learnt, bt)
    }

    fn bump(&mut self, v: usize) {
        if v >= self.n_atoms {
            return;
        }
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
    }

    fn pick_branch(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for a in 0..self.n_atoms {
            if self.assign[a] == 0 && best.is_none_or(|b| self.activity[a] > self.activity[b]) {
                best = Some(a);
            }
        }
        best
    }

    fn reduce_db(&mut self) {
        let mut locked = vec![false; self.clauses.len()];
        for l in &self.trail {
            let r = self.reason[l.var()];
            if r != NONE && r != CARD {
                locked[r as usize] = true;
            }
        }
        let mut candidates: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| self.clauses[i].learnt && !self.clauses[i].deleted && !locked[i] && self.clauses[i].lits.len() > 2)
            .collect();
        candidates.sort_by_key(|&i| std::cmp::Reverse(self.clauses[i].lits.len()));
        for &i in candidates.iter().take(candidates.len() / 2) {
            self.clauses[i].deleted = true;
            self.clauses[i].lits = Vec::new();
            self.learnt_count -= 1;
        }
    }

    fn timed_out(&mut self) -> bool {
        self.ticks += 1;
        if self.ticks % 64 != 0 {
            return false;
        }
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Searches for the next model. Models are total over atoms.
    pub(crate) fn next_model(&mut self) -> Step {
        if self.unsat {
            return Step::Done(Stop::Exhausted);
        }
        loop {
            if self.timed_out() {
                return Step::Done(Stop::Timeout);
            }
            if let Some(confl) = self.full_propagate() {
                if self.decision_level() == 0 || self.unsat {
                    self.unsat = true;
                    return Step::Done(Stop::Exhausted);
                }
                let (learnt, bt) = self.analyze(confl);
                self.var_inc /= DECAY;
                self.conflicts += 1;
                if self.conflict_limit.is_some_and(|l| self.conflicts >= l) {
                    self.backtrack(0);
                    return Step::Done(Stop::ConflictLimit);
                }
                self.backtrack(bt);
                if self.learnt_count > LEARNT_LIMIT {
                    self.reduce_db();
                }
                if let Some(_c) = self.attach(learnt, true) {
                    // cannot happen: the asserting literal is unassigned
                    self.unsat = true;
                    return Step::Done(Stop::Exhausted);
                }
                continue;
            }
            if self.conflicts >= self.next_restart {
                self.restarts += 1;
                self.next_restart = self.conflicts + RESTART_UNIT * luby(self.restarts + 1);
                self.backtrack(0);
                continue;
            }
            match self.pick_branch() {
                Some(a) => {
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(Lit::new(a as u32, self.phase[a]), NONE);
                }
                None => {
                    let model = (0..self.n_atoms).map(|a| self.assign[a] == 1).collect();
                    return Step::Model(model);
                }
            }
        }
    }

    /// Excludes the current model and prepares the search for the next one.
    pub(crate) fn block_current(&mut self) {
        let decisions: Vec<Lit> = self.trail_lim.iter().map(|&i| self.trail[i].negate()).collect();
        if decisions.is_empty() {
            self.unsat = true;
            return;
        }
        let top = self.decision_level();
        self.backtrack(top - 1);
        if self.attach(decisions, false).is_some() {
            self.unsat = true;
        }
    }

    /// Restarts from the root keeping learnt clauses (used when tightening
    /// the cardinality bound).
    pub(crate) fn restart(&mut self) {
        self.backtrack(0);
    }
}

/// Atoms in a nontrivial strongly connected component (or on a self-loop)
/// of the positive dependency graph, by an iterative Tarjan search.
fn cyclic_atoms(n: usize, rule_head: &[u32], rule_body: &[u32], body_pos: &[Vec<u32>]) -> Vec<bool> {
    let mut succ: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut cyclic = vec![false; n];
    for (&h, &b) in rule_head.iter().zip(rule_body) {
        for &p in &body_pos[b as usize] {
            if p == h {
                cyclic[h as usize] = true;
            }
            succ[h as usize].push(p);
        }
    }
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next = 0u32;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(u32, usize)> = vec![(root as u32, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            let v = v as usize;
            if *i < succ[v].len() {
                let w = succ[v][*i] as usize;
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(u, _)) = call.last() {
                low[u as usize] = low[u as usize].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack") as usize;
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                if comp.len() > 1 {
                    for w in comp {
                        cyclic[w] = true;
                    }
                }
            }
        }
    }
    cyclic
}

fn lits_len_is_one(c: &Clause) -> bool {
    c.lits.len() == 1
}
