//! Grounding: instantiation of rules over sort domains.
//!
//! Two modes exist. [`GroundMode::Full`] emits every instance whose sorted
//! arguments respect the declared domains. [`GroundMode::Pruned`] first
//! computes the atoms that can possibly be derived (a fixpoint over the
//! positive part of the program, negation ignored) and only instantiates rules
//! whose positive bodies are possible; negative literals over impossible
//! atoms are dropped. Both modes evaluate builtin comparisons and drop
//! instances with a false comparison.

use std::collections::{BTreeMap, HashMap, HashSet};

use std::fmt;

use crate::syntax::{Atom, Constant, Program, Rule, Term};
use crate::{Error, Result};

pub type AtomId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<Constant>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Constant>) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn to_atom(&self) -> Atom {
        Atom::ground(self.predicate.clone(), self.args.clone())
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_atom().fmt(f)
    }
}

/// Bijection between ground atoms and dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, AtomId>,
}

impl AtomTable {
    pub fn intern(&mut self, atom: GroundAtom) -> AtomId {
        if let Some(&id) = self.index.get(&atom) {
            return id;
        }
        let id = self.atoms.len() as AtomId;
        self.atoms.push(atom.clone());
        self.index.insert(atom, id);
        id
    }

    pub fn get(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id as usize]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, &GroundAtom)> {
        self.atoms.iter().enumerate().map(|(i, a)| (i as AtomId, a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundRule {
    pub head: Option<AtomId>,
    pub choice: bool,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
    /// Index of the non-ground rule this instance came from, if any.
    pub origin: Option<usize>,
    /// Values of the origin rule's variables, in `Rule::variables` order.
    pub subst: Vec<Constant>,
}

impl GroundRule {
    pub fn is_constraint(&self) -> bool {
        self.head.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
    pub atoms: AtomTable,
}

impl GroundProgram {
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Adds a rule whose atoms are all ground. Comparisons must already be
    /// evaluated; a false comparison drops the rule.
    pub fn add_rule(&mut self, rule: &Rule, origin: Option<usize>) -> Result<()> {
        self.add_instance(rule, origin, Vec::new())
    }

    pub fn add_instance(&mut self, rule: &Rule, origin: Option<usize>, subst: Vec<Constant>) -> Result<()> {
        let to_id = |atoms: &mut AtomTable, a: &Atom| -> Result<AtomId> {
            let args = a
                .constants()
                .ok_or_else(|| Error::Invalid(format!("atom `{a}` is not ground")))?;
            Ok(atoms.intern(GroundAtom::new(a.predicate.clone(), args)))
        };
        for c in &rule.relations {
            match c.eval_ground() {
                Some(true) => {}
                Some(false) => return Ok(()),
                None => return Err(Error::Invalid(format!("comparison `{c}` is not ground"))),
            }
        }
        let head = rule.head.as_ref().map(|h| to_id(&mut self.atoms, h)).transpose()?;
        let pos = rule
            .body_pos
            .iter()
            .map(|a| to_id(&mut self.atoms, a))
            .collect::<Result<_>>()?;
        let neg = rule
            .body_neg
            .iter()
            .map(|a| to_id(&mut self.atoms, a))
            .collect::<Result<_>>()?;
        self.rules.push(GroundRule {
            head,
            choice: rule.choice,
            pos,
            neg,
            origin,
            subst,
        });
        Ok(())
    }

    pub fn to_rule(&self, r: &GroundRule) -> Rule {
        let atom = |id: &AtomId| self.atoms.atom(*id).to_atom();
        Rule {
            head: r.head.as_ref().map(atom),
            choice: r.choice,
            body_pos: r.pos.iter().map(atom).collect(),
            body_neg: r.neg.iter().map(atom).collect(),
            relations: Vec::new(),
        }
    }

    /// Converts back to a (ground) program carrying the sort structure of
    /// `like`.
    pub fn to_program(&self, like: &Program) -> Program {
        let mut p = Program {
            sort_decls: like.sort_decls.clone(),
            sort_signature: like.sort_signature.clone(),
            objects: like.objects.clone(),
            ..Default::default()
        };
        for r in &self.rules {
            let rule = self.to_rule(r);
            if rule.is_fact() {
                p.facts.push(rule.head.unwrap());
            } else {
                p.rules.push(rule);
            }
        }
        p
    }

    pub fn is_ground_atom_true_fact(&self, id: AtomId) -> bool {
        self.rules
            .iter()
            .any(|r| r.head == Some(id) && !r.choice && r.pos.is_empty() && r.neg.is_empty())
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{}", self.to_rule(r))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroundMode {
    #[default]
    Full,
    Pruned,
}

/// Grounds `p` emitting every domain-respecting instance.
pub fn ground(p: &Program) -> Result<GroundProgram> {
    ground_with(p, GroundMode::Full)
}

pub fn ground_with(p: &Program, mode: GroundMode) -> Result<GroundProgram> {
    let mut g = GroundProgram::default();
    for f in &p.facts {
        g.add_rule(&Rule::fact(f.clone()), None)?;
    }
    match mode {
        GroundMode::Full => {
            for (idx, r) in p.rules.iter().enumerate() {
                for (inst, subst) in instantiate_full(p, r)? {
                    g.add_instance(&inst, Some(idx), subst)?;
                }
            }
        }
        GroundMode::Pruned => {
            let possible = possible_atoms(p)?;
            for (idx, r) in p.rules.iter().enumerate() {
                for (mut inst, subst) in instantiate_join(p, r, &possible, true)? {
                    inst.body_neg.retain(|a| possible.contains_atom(a));
                    g.add_instance(&inst, Some(idx), subst)?;
                }
            }
        }
    }
    Ok(g)
}

type Binding = BTreeMap<String, Constant>;

fn substitute(t: &Term, b: &Binding) -> Option<Constant> {
    match t {
        Term::Const(c) => Some(c.clone()),
        Term::Var(v) => b.get(v).cloned(),
    }
}

fn apply(a: &Atom, b: &Binding) -> Atom {
    Atom::new(
        a.predicate.clone(),
        a.args
            .iter()
            .map(|t| match substitute(t, b) {
                Some(c) => Term::Const(c),
                None => t.clone(),
            })
            .collect(),
    )
}

fn apply_rule(r: &Rule, b: &Binding, p: &Program) -> Rule {
    Rule {
        head: r.head.as_ref().map(|h| apply(h, b)),
        choice: r.choice,
        body_pos: r
            .body_pos
            .iter()
            .filter(|a| !p.is_domain_atom(a))
            .map(|a| apply(a, b))
            .collect(),
        body_neg: r.body_neg.iter().map(|a| apply(a, b)).collect(),
        relations: r
            .relations
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.lhs = substitute(&c.lhs, b).map(Term::Const).unwrap_or(c.lhs);
                c.rhs = substitute(&c.rhs, b).map(Term::Const).unwrap_or(c.rhs);
                c
            })
            .collect(),
    }
}

fn subst_of(r: &Rule, b: &Binding) -> Vec<Constant> {
    r.variables().iter().filter_map(|v| b.get(v).cloned()).collect()
}

fn comparisons_ok(r: &Rule, b: &Binding) -> bool {
    r.relations.iter().all(|c| match (substitute(&c.lhs, b), substitute(&c.rhs, b)) {
        (Some(x), Some(y)) => c.op.eval(&x, &y),
        _ => true,
    })
}

/// Domain of each variable from sorted positive body positions.
fn variable_sorts<'a>(p: &'a Program, r: &Rule) -> BTreeMap<String, &'a str> {
    let mut out = BTreeMap::new();
    for a in &r.body_pos {
        for (i, t) in a.args.iter().enumerate() {
            let Some(v) = t.as_var() else { continue };
            let sort = if a.arity() == 1 && p.sort_decls.contains_key(&a.predicate) {
                p.sort_decls.get_key_value(&a.predicate).map(|(k, _)| k.as_str())
            } else if let Some(o) = p.object(&a.predicate).filter(|o| o.sorts.len() == a.arity()) {
                Some(o.sorts[i].as_str())
            } else {
                p.sort_of(&a.predicate, a.arity(), i)
            };
            if let Some(s) = sort {
                out.entry(v.to_string()).or_insert(s);
            }
        }
    }
    out
}

fn instantiate_full(p: &Program, r: &Rule) -> Result<Vec<(Rule, Vec<Constant>)>> {
    let sorts = variable_sorts(p, r);
    let vars = r.variables();
    for v in &vars {
        match sorts.get(v) {
            None => {
                return Err(Error::UnboundVariable {
                    var: v.clone(),
                    rule: r.to_string(),
                })
            }
            Some(s) if p.sort_decls[*s].is_empty() => return Err(Error::EmptySort(s.to_string())),
            _ => {}
        }
    }
    let mut out = Vec::new();
    let mut binding = Binding::new();
    fn go(
        p: &Program,
        r: &Rule,
        vars: &[String],
        sorts: &BTreeMap<String, &str>,
        b: &mut Binding,
        out: &mut Vec<(Rule, Vec<Constant>)>,
    ) {
        if !comparisons_ok(r, b) {
            return;
        }
        let Some((v, rest)) = vars.split_first() else {
            let domain_ok = r.body_pos.iter().filter(|a| p.is_domain_atom(a)).all(|a| {
                let args: Vec<Constant> = a.args.iter().filter_map(|t| substitute(t, b)).collect();
                p.domain_contains(&a.predicate, &args)
            });
            if domain_ok {
                out.push((apply_rule(r, b, p), subst_of(r, b)));
            }
            return;
        };
        for c in &p.sort_decls[sorts[v]] {
            b.insert(v.clone(), c.clone());
            go(p, r, rest, sorts, b, out);
        }
        b.remove(v);
    }
    go(p, r, &vars, &sorts, &mut binding, &mut out);
    Ok(out)
}

/// Tuples per predicate with lazily built indexes on bound positions.
#[derive(Debug, Default)]
struct Relations {
    tuples: HashMap<(String, usize), Vec<Vec<Constant>>>,
    members: HashSet<GroundAtom>,
    indexes: std::cell::RefCell<HashMap<(String, usize, u64), HashMap<Vec<Constant>, Vec<usize>>>>,
}

impl Relations {
    fn insert(&mut self, a: GroundAtom) -> bool {
        if self.members.contains(&a) {
            return false;
        }
        self.tuples
            .entry((a.predicate.clone(), a.args.len()))
            .or_default()
            .push(a.args.clone());
        self.members.insert(a);
        self.indexes.borrow_mut().clear();
        true
    }

    fn contains_atom(&self, a: &Atom) -> bool {
        a.constants()
            .is_some_and(|args| self.members.contains(&GroundAtom::new(a.predicate.clone(), args)))
    }

    fn candidates(&self, pred: &str, arity: usize, bound: &[Option<Constant>]) -> Vec<Vec<Constant>> {
        let Some(all) = self.tuples.get(&(pred.to_string(), arity)) else {
            return Vec::new();
        };
        let mask: u64 = bound
            .iter()
            .enumerate()
            .filter(|(_, b)| b.is_some())
            .fold(0, |m, (i, _)| m | (1 << i));
        if mask == 0 {
            return all.clone();
        }
        let key: Vec<Constant> = bound.iter().flatten().cloned().collect();
        let mut idx = self.indexes.borrow_mut();
        let index = idx.entry((pred.to_string(), arity, mask)).or_insert_with(|| {
            let mut m: HashMap<Vec<Constant>, Vec<usize>> = HashMap::new();
            for (i, t) in all.iter().enumerate() {
                let k: Vec<Constant> = (0..arity)
                    .filter(|j| mask & (1 << j) != 0)
                    .map(|j| t[j].clone())
                    .collect();
                m.entry(k).or_default().push(i);
            }
            m
        });
        index
            .get(&key)
            .map(|ids| ids.iter().map(|&i| all[i].clone()).collect())
            .unwrap_or_default()
    }
}

fn domain_tuples(p: &Program, a: &Atom) -> Vec<Vec<Constant>> {
    if a.arity() == 1 {
        if let Some(d) = p.sort_decls.get(&a.predicate) {
            return d.iter().map(|c| vec![c.clone()]).collect();
        }
    }
    p.object(&a.predicate)
        .map(|o| p.object_tuples(o))
        .unwrap_or_default()
}

/// Join-based instantiation of `r` against the atoms in `rels`. With
/// `check_safety`, variables left unbound after the join are an error;
/// otherwise such instances are skipped.
fn instantiate_join(
    p: &Program,
    r: &Rule,
    rels: &Relations,
    check_safety: bool,
) -> Result<Vec<(Rule, Vec<Constant>)>> {
    let mut out = Vec::new();
    let mut remaining: Vec<&Atom> = r.body_pos.iter().collect();
    let vars = r.variables();
    let mut binding = Binding::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        p: &Program,
        r: &Rule,
        rels: &Relations,
        remaining: &mut Vec<&Atom>,
        vars: &[String],
        b: &mut Binding,
        out: &mut Vec<(Rule, Vec<Constant>)>,
        unsafe_var: &mut Option<String>,
    ) {
        if !comparisons_ok(r, b) {
            return;
        }
        if remaining.is_empty() {
            if let Some(v) = vars.iter().find(|v| !b.contains_key(*v)) {
                *unsafe_var = Some(v.clone());
                return;
            }
            out.push((apply_rule(r, b, p), subst_of(r, b)));
            return;
        }
        // most-bound atom next; domain atoms only when nothing else is left
        let pick = (0..remaining.len())
            .max_by_key(|&i| {
                let a = remaining[i];
                let bound = a.args.iter().filter(|t| substitute(t, b).is_some()).count();
                let program_atom = !p.is_domain_atom(a);
                (bound == a.arity(), program_atom, bound, std::cmp::Reverse(i))
            })
            .unwrap();
        let atom = remaining.remove(pick);
        let bound: Vec<Option<Constant>> = atom.args.iter().map(|t| substitute(t, b)).collect();
        let cands = if p.is_domain_atom(atom) {
            domain_tuples(p, atom)
                .into_iter()
                .filter(|t| bound.iter().zip(t).all(|(b, c)| b.as_ref().is_none_or(|b| b == c)))
                .collect()
        } else {
            rels.candidates(&atom.predicate, atom.arity(), &bound)
        };
        for tuple in cands {
            let mut added = Vec::new();
            let mut ok = true;
            for (t, c) in atom.args.iter().zip(&tuple) {
                if let Term::Var(v) = t {
                    match b.get(v) {
                        Some(x) if x != c => {
                            ok = false;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            b.insert(v.clone(), c.clone());
                            added.push(v.clone());
                        }
                    }
                }
            }
            if ok {
                go(p, r, rels, remaining, vars, b, out, unsafe_var);
            }
            for v in added {
                b.remove(&v);
            }
        }
        remaining.insert(pick, atom);
    }
    let mut unsafe_var = None;
    go(p, r, rels, &mut remaining, &vars, &mut binding, &mut out, &mut unsafe_var);
    if let (true, Some(v)) = (check_safety, unsafe_var) {
        return Err(Error::UnboundVariable {
            var: v,
            rule: r.to_string(),
        });
    }
    Ok(out)
}

/// Least fixpoint of the positive relaxation of `p` (negation and choice
/// ignored): an over-approximation of every answer set.
fn possible_atoms(p: &Program) -> Result<Relations> {
    let mut rels = Relations::default();
    for f in &p.facts {
        if let Some(args) = f.constants() {
            rels.insert(GroundAtom::new(f.predicate.clone(), args));
        }
    }
    let generating: Vec<&Rule> = p.rules.iter().filter(|r| r.head.is_some()).collect();
    loop {
        let mut changed = false;
        for r in &generating {
            for (inst, _) in instantiate_join(p, r, &rels, false)? {
                let h = inst.head.unwrap();
                if let Some(args) = h.constants() {
                    changed |= rels.insert(GroundAtom::new(h.predicate, args));
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(rels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn rules_text(g: &GroundProgram) -> Vec<String> {
        g.rules.iter().map(|r| g.to_rule(r).to_string()).collect()
    }

    #[test]
    fn full_mode_emits_every_domain_instance() {
        let p = parse_program("#sort s = {a,b}. #bind p/1 1 s. #bind q/1 1 s. p(a). q(X) :- p(X).").unwrap();
        let g = ground(&p).unwrap();
        assert_eq!(rules_text(&g), vec!["p(a).", "q(a) :- p(a).", "q(b) :- p(b)."]);
        let pruned = ground_with(&p, GroundMode::Pruned).unwrap();
        assert_eq!(rules_text(&pruned), vec!["p(a).", "q(a) :- p(a)."]);
    }

    #[test]
    fn comparisons_filter_instances() {
        // all four (X1,X2) pairs over rows {1,2}: only (1,2) survives X1 < X2
        let p = parse_program(
            "#sort row = 1..2. #bind s/1 1 row.\n:- s(X1), s(X2), X1 < X2.",
        )
        .unwrap();
        let g = ground(&p).unwrap();
        assert_eq!(rules_text(&g), vec![":- s(1), s(2)."]);
    }

    #[test]
    fn unbound_variable_is_reported() {
        let p = parse_program("q(X) :- not p(X).").unwrap();
        assert!(matches!(ground(&p), Err(Error::UnboundVariable { .. })));
        assert!(matches!(
            ground_with(&p, GroundMode::Pruned),
            Err(Error::UnboundVariable { .. })
        ));
    }

    #[test]
    fn empty_sort_is_reported() {
        let p = parse_program("#sort s = {}. #bind p/1 1 s. q :- p(X).").unwrap();
        assert!(matches!(ground(&p), Err(Error::EmptySort(_))));
    }

    #[test]
    fn domain_atoms_generate_bindings() {
        let p = parse_program(
            "#sort row = 1..2. #sort col = 1..2. #object cell(row,col) = {(1,1),(2,2)}.\n\
             #bind ok/2 1 row. #bind ok/2 2 col.\n:- cell(X,Y), not ok(X,Y).",
        )
        .unwrap();
        let g = ground_with(&p, GroundMode::Pruned).unwrap();
        // ok/2 is never derivable, so the negative literal disappears and
        // each object tuple yields its own (violated) constraint instance
        assert_eq!(rules_text(&g), vec![":- .", ":- ."]);
        assert_eq!(g.rules[0].subst, vec![Constant::Int(1), Constant::Int(1)]);
        assert_eq!(g.rules[1].subst, vec![Constant::Int(2), Constant::Int(2)]);
    }

    #[test]
    fn grounding_is_idempotent() {
        let p = parse_program(
            "#sort s = 1..3. #bind e/2 1 s. #bind e/2 2 s. #bind r/1 1 s. #bind x/1 1 s.\n\
             e(1,2). e(2,3). r(1).\nr(Y) :- r(X), e(X,Y).\n{x(X)} :- r(X).\n:- x(X), x(Y), X < Y.",
        )
        .unwrap();
        for mode in [GroundMode::Full, GroundMode::Pruned] {
            let g = ground_with(&p, mode).unwrap();
            let again = ground_with(&g.to_program(&p), mode).unwrap();
            assert_eq!(rules_text(&g), rules_text(&again));
            let ids: Vec<_> = g.atoms.iter().map(|(_, a)| a.clone()).collect();
            let ids2: Vec<_> = again.atoms.iter().map(|(_, a)| a.clone()).collect();
            assert_eq!(ids, ids2);
        }
    }
}
