//! Construction of the abstract program for a domain mapping.
//!
//! Each rule is standardized apart on the mapped sorts, its comparisons over
//! mapped sorts become one (joint) abstract relation whose types are
//! materialized as facts, and the rule is replaced by
//!
//! * a copy guarded by type I,
//! * a choice copy guarded by type III (rules with a head only),
//! * for every nonempty subset `L` of the negative body, choice copies with
//!   `L` moved to the positive body, guarded by type I or III and by
//!   `isCluster` on one argument of a moved literal.
//!
//! A moved literal whose predicate may depend on the head would give the
//! head positive support through itself. Such a literal `q(X)` is written as
//! `not neg_q(X)` instead, with `neg_q(X) :- s(X), not q(X).` added once.
//!
//! Over jointly mapped sorts the sort atoms (`row(X)`, `column(Y)`) are
//! replaced by the object predicate (`cell(X,Y)`).

use std::collections::{BTreeMap, BTreeSet};

use crate::ground::{GroundAtom, GroundProgram};
use crate::mapping::{compute_joint_rel_types, domain_tuples, DomainMapping, JointRelation, Operand, RelAtom, RelType, RelTypeSet};
use crate::solver::Interpretation;
use crate::normalize::{sort_at, standardize_apart, var_sorts};
use crate::syntax::{Atom, Constant, ObjectDecl, Program, Rule, Term};
use crate::{Error, Result};

pub const IS_CLUSTER: &str = "isCluster";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AbstractOptions {
    /// Guard each type-III guess with `isCluster` on a relation argument.
    pub tighten: bool,
}

/// The abstraction of one rule.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractRule {
    pub rules: Vec<Rule>,
    /// Type predicate, its argument sorts, and the type table.
    pub relation: Option<(String, Vec<String>, RelTypeSet)>,
}

#[derive(Debug, Clone)]
pub struct AbstractProgram {
    /// The complete abstract program, facts included.
    pub program: Program,
    /// Source rule index of every rule in `program.rules`; `usize::MAX` for
    /// complement definitions.
    pub origin: Vec<usize>,
    pub tau_facts: Vec<Atom>,
    pub cluster_facts: Vec<Atom>,
    /// Object predicate replacing the sort atoms of a joint mapping.
    pub sort_object: Option<String>,
    pub rel_types: BTreeMap<String, RelTypeSet>,
    /// Complement predicates in use: name to (predicate, argument sorts).
    pub complements: BTreeMap<String, (String, Vec<String>)>,
}

impl AbstractProgram {
    /// Is `pred` one of the auxiliary predicates (type facts, `isCluster`)
    /// that make up T_m?
    pub fn is_aux_predicate(&self, pred: &str) -> bool {
        pred == IS_CLUSTER || self.rel_types.contains_key(pred) || self.complements.contains_key(pred)
    }

    /// The auxiliary facts T_m.
    pub fn aux_facts(&self) -> impl Iterator<Item = &Atom> {
        self.tau_facts.iter().chain(&self.cluster_facts)
    }

    /// m(I) together with T_m, as ground atoms.
    pub fn image<'a>(
        &self,
        p: &Program,
        m: &DomainMapping,
        atoms: impl IntoIterator<Item = &'a GroundAtom>,
    ) -> Result<BTreeSet<GroundAtom>> {
        let mut out = BTreeSet::new();
        for a in atoms {
            out.insert(m.lift_atom(p, a)?);
        }
        for f in self.aux_facts() {
            out.insert(GroundAtom::new(f.predicate.clone(), f.constants().expect("facts are ground")));
        }
        let mut comp = Vec::new();
        for (name, (pred, sorts)) in &self.complements {
            let mut tuples: Vec<Vec<Constant>> = vec![Vec::new()];
            for s in sorts {
                let dom = &self.program.sort_decls[s];
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        dom.iter().map(move |c| {
                            let mut t = t.clone();
                            t.push(c.clone());
                            t
                        })
                    })
                    .collect();
            }
            for t in tuples {
                if !out.contains(&GroundAtom::new(pred.clone(), t.clone())) {
                    comp.push(GroundAtom::new(name.clone(), t));
                }
            }
        }
        out.extend(comp);
        Ok(out)
    }

    /// The image of `atoms` as an interpretation of `abs`, or `None` if some
    /// image atom does not occur in `abs`.
    pub fn image_interpretation<'a>(
        &self,
        p: &Program,
        m: &DomainMapping,
        abs: &GroundProgram,
        atoms: impl IntoIterator<Item = &'a GroundAtom>,
    ) -> Result<Option<Interpretation>> {
        let mut ids = Vec::new();
        for a in self.image(p, m, atoms)? {
            match abs.atoms.get(&a) {
                Some(id) => ids.push(id),
                None => return Ok(None),
            }
        }
        Ok(Some(Interpretation::new(ids)))
    }
}

/// Abstracts `p` under `m`.
pub fn abstract_program(p: &Program, m: &DomainMapping, opts: AbstractOptions) -> Result<AbstractProgram> {
    for s in m.sorts() {
        if !p.sort_decls.contains_key(s) {
            return Err(Error::Abstraction(format!("mapped sort {s} is not declared")));
        }
    }
    for t in domain_tuples(p, m.sorts())? {
        if m.lift_tuple(&t).is_none() {
            return Err(Error::Mapping(format!(
                "mapping does not cover ({})",
                t.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            )));
        }
    }
    let sort_object = if m.is_joint() {
        Some(
            p.objects
                .iter()
                .find(|o| o.sorts == m.sorts())
                .map(|o| o.name.clone())
                .ok_or_else(|| {
                    Error::Abstraction(format!("no object declared over the sorts {}", m.sorts().join(", ")))
                })?,
        )
    } else {
        None
    };

    let mut out = Program {
        sort_signature: p.sort_signature.clone(),
        ..Default::default()
    };
    for (s, dom) in &p.sort_decls {
        let d = match m.sort_index(s) {
            Some(k) => m.component_labels(k),
            None => dom.clone(),
        };
        out.sort_decls.insert(s.clone(), d);
    }
    for o in &p.objects {
        out.objects.push(abstract_object(p, m, o)?);
    }

    let mut facts = BTreeSet::new();
    for f in &p.facts {
        let g = GroundAtom::new(f.predicate.clone(), f.constants().expect("facts are ground"));
        facts.insert(m.lift_atom(p, &g)?.to_atom());
    }
    out.facts = facts.into_iter().collect();

    let proper = m.proper_components();
    let cluster_facts: Vec<Atom> = proper
        .iter()
        .map(|c| Atom::ground(IS_CLUSTER, vec![c.clone()]))
        .collect();
    out.facts.extend(cluster_facts.iter().cloned());

    let env = RuleEnv {
        sort_object: sort_object.as_deref(),
        opts,
        depends: dependencies(p),
        complement_names: complement_names(p),
    };
    let mut origin = Vec::new();
    let mut tau_facts = Vec::new();
    let mut rel_types = BTreeMap::new();
    for (idx, r) in p.rules.iter().enumerate() {
        let ar = abstract_rule(p, r, idx, m, &env)?;
        if let Some((pred, sorts, types)) = ar.relation {
            for (i, s) in sorts.iter().enumerate() {
                out.sort_signature.insert((pred.clone(), sorts.len() + 1, i), s.clone());
            }
            let facts: Vec<Atom> = types.facts(&pred).iter().map(GroundAtom::to_atom).collect();
            tau_facts.extend(facts.iter().cloned());
            out.facts.extend(facts);
            rel_types.insert(pred, types);
        }
        for rule in ar.rules {
            if rule.is_fact() {
                out.facts.push(rule.head.unwrap());
            } else {
                out.rules.push(rule);
                origin.push(idx);
            }
        }
    }
    let mut complements = BTreeMap::new();
    for ((pred, arity), name) in &env.complement_names {
        let used = out.rules.iter().any(|r| r.body_neg.iter().any(|a| a.predicate == *name));
        if !used {
            continue;
        }
        let sorts: Vec<String> = (0..*arity)
            .map(|i| sort_at(p, pred, *arity, i).expect("complements need sorted positions"))
            .collect();
        let vars: Vec<Term> = (0..*arity).map(|i| Term::var(format!("V{}", i + 1))).collect();
        out.rules.push(Rule {
            head: Some(Atom::new(name.clone(), vars.clone())),
            choice: false,
            body_pos: sorts.iter().zip(&vars).map(|(s, v)| Atom::new(s.clone(), vec![v.clone()])).collect(),
            body_neg: vec![Atom::new(pred.clone(), vars)],
            relations: Vec::new(),
        });
        origin.push(usize::MAX);
        complements.insert(name.clone(), (pred.clone(), sorts));
    }
    out.validate()?;
    Ok(AbstractProgram {
        program: out,
        origin,
        tau_facts,
        cluster_facts,
        sort_object,
        rel_types,
        complements,
    })
}

/// Settings shared by all rules of one abstraction.
pub struct RuleEnv<'a> {
    pub sort_object: Option<&'a str>,
    pub opts: AbstractOptions,
    /// Predicates each predicate depends on, positively or negatively.
    pub depends: BTreeMap<String, BTreeSet<String>>,
    /// Complement predicate name for every fully sorted predicate.
    pub complement_names: BTreeMap<(String, usize), String>,
}

impl RuleEnv<'_> {
    fn may_depend(&self, from: &str, on: &str) -> bool {
        from == on || self.depends.get(from).is_some_and(|d| d.contains(on))
    }
}

/// Transitive predicate dependencies through rule bodies.
pub fn dependencies(p: &Program) -> BTreeMap<String, BTreeSet<String>> {
    let mut edges: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for r in &p.rules {
        if let Some(h) = &r.head {
            let e = edges.entry(h.predicate.clone()).or_default();
            for b in r.body_pos.iter().chain(&r.body_neg) {
                if !p.is_domain_atom(b) {
                    e.insert(b.predicate.clone());
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for start in edges.keys() {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut stack: Vec<&String> = edges[start].iter().collect();
        while let Some(n) = stack.pop() {
            if seen.insert(n.clone()) {
                stack.extend(edges.get(n).into_iter().flatten());
            }
        }
        out.insert(start.clone(), seen);
    }
    out
}

fn complement_names(p: &Program) -> BTreeMap<(String, usize), String> {
    let preds = p.predicates();
    let taken: BTreeSet<&str> = preds.iter().map(|(n, _)| n.as_str()).collect();
    let mut out = BTreeMap::new();
    for (pred, arity) in &preds {
        if !(0..*arity).all(|i| sort_at(p, pred, *arity, i).is_some()) {
            continue;
        }
        let mut name = format!("neg_{pred}");
        while taken.contains(name.as_str()) {
            name.insert(0, '_');
        }
        out.insert((pred.clone(), *arity), name);
    }
    out
}

fn abstract_object(p: &Program, m: &DomainMapping, o: &ObjectDecl) -> Result<ObjectDecl> {
    if !o.sorts.iter().any(|s| m.maps_sort(s)) {
        return Ok(o.clone());
    }
    if o.sorts == m.sorts() {
        return Ok(ObjectDecl {
            name: o.name.clone(),
            sorts: o.sorts.clone(),
            tuples: Some(m.clusters().iter().map(|c| c.label.clone()).collect()),
        });
    }
    let positions = m.object_positions(p, &o.name, o.sorts.len())?;
    let mut tuples = BTreeSet::new();
    for t in p.object_tuples(o) {
        let mut lifted = t.clone();
        for obj in &positions {
            let key: Vec<Constant> = obj.iter().map(|&i| t[i].clone()).collect();
            let label = m
                .lift_tuple(&key)
                .ok_or_else(|| Error::Mapping(format!("object {} tuple outside mapping", o.name)))?;
            for (&i, c) in obj.iter().zip(label) {
                lifted[i] = c.clone();
            }
        }
        tuples.insert(lifted);
    }
    Ok(ObjectDecl {
        name: o.name.clone(),
        sorts: o.sorts.clone(),
        tuples: Some(tuples.into_iter().collect()),
    })
}

/// An object occurrence: the terms at its positions, in sort order.
type Obj = Vec<Term>;

struct RuleCtx<'a> {
    p: &'a Program,
    m: &'a DomainMapping,
    objects: Vec<Obj>,
    sort_object: Option<&'a str>,
}

impl RuleCtx<'_> {
    /// Objects of an atom over the mapped sorts.
    fn atom_objects(&self, a: &Atom) -> Result<Vec<(Vec<usize>, Obj)>> {
        if self.is_sort_atom(a) {
            return Ok(Vec::new());
        }
        let pos = self.m.object_positions(self.p, &a.predicate, a.arity())?;
        Ok(pos
            .into_iter()
            .map(|ps| {
                let obj = ps.iter().map(|&i| a.args[i].clone()).collect();
                (ps, obj)
            })
            .collect())
    }

    /// A unary sort atom over a jointly mapped sort.
    fn is_sort_atom(&self, a: &Atom) -> bool {
        self.m.is_joint() && a.arity() == 1 && self.m.maps_sort(&a.predicate)
    }

    /// Lifts constant objects of `a`; rejects objects mixing constants and
    /// variables.
    fn lift(&self, a: &Atom) -> Result<Atom> {
        let mut out = a.clone();
        for (ps, obj) in self.atom_objects(a)? {
            let consts: Option<Vec<Constant>> = obj.iter().map(|t| t.as_const().cloned()).collect();
            match consts {
                Some(cs) => {
                    let label = self.m.lift_tuple(&cs).ok_or_else(|| Error::OutOfDomain {
                        atom: a.to_string(),
                        sort: self.m.sorts().join("×"),
                    })?;
                    for (&i, c) in ps.iter().zip(label) {
                        out.args[i] = Term::Const(c.clone());
                    }
                }
                None if obj.iter().any(|t| t.as_const().is_some()) => {
                    return Err(Error::Abstraction(format!(
                        "`{a}` mixes constants and variables in a jointly mapped object"
                    )))
                }
                None => {}
            }
        }
        Ok(out)
    }

    /// Object atoms needed so that every variable object of the rule ranges
    /// over abstract objects: objects not covered by a positive program
    /// atom.
    fn object_guards(&self, pos: &[Atom]) -> Result<Vec<Atom>> {
        let Some(name) = self.sort_object else { return Ok(Vec::new()) };
        let mut covered: BTreeSet<String> = BTreeSet::new();
        for a in pos {
            if a.predicate == name || !self.p.is_domain_atom(a) {
                covered.extend(a.vars().map(String::from));
            }
        }
        let mut out = Vec::new();
        for obj in &self.objects {
            let vars: Vec<&str> = obj.iter().filter_map(|t| t.as_var()).collect();
            if vars.len() == obj.len() && !vars.iter().all(|v| covered.contains(*v)) {
                let a = Atom::new(name, obj.clone());
                if !pos.contains(&a) && !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        Ok(out)
    }
}

/// Abstracts one rule; `idx` names its type predicate `relr<idx+1>`.
pub fn abstract_rule(
    p: &Program,
    r: &Rule,
    idx: usize,
    m: &DomainMapping,
    env: &RuleEnv,
) -> Result<AbstractRule> {
    let (sort_object, opts) = (env.sort_object, env.opts);
    let r = standardize_apart(p, r, |s| m.maps_sort(s));
    let sorts = var_sorts(p, &r);
    let mapped_var = |v: &str| sorts.get(v).is_some_and(|s| m.maps_sort(s));

    // split comparisons
    let mut kept_rel = Vec::new();
    let mut mapped_rel = Vec::new();
    for c in &r.relations {
        match c.eval_ground() {
            Some(true) => continue,
            Some(false) => return Ok(AbstractRule { rules: Vec::new(), relation: None }),
            None => {}
        }
        let vs: Vec<&str> = c.vars().collect();
        let n_mapped = vs.iter().filter(|v| mapped_var(v)).count();
        if n_mapped == 0 {
            kept_rel.push(c.clone());
        } else if n_mapped == vs.len() {
            mapped_rel.push(c.clone());
        } else {
            return Err(Error::Abstraction(format!(
                "`{c}` in rule {} mixes mapped and unmapped sorts",
                idx + 1
            )));
        }
    }

    // collect objects and check consistent pairing
    let mut ctx = RuleCtx {
        p,
        m,
        objects: Vec::new(),
        sort_object,
    };
    let mut owner: BTreeMap<String, usize> = BTreeMap::new();
    let all_atoms: Vec<&Atom> = r.head.iter().chain(&r.body_pos).chain(&r.body_neg).collect();
    for a in &all_atoms {
        if p.is_domain_atom(a) && !sort_object.is_some_and(|n| n == a.predicate) && !is_mapped_sort_atom(m, a) {
            continue;
        }
        for (_, obj) in ctx.atom_objects(a)? {
            if obj.iter().all(|t| t.as_const().is_some()) {
                continue;
            }
            let id = match ctx.objects.iter().position(|o| *o == obj) {
                Some(i) => i,
                None => {
                    ctx.objects.push(obj.clone());
                    ctx.objects.len() - 1
                }
            };
            for t in &obj {
                if let Some(v) = t.as_var() {
                    if let Some(prev) = owner.insert(v.to_string(), id) {
                        if prev != id {
                            return Err(Error::Abstraction(format!(
                                "variable {v} in rule {} belongs to two different objects",
                                idx + 1
                            )));
                        }
                    }
                }
            }
        }
    }
    if m.is_joint() {
        for a in &r.body_pos {
            if ctx.is_sort_atom(a) {
                if let Some(v) = a.args[0].as_var() {
                    if !owner.contains_key(v) {
                        return Err(Error::Abstraction(format!(
                            "variable {v} in rule {} is not paired into a {} object",
                            idx + 1,
                            sort_object.unwrap_or("joint")
                        )));
                    }
                }
            }
        }
    }

    // relation over objects
    let relation = if mapped_rel.is_empty() {
        None
    } else {
        let mut rel_objs: Vec<usize> = Vec::new();
        let mut components = vec![Vec::new(); m.sorts().len()];
        let operand = |t: &Term, rel_objs: &mut Vec<usize>| -> Result<(Operand, Option<usize>)> {
            match t {
                Term::Const(c) => Ok((Operand::Const(c.clone()), None)),
                Term::Var(v) => {
                    let k = m.sort_index(&sorts[v]).unwrap();
                    let oid = match owner.get(v) {
                        Some(&o) => o,
                        None => {
                            return Err(Error::Abstraction(format!(
                                "variable {v} of rule {} occurs only in relations",
                                idx + 1
                            )))
                        }
                    };
                    let slot = match rel_objs.iter().position(|&o| o == oid) {
                        Some(i) => i,
                        None => {
                            rel_objs.push(oid);
                            rel_objs.len() - 1
                        }
                    };
                    Ok((Operand::Slot { object: slot, component: k }, Some(k)))
                }
            }
        };
        for c in &mapped_rel {
            let (lhs, kl) = operand(&c.lhs, &mut rel_objs)?;
            let (rhs, kr) = operand(&c.rhs, &mut rel_objs)?;
            let k = kl.or(kr).unwrap();
            if kl.is_some_and(|x| x != k) || kr.is_some_and(|x| x != k) {
                return Err(Error::Abstraction(format!("`{c}` relates different sorts")));
            }
            components[k].push(RelAtom { op: c.op, lhs, rhs });
        }
        let rel = JointRelation {
            objects: rel_objs.len(),
            components,
        };
        let types = compute_joint_rel_types(m, &rel)?;
        let args: Vec<Term> = rel_objs.iter().flat_map(|&o| ctx.objects[o].clone()).collect();
        let arg_sorts: Vec<String> = rel_objs
            .iter()
            .flat_map(|_| m.sorts().iter().cloned())
            .collect();
        Some((format!("relr{}", idx + 1), args, arg_sorts, types))
    };
    let tau = |t: RelType| -> Option<Atom> {
        relation.as_ref().map(|(pred, args, _, _)| {
            let mut a = args.clone();
            a.push(Term::Const(t.constant()));
            Atom::new(pred.clone(), a)
        })
    };

    // lifted parts
    let head = r.head.as_ref().map(|h| ctx.lift(h)).transpose()?;
    let mut pos = Vec::new();
    for a in &r.body_pos {
        if ctx.is_sort_atom(a) {
            continue;
        }
        pos.push(ctx.lift(a)?);
    }
    let neg: Vec<Atom> = r.body_neg.iter().map(|a| ctx.lift(a)).collect::<Result<_>>()?;

    let mut rules: Vec<Rule> = Vec::new();
    let mut emit = |head: &Option<Atom>, choice: bool, mut pos: Vec<Atom>, neg: Vec<Atom>, extra: Vec<Atom>| -> Result<()> {
        let guards = ctx.object_guards(&pos)?;
        pos.extend(guards);
        pos.extend(extra);
        let rule = Rule {
            head: head.clone(),
            choice,
            body_pos: pos,
            body_neg: neg,
            relations: kept_rel.clone(),
        };
        if !rules.contains(&rule) {
            rules.push(rule);
        }
        Ok(())
    };

    // (a)
    emit(&head, r.choice, pos.clone(), neg.clone(), tau(RelType::I).into_iter().collect())?;
    if head.is_none() {
        return Ok(finish(rules, relation));
    }
    // (b)
    if let Some(t3) = tau(RelType::III) {
        if opts.tighten {
            let (_, args, _, _) = relation.as_ref().unwrap();
            for v in args.iter().filter(|t| t.as_var().is_some()) {
                emit(&head, true, pos.clone(), neg.clone(), vec![t3.clone(), cluster_atom(v)])?;
            }
        } else {
            emit(&head, true, pos.clone(), neg.clone(), vec![t3])?;
        }
    }
    // (c)
    if neg.len() > 8 {
        return Err(Error::Abstraction(format!("rule {} has too many negative literals", idx + 1)));
    }
    let guard_types: Vec<Option<Atom>> = match &relation {
        Some(_) => vec![tau(RelType::I), tau(RelType::III)],
        None => vec![None],
    };
    for mask in 1u32..(1 << neg.len()) {
        let moved: Vec<usize> = (0..neg.len()).filter(|i| mask >> i & 1 == 1).collect();
        let mut shifted_pos = pos.clone();
        let mut shifted_neg: Vec<Atom> = (0..neg.len()).filter(|i| mask >> i & 1 == 0).map(|i| neg[i].clone()).collect();
        let hp = &head.as_ref().unwrap().predicate;
        for &i in &moved {
            let l = &neg[i];
            if !env.may_depend(&l.predicate, hp) {
                shifted_pos.push(l.clone());
            } else if let Some(name) = env.complement_names.get(&(l.predicate.clone(), l.arity())) {
                shifted_neg.push(Atom::new(name.clone(), l.args.clone()));
            }
            // otherwise the literal is dropped, which only weakens the body
        }
        for &i in &moved {
            let li = &neg[i];
            for j in mapped_positions(p, m, li) {
                let cl = cluster_atom(&li.args[j]);
                if let Term::Const(c) = &li.args[j] {
                    if !m.proper_components().contains(c) {
                        continue;
                    }
                }
                for g in &guard_types {
                    let mut extra: Vec<Atom> = g.iter().cloned().collect();
                    extra.push(cl.clone());
                    emit(&head, true, shifted_pos.clone(), shifted_neg.clone(), extra)?;
                }
            }
        }
    }
    Ok(finish(rules, relation))
}

fn finish(rules: Vec<Rule>, relation: Option<(String, Vec<Term>, Vec<String>, RelTypeSet)>) -> AbstractRule {
    AbstractRule {
        rules,
        relation: relation.map(|(pred, _, sorts, types)| (pred, sorts, types)),
    }
}

fn is_mapped_sort_atom(m: &DomainMapping, a: &Atom) -> bool {
    a.arity() == 1 && m.maps_sort(&a.predicate)
}

fn cluster_atom(t: &Term) -> Atom {
    Atom::new(IS_CLUSTER, vec![t.clone()])
}

fn mapped_positions(p: &Program, m: &DomainMapping, a: &Atom) -> Vec<usize> {
    (0..a.arity())
        .filter(|&i| sort_at(p, &a.predicate, a.arity(), i).is_some_and(|s| m.maps_sort(&s)))
        .collect()
}
