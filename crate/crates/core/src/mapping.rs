//! Domain mappings over one or several jointly abstracted sorts, existential
//! abstract relations and their types.
//!
//! A mapping over sorts `s1..sn` sends tuples of original constants to
//! abstract tuples ("labels"). Each label component is a constant standing
//! for the set of original values it covers in that sort; a component is a
//! proper cluster when that set has more than one element.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ground::GroundAtom;
use crate::normalize::sort_at;
use crate::syntax::{CmpOp, Constant, Program};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    /// Abstract tuple, one constant per mapped sort.
    pub label: Vec<Constant>,
    /// Inverse image: original tuples mapped to `label`.
    pub members: Vec<Vec<Constant>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainMapping {
    sorts: Vec<String>,
    clusters: Vec<Cluster>,
    forward: HashMap<Vec<Constant>, usize>,
    by_label: HashMap<Vec<Constant>, usize>,
    components: Vec<BTreeMap<Constant, BTreeSet<Constant>>>,
}

impl DomainMapping {
    pub fn new(sorts: Vec<String>, clusters: Vec<Cluster>) -> Result<Self> {
        let n = sorts.len();
        if n == 0 {
            return Err(Error::Mapping("a mapping needs at least one sort".into()));
        }
        let mut forward = HashMap::new();
        let mut by_label = HashMap::new();
        let mut components = vec![BTreeMap::<Constant, BTreeSet<Constant>>::new(); n];
        for (i, c) in clusters.iter().enumerate() {
            if c.label.len() != n {
                return Err(Error::Mapping(format!("label {:?} has wrong arity", c.label)));
            }
            if c.members.is_empty() {
                return Err(Error::Mapping(format!("cluster {} is empty", show_tuple(&c.label))));
            }
            if by_label.insert(c.label.clone(), i).is_some() {
                return Err(Error::Mapping(format!("duplicate label {}", show_tuple(&c.label))));
            }
            for t in &c.members {
                if t.len() != n {
                    return Err(Error::Mapping(format!("member {} has wrong arity", show_tuple(t))));
                }
                if forward.insert(t.clone(), i).is_some() {
                    return Err(Error::Mapping(format!("{} belongs to two clusters", show_tuple(t))));
                }
                for (k, v) in t.iter().enumerate() {
                    components[k].entry(c.label[k].clone()).or_default().insert(v.clone());
                }
            }
        }
        for (k, comp) in components.iter().enumerate() {
            let originals: BTreeSet<&Constant> = comp.values().flatten().collect();
            for (label, values) in comp {
                if values.len() > 1 && originals.contains(label) {
                    return Err(Error::Mapping(format!(
                        "label `{label}` of sort {} clashes with an original constant",
                        sorts[k]
                    )));
                }
            }
        }
        Ok(DomainMapping {
            sorts,
            clusters,
            forward,
            by_label,
            components,
        })
    }

    /// One cluster per given group of original tuples, with generated labels.
    /// Groups that are not rectangles may collide on their labels; later
    /// ones then get a suffixed symbolic component (`s2_3_v2`).
    pub fn from_groups(sorts: Vec<String>, groups: Vec<Vec<Vec<Constant>>>) -> Result<Self> {
        let mut used: BTreeSet<Vec<Constant>> = BTreeSet::new();
        let mut clusters = Vec::new();
        for members in groups {
            let mut label: Vec<Constant> = (0..sorts.len())
                .map(|k| {
                    let vals: BTreeSet<Constant> = members.iter().map(|t| t[k].clone()).collect();
                    component_label(&sorts[k], &vals)
                })
                .collect();
            if used.contains(&label) {
                let k = label.iter().position(|c| matches!(c, Constant::Sym(_))).unwrap_or(0);
                let base = label[k].to_string();
                label[k] = (2..)
                    .map(|i| Constant::sym(format!("{base}_v{i}")))
                    .find(|c| {
                        let mut l = label.clone();
                        l[k] = c.clone();
                        !used.contains(&l)
                    })
                    .unwrap();
            }
            used.insert(label.clone());
            clusters.push(Cluster { label, members });
        }
        Self::new(sorts, clusters)
    }

    /// Mapping of a single sort from a partition of its domain.
    pub fn from_partition(sort: &str, groups: Vec<Vec<Constant>>) -> Result<Self> {
        Self::from_groups(
            vec![sort.to_string()],
            groups
                .into_iter()
                .map(|g| g.into_iter().map(|c| vec![c]).collect())
                .collect(),
        )
    }

    /// The identity on the domain `sorts` range over in `p` (object tuples
    /// when an object over exactly these sorts is declared).
    pub fn identity(p: &Program, sorts: &[String]) -> Result<Self> {
        let tuples = domain_tuples(p, sorts)?;
        let clusters = tuples
            .into_iter()
            .map(|t| Cluster {
                label: t.clone(),
                members: vec![t],
            })
            .collect();
        Self::new(sorts.to_vec(), clusters)
    }

    pub fn sorts(&self) -> &[String] {
        &self.sorts
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn is_joint(&self) -> bool {
        self.sorts.len() > 1
    }

    pub fn maps_sort(&self, s: &str) -> bool {
        self.sorts.iter().any(|x| x == s)
    }

    pub fn sort_index(&self, s: &str) -> Option<usize> {
        self.sorts.iter().position(|x| x == s)
    }

    pub fn lift_tuple(&self, t: &[Constant]) -> Option<&[Constant]> {
        self.forward.get(t).map(|&i| self.clusters[i].label.as_slice())
    }

    pub fn preimage(&self, label: &[Constant]) -> Option<&[Vec<Constant>]> {
        self.by_label.get(label).map(|&i| self.clusters[i].members.as_slice())
    }

    /// Original values covered by an abstract constant in component `k`.
    pub fn component_values(&self, k: usize, c: &Constant) -> Option<&BTreeSet<Constant>> {
        self.components[k].get(c)
    }

    /// Abstract constants of component `k`, sorted.
    pub fn component_labels(&self, k: usize) -> Vec<Constant> {
        self.components[k].keys().cloned().collect()
    }

    /// Labels whose value set has more than one element (`isCluster`).
    pub fn proper_components(&self) -> BTreeSet<Constant> {
        self.components
            .iter()
            .flat_map(|comp| comp.iter().filter(|(_, v)| v.len() > 1).map(|(l, _)| l.clone()))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.clusters.iter().all(|c| c.members.len() == 1)
    }

    /// Number of original tuples covered.
    pub fn domain_size(&self) -> usize {
        self.forward.len()
    }

    /// Groups the positions of an atom over mapped sorts into objects: the
    /// k-th position of each mapped sort forms the k-th object. Returns the
    /// positions per object (in sort order).
    pub fn object_positions(&self, p: &Program, predicate: &str, arity: usize) -> Result<Vec<Vec<usize>>> {
        let mut per_sort: Vec<Vec<usize>> = vec![Vec::new(); self.sorts.len()];
        for pos in 0..arity {
            if let Some(s) = sort_at(p, predicate, arity, pos) {
                if let Some(k) = self.sort_index(&s) {
                    per_sort[k].push(pos);
                }
            }
        }
        let count = per_sort[0].len();
        if per_sort.iter().any(|v| v.len() != count) {
            return Err(Error::Mapping(format!(
                "{predicate}/{arity} cannot be lifted jointly over {}: unequal argument counts",
                self.sorts.join(",")
            )));
        }
        Ok((0..count).map(|i| per_sort.iter().map(|v| v[i]).collect()).collect())
    }

    /// Replaces mapped arguments by their abstract counterparts.
    pub fn lift_atom(&self, p: &Program, a: &GroundAtom) -> Result<GroundAtom> {
        let objects = self.object_positions(p, &a.predicate, a.args.len())?;
        let mut args = a.args.clone();
        for obj in objects {
            let t: Vec<Constant> = obj.iter().map(|&i| a.args[i].clone()).collect();
            let label = self.lift_tuple(&t).ok_or_else(|| Error::OutOfDomain {
                atom: a.to_atom().to_string(),
                sort: self.sorts.join("×"),
            })?;
            for (&i, c) in obj.iter().zip(label) {
                args[i] = c.clone();
            }
        }
        Ok(GroundAtom::new(a.predicate.clone(), args))
    }

    /// Structured text form, one cluster per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("sorts {}\n", self.sorts.join(" "));
        for c in &self.clusters {
            let members: Vec<String> = c.members.iter().map(|t| show_tuple(t)).collect();
            s.push_str(&format!("cluster {} : {}\n", show_tuple(&c.label), members.join(" ")));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut sorts = None;
        let mut clusters = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix("sorts ") {
                sorts = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
            } else if let Some(rest) = line.strip_prefix("cluster ") {
                let (label, members) = rest
                    .split_once(" : ")
                    .ok_or_else(|| Error::Mapping(format!("malformed cluster line `{line}`")))?;
                let label = parse_tuple(label)?;
                let members = members
                    .split_whitespace()
                    .map(parse_tuple)
                    .collect::<Result<Vec<_>>>()?;
                clusters.push(Cluster { label, members });
            } else {
                return Err(Error::Mapping(format!("unexpected line `{line}`")));
            }
        }
        let sorts = sorts.ok_or_else(|| Error::Mapping("missing `sorts` line".into()))?;
        Self::new(sorts, clusters)
    }
}

impl fmt::Display for DomainMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Tuples over `sorts` that the program's domain consists of.
pub fn domain_tuples(p: &Program, sorts: &[String]) -> Result<Vec<Vec<Constant>>> {
    if sorts.len() > 1 {
        if let Some(o) = p.objects.iter().find(|o| o.sorts == sorts) {
            return Ok(p.object_tuples(o));
        }
    }
    let mut out = vec![Vec::new()];
    for s in sorts {
        let dom = p
            .sort_decls
            .get(s)
            .ok_or_else(|| Error::UnboundSort(s.clone()))?;
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Constant>| {
                dom.iter().map(move |c| {
                    let mut t = prefix.clone();
                    t.push(c.clone());
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

/// Generated name for a set of original values: the value itself for a
/// singleton, `r1_4` for an integer interval, `r_a_b` otherwise.
pub fn component_label(sort: &str, values: &BTreeSet<Constant>) -> Constant {
    if values.len() == 1 {
        return values.iter().next().unwrap().clone();
    }
    let prefix: String = sort.chars().next().unwrap_or('d').to_ascii_lowercase().to_string();
    let ints: Option<Vec<i64>> = values
        .iter()
        .map(|v| match v {
            Constant::Int(i) => Some(*i),
            Constant::Sym(_) => None,
        })
        .collect();
    if let Some(ints) = ints {
        let (lo, hi) = (ints[0], ints[ints.len() - 1]);
        if hi - lo + 1 == ints.len() as i64 && lo >= 0 {
            return Constant::sym(format!("{prefix}{lo}_{hi}"));
        }
    }
    let parts: Vec<String> = values.iter().map(|v| v.to_string().replace('-', "m")).collect();
    Constant::sym(format!("{prefix}_{}", parts.join("_")))
}

fn show_tuple(t: &[Constant]) -> String {
    let parts: Vec<String> = t.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

fn parse_tuple(s: &str) -> Result<Vec<Constant>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Mapping(format!("malformed tuple `{s}`")))?;
    Ok(inner
        .split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<i64>().map(Constant::Int).unwrap_or_else(|_| Constant::sym(p))
        })
        .collect())
}

/// Type of an abstract relation on an abstract tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelType {
    /// Holds for every original tuple.
    I,
    /// Holds for none.
    II,
    /// Holds for some but not all.
    III,
}

impl RelType {
    pub fn from_flags(holds: bool, fails: bool) -> Self {
        match (holds, fails) {
            (true, false) => RelType::I,
            (true, true) => RelType::III,
            _ => RelType::II,
        }
    }

    /// Constant used in materialized type facts.
    pub fn constant(self) -> Constant {
        Constant::sym(match self {
            RelType::I => "i",
            RelType::II => "ii",
            RelType::III => "iii",
        })
    }

    /// Type of a conjunction of per-sort relations.
    pub fn joint(components: &[RelType]) -> RelType {
        if components.iter().all(|&t| t == RelType::I) {
            RelType::I
        } else if components.contains(&RelType::III) && !components.contains(&RelType::II) {
            RelType::III
        } else {
            RelType::II
        }
    }
}

/// An argument of a relation: component `component` of object `object`, or
/// an original constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    Slot { object: usize, component: usize },
    Const(Constant),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelAtom {
    pub op: CmpOp,
    pub lhs: Operand,
    pub rhs: Operand,
}

/// A relation over `objects` abstract objects: the conjunction of its
/// per-sort components. `components[k]` may only reference component `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JointRelation {
    pub objects: usize,
    pub components: Vec<Vec<RelAtom>>,
}

impl JointRelation {
    /// `X op Y` between two objects on component `k` of an `n`-sort mapping.
    pub fn binary(op: CmpOp, k: usize, n: usize) -> Self {
        let mut components = vec![Vec::new(); n];
        components[k].push(RelAtom {
            op,
            lhs: Operand::Slot { object: 0, component: k },
            rhs: Operand::Slot { object: 1, component: k },
        });
        JointRelation { objects: 2, components }
    }

    fn validate(&self, m: &DomainMapping) -> Result<()> {
        if self.components.len() != m.sorts.len() {
            return Err(Error::Mapping(format!(
                "relation has {} components but the mapping has {} sorts",
                self.components.len(),
                m.sorts.len()
            )));
        }
        for (k, comp) in self.components.iter().enumerate() {
            for a in comp {
                for o in [&a.lhs, &a.rhs] {
                    if let Operand::Slot { object, component } = o {
                        if *component != k || *object >= self.objects {
                            return Err(Error::Mapping(format!(
                                "component {k} references slot ({object},{component})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Truth of the relation on original object tuples.
    pub fn eval(&self, objects: &[Vec<Constant>]) -> bool {
        let val = |o: &Operand| -> Constant {
            match o {
                Operand::Slot { object, component } => objects[*object][*component].clone(),
                Operand::Const(c) => c.clone(),
            }
        };
        self.components
            .iter()
            .flatten()
            .all(|a| a.op.eval(&val(&a.lhs), &val(&a.rhs)))
    }
}

/// Types of one abstract relation. Only type I and III tuples are stored;
/// every other tuple of abstract objects has type II.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelTypeSet {
    pub objects: usize,
    pub types: BTreeMap<Vec<Vec<Constant>>, RelType>,
}

impl RelTypeSet {
    pub fn get(&self, labels: &[Vec<Constant>]) -> RelType {
        self.types.get(labels).copied().unwrap_or(RelType::II)
    }

    /// Facts `pred(l11,..,l1n, .., lk1,..,lkn, type)` for types I and III.
    pub fn facts(&self, pred: &str) -> Vec<GroundAtom> {
        self.types
            .iter()
            .map(|(tuple, t)| {
                let mut args: Vec<Constant> = tuple.iter().flatten().cloned().collect();
                args.push(t.constant());
                GroundAtom::new(pred, args)
            })
            .collect()
    }

    pub fn count(&self, t: RelType) -> usize {
        self.types.values().filter(|&&x| x == t).count()
    }
}

/// Type of component `k` of `rel` on the given object labels, by exhaustive
/// enumeration of the original values behind each label.
pub fn component_type(m: &DomainMapping, rel: &JointRelation, k: usize, labels: &[Vec<Constant>]) -> RelType {
    let atoms = &rel.components[k];
    if atoms.is_empty() {
        return RelType::I;
    }
    let mut used: Vec<usize> = atoms
        .iter()
        .flat_map(|a| [&a.lhs, &a.rhs])
        .filter_map(|o| match o {
            Operand::Slot { object, .. } => Some(*object),
            Operand::Const(_) => None,
        })
        .collect();
    used.sort_unstable();
    used.dedup();
    let sets: Vec<Vec<&Constant>> = used
        .iter()
        .map(|&o| {
            m.component_values(k, &labels[o][k])
                .map(|s| s.iter().collect())
                .unwrap_or_default()
        })
        .collect();
    let (mut holds, mut fails) = (false, false);
    let mut idx = vec![0usize; used.len()];
    if sets.iter().any(Vec::is_empty) {
        return RelType::II;
    }
    loop {
        let current: Vec<&Constant> = idx.iter().enumerate().map(|(p, &i)| sets[p][i]).collect();
        let value = |o: &'_ Operand| -> Constant {
            match o {
                Operand::Slot { object, .. } => {
                    let pos = used.iter().position(|u| u == object).unwrap();
                    current[pos].clone()
                }
                Operand::Const(c) => c.clone(),
            }
        };
        if atoms.iter().all(|a| a.op.eval(&value(&a.lhs), &value(&a.rhs))) {
            holds = true;
        } else {
            fails = true;
        }
        if holds && fails {
            break;
        }
        // odometer
        let mut i = 0;
        loop {
            if i == idx.len() {
                return RelType::from_flags(holds, fails);
            }
            idx[i] += 1;
            if idx[i] < sets[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
    RelType::from_flags(holds, fails)
}

/// Joint type of `rel` on the given object labels.
pub fn joint_type(m: &DomainMapping, rel: &JointRelation, labels: &[Vec<Constant>]) -> RelType {
    let comps: Vec<RelType> = (0..rel.components.len())
        .map(|k| component_type(m, rel, k, labels))
        .collect();
    RelType::joint(&comps)
}

/// Types of a single binary relation on component `k`, for all pairs of
/// cluster labels.
pub fn compute_rel_types(m: &DomainMapping, op: CmpOp, k: usize) -> RelTypeSet {
    compute_joint_rel_types(m, &JointRelation::binary(op, k, m.sorts.len()))
        .expect("a binary relation is always well-formed")
}

/// Can the single atom `a` of component `k` hold for some originals behind
/// the labels of the objects assigned so far? `None` while a slot is open.
fn atom_possible(m: &DomainMapping, a: &RelAtom, k: usize, labels: &[&Vec<Constant>]) -> Option<bool> {
    let values = |o: &Operand| -> Option<Vec<Constant>> {
        match o {
            Operand::Slot { object, .. } => {
                let l = labels.get(*object)?;
                Some(m.component_values(k, &l[k]).map(|s| s.iter().cloned().collect()).unwrap_or_default())
            }
            Operand::Const(c) => Some(vec![c.clone()]),
        }
    };
    let (lhs, rhs) = (values(&a.lhs)?, values(&a.rhs)?);
    if a.lhs == a.rhs {
        return Some(lhs.iter().any(|v| a.op.eval(v, v)));
    }
    Some(lhs.iter().any(|x| rhs.iter().any(|y| a.op.eval(x, y))))
}

/// Types of `rel` for every tuple of abstract objects. Assignments are
/// extended object by object; a prefix on which some single atom cannot
/// hold is type II throughout and is skipped.
pub fn compute_joint_rel_types(m: &DomainMapping, rel: &JointRelation) -> Result<RelTypeSet> {
    rel.validate(m)?;
    let labels: Vec<&Vec<Constant>> = m.clusters.iter().map(|c| &c.label).collect();
    // atoms that become decidable once object j is assigned
    let mut ready: Vec<Vec<(usize, &RelAtom)>> = vec![Vec::new(); rel.objects];
    for (k, comp) in rel.components.iter().enumerate() {
        for a in comp {
            let last = [&a.lhs, &a.rhs]
                .into_iter()
                .filter_map(|o| match o {
                    Operand::Slot { object, .. } => Some(*object),
                    Operand::Const(_) => None,
                })
                .max()
                .unwrap_or(0);
            ready[last].push((k, a));
        }
    }
    let mut types = BTreeMap::new();
    let mut stack: Vec<&Vec<Constant>> = Vec::new();
    fn go<'a>(
        m: &DomainMapping,
        rel: &JointRelation,
        labels: &[&'a Vec<Constant>],
        ready: &[Vec<(usize, &RelAtom)>],
        stack: &mut Vec<&'a Vec<Constant>>,
        types: &mut BTreeMap<Vec<Vec<Constant>>, RelType>,
    ) {
        let j = stack.len();
        if j == rel.objects {
            let tuple: Vec<Vec<Constant>> = stack.iter().map(|l| (*l).clone()).collect();
            let t = joint_type(m, rel, &tuple);
            if t != RelType::II {
                types.insert(tuple, t);
            }
            return;
        }
        for l in labels {
            stack.push(l);
            if ready[j].iter().all(|(k, a)| atom_possible(m, a, *k, stack) != Some(false)) {
                go(m, rel, labels, ready, stack, types);
            }
            stack.pop();
        }
    }
    go(m, rel, &labels, &ready, &mut stack, &mut types);
    Ok(RelTypeSet {
        objects: rel.objects,
        types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn ints(v: &[i64]) -> Vec<Constant> {
        v.iter().map(|&i| Constant::Int(i)).collect()
    }

    #[test]
    fn generated_labels() {
        let s: BTreeSet<Constant> = ints(&[1, 2, 3, 4]).into_iter().collect();
        assert_eq!(component_label("row", &s), Constant::sym("r1_4"));
        let s: BTreeSet<Constant> = ints(&[1, 3]).into_iter().collect();
        assert_eq!(component_label("row", &s), Constant::sym("r_1_3"));
        let s: BTreeSet<Constant> = ints(&[7]).into_iter().collect();
        assert_eq!(component_label("row", &s), Constant::Int(7));
    }

    #[test]
    fn graph_coloring_lift() {
        let p = parse_program("#sort node = {a,b,c}. #bind edge/2 1 node. #bind edge/2 2 node. #bind node/1 1 node.")
            .unwrap();
        let m = DomainMapping::new(
            vec!["node".into()],
            vec![
                Cluster {
                    label: vec![Constant::sym("ahat")],
                    members: vec![vec![Constant::sym("a")]],
                },
                Cluster {
                    label: vec![Constant::sym("bhat")],
                    members: vec![vec![Constant::sym("b")], vec![Constant::sym("c")]],
                },
            ],
        )
        .unwrap();
        let e = GroundAtom::new("edge", vec![Constant::sym("a"), Constant::sym("b")]);
        assert_eq!(m.lift_atom(&p, &e).unwrap().to_atom().to_string(), "edge(ahat,bhat)");
    }

    #[test]
    fn overlapping_clusters_rejected() {
        let r = DomainMapping::from_partition("s", vec![ints(&[1, 2]), ints(&[2, 3])]);
        assert!(matches!(r, Err(Error::Mapping(_))));
    }

    #[test]
    fn text_round_trip() {
        let m = DomainMapping::from_groups(
            vec!["row".into(), "column".into()],
            vec![
                vec![ints(&[1, 3]), ints(&[1, 4]), ints(&[2, 3]), ints(&[2, 4])],
                vec![ints(&[1, 1])],
            ],
        )
        .unwrap();
        assert_eq!(DomainMapping::from_text(&m.to_text()).unwrap(), m);
        assert!(m.to_text().contains("cluster (r1_2,c3_4)"));
    }

    #[test]
    fn joint_table() {
        use RelType::*;
        assert_eq!(RelType::joint(&[I, I]), I);
        assert_eq!(RelType::joint(&[III, I]), III);
        assert_eq!(RelType::joint(&[III, II]), II);
        assert_eq!(RelType::joint(&[III, III]), III);
        assert_eq!(RelType::joint(&[I, II]), II);
    }
}
