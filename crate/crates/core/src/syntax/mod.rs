//! Abstract syntax for the supported logic-program fragment.
//!
//! Programs are function-free: terms are constants or variables, atoms are
//! predicates applied to terms, and rules carry a (possibly absent) head, a
//! choice flag, positive and negative body atoms and builtin comparisons.
//! Sort structure is explicit: `#sort` declares a finite ordered domain,
//! `#bind` attaches a sort to a predicate argument and `#object` groups
//! several sorts into a jointly abstracted object (e.g. grid cells).

mod parser;
mod printer;

use std::collections::BTreeMap;
use std::fmt;

pub use parser::parse_program;

/// A ground constant. Integers order numerically and before symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum Constant {
    Int(i64),
    Sym(String),
}

impl Constant {
    pub fn sym(s: impl Into<String>) -> Self {
        Constant::Sym(s.into())
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Int(i) => write!(f, "{i}"),
            Constant::Sym(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Constant {
    fn from(v: i64) -> Self {
        Constant::Int(v)
    }
}

impl From<&str> for Constant {
    fn from(v: &str) -> Self {
        Constant::Sym(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Constant),
    Var(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }

    pub fn as_const(&self) -> Option<&Constant> {
        match self {
            Term::Const(c) => Some(c),
            Term::Var(_) => None,
        }
    }
}

impl From<Constant> for Term {
    fn from(c: Constant) -> Self {
        Term::Const(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn ground(predicate: impl Into<String>, args: Vec<Constant>) -> Self {
        Atom::new(predicate, args.into_iter().map(Term::Const).collect())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Const(_)))
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }

    /// Constant arguments of a ground atom; `None` if a variable occurs.
    pub fn constants(&self) -> Option<Vec<Constant>> {
        self.args.iter().map(|t| t.as_const().cloned()).collect()
    }
}

/// Builtin comparison relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn eval<T: Ord + ?Sized>(self, a: &T, b: &T) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }

    /// The relation with its arguments swapped.
    pub fn flip(self) -> Self {
        match self {
            CmpOp::Lt => CmpOp::Gt,
            CmpOp::Le => CmpOp::Ge,
            CmpOp::Gt => CmpOp::Lt,
            CmpOp::Ge => CmpOp::Le,
            other => other,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "=" => CmpOp::Eq,
            "!=" => CmpOp::Ne,
            "<" => CmpOp::Lt,
            "<=" => CmpOp::Le,
            ">" => CmpOp::Gt,
            ">=" => CmpOp::Ge,
            _ => return None,
        })
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A binary builtin atom such as `Y1 < Y2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comparison {
    pub op: CmpOp,
    pub lhs: Term,
    pub rhs: Term,
}

impl Comparison {
    pub fn new(op: CmpOp, lhs: Term, rhs: Term) -> Self {
        Comparison { op, lhs, rhs }
    }

    /// Evaluates a comparison whose terms are both constants.
    pub fn eval_ground(&self) -> Option<bool> {
        match (&self.lhs, &self.rhs) {
            (Term::Const(a), Term::Const(b)) => Some(self.op.eval(a, b)),
            _ => None,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        [&self.lhs, &self.rhs].into_iter().filter_map(|t| t.as_var())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Rule {
    pub head: Option<Atom>,
    pub choice: bool,
    pub body_pos: Vec<Atom>,
    pub body_neg: Vec<Atom>,
    pub relations: Vec<Comparison>,
}

impl Rule {
    pub fn fact(head: Atom) -> Self {
        Rule {
            head: Some(head),
            ..Default::default()
        }
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_none()
    }

    pub fn is_fact(&self) -> bool {
        !self.choice
            && self.head.as_ref().is_some_and(Atom::is_ground)
            && self.body_pos.is_empty()
            && self.body_neg.is_empty()
            && self.relations.is_empty()
    }

    /// All variables of the rule in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |v: &str| {
            if !out.iter().any(|o| o == v) {
                out.push(v.to_string());
            }
        };
        for a in self.head.iter().chain(&self.body_pos).chain(&self.body_neg) {
            a.vars().for_each(&mut push);
        }
        for c in &self.relations {
            c.vars().for_each(&mut push);
        }
        out
    }
}

/// A jointly abstracted object, e.g. `#object cell(row, col).`
///
/// Argument positions of the listed sorts pair up into objects; the object
/// predicate is a domain predicate ranging over `tuples` (the full product of
/// the sort domains when `tuples` is `None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectDecl {
    pub name: String,
    pub sorts: Vec<String>,
    pub tuples: Option<Vec<Vec<Constant>>>,
}

/// `(predicate, arity, 0-based position)`.
pub type ArgPosition = (String, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub facts: Vec<Atom>,
    pub sort_decls: BTreeMap<String, Vec<Constant>>,
    pub sort_signature: BTreeMap<ArgPosition, String>,
    pub objects: Vec<ObjectDecl>,
}

impl Program {
    pub fn sort_of(&self, predicate: &str, arity: usize, pos: usize) -> Option<&str> {
        self.sort_signature
            .get(&(predicate.to_string(), arity, pos))
            .map(String::as_str)
    }

    pub fn object(&self, name: &str) -> Option<&ObjectDecl> {
        self.objects.iter().find(|o| o.name == name)
    }

    /// Is `atom` a domain atom (a sort or object predicate) rather than a
    /// program atom?
    pub fn is_domain_atom(&self, atom: &Atom) -> bool {
        (atom.arity() == 1 && self.sort_decls.contains_key(&atom.predicate))
            || self
                .object(&atom.predicate)
                .is_some_and(|o| o.sorts.len() == atom.arity())
    }

    /// Membership test for a ground domain atom.
    pub fn domain_contains(&self, predicate: &str, args: &[Constant]) -> bool {
        if args.len() == 1 {
            if let Some(dom) = self.sort_decls.get(predicate) {
                return dom.contains(&args[0]);
            }
        }
        match self.object(predicate) {
            Some(o) => self.object_tuples(o).iter().any(|t| t.as_slice() == args),
            None => false,
        }
    }

    /// The tuples an object predicate ranges over.
    pub fn object_tuples(&self, o: &ObjectDecl) -> Vec<Vec<Constant>> {
        if let Some(t) = &o.tuples {
            return t.clone();
        }
        let mut out = vec![Vec::new()];
        for s in &o.sorts {
            let dom = self.sort_decls.get(s).cloned().unwrap_or_default();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    dom.iter().map(move |c| {
                        let mut t = prefix.clone();
                        t.push(c.clone());
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// Every predicate (name, arity) used in rules or facts, excluding domain
    /// predicates.
    pub fn predicates(&self) -> std::collections::BTreeSet<(String, usize)> {
        let mut out = std::collections::BTreeSet::new();
        for a in self.facts.iter().chain(self.rules.iter().flat_map(|r| {
            r.head.iter().chain(&r.body_pos).chain(&r.body_neg)
        })) {
            if !self.is_domain_atom(a) {
                out.insert((a.predicate.clone(), a.arity()));
            }
        }
        out
    }

    /// Merges the statements of `other` into `self` (encoding + instance).
    pub fn extend(&mut self, other: Program) -> Result<(), crate::Error> {
        for (k, v) in other.sort_decls {
            if self.sort_decls.contains_key(&k) {
                return Err(crate::Error::DuplicateSort(k));
            }
            self.sort_decls.insert(k, v);
        }
        self.sort_signature.extend(other.sort_signature);
        self.objects.extend(other.objects);
        self.rules.extend(other.rules);
        self.facts.extend(other.facts);
        self.validate()
    }

    /// Checks sort references and fact constants against declared domains.
    pub fn validate(&self) -> Result<(), crate::Error> {
        for ((p, ar, pos), s) in &self.sort_signature {
            if !self.sort_decls.contains_key(s) {
                return Err(crate::Error::UnboundSort(format!(
                    "{s} (bound at {p}/{ar} position {})",
                    pos + 1
                )));
            }
        }
        for o in &self.objects {
            for s in &o.sorts {
                if !self.sort_decls.contains_key(s) {
                    return Err(crate::Error::UnboundSort(format!("{s} (object {})", o.name)));
                }
            }
        }
        for f in &self.facts {
            for (i, t) in f.args.iter().enumerate() {
                if let (Some(s), Term::Const(c)) = (self.sort_of(&f.predicate, f.arity(), i), t) {
                    if !self.sort_decls[s].contains(c) {
                        return Err(crate::Error::OutOfDomain {
                            atom: f.to_string(),
                            sort: s.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_order_ints_before_symbols() {
        let mut v = vec![Constant::sym("a"), Constant::Int(10), Constant::Int(2)];
        v.sort();
        assert_eq!(v, vec![Constant::Int(2), Constant::Int(10), Constant::sym("a")]);
    }

    #[test]
    fn flip_is_involution() {
        for op in [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge] {
            assert_eq!(op.flip().flip(), op);
            assert_eq!(op.eval(&1, &2), op.flip().eval(&2, &1));
        }
    }

    #[test]
    fn object_tuples_default_to_product() {
        let p = parse_program("#sort row = 1..2. #sort col = {a,b}. #object cell(row,col).").unwrap();
        let o = p.object("cell").unwrap();
        assert_eq!(p.object_tuples(o).len(), 4);
        assert!(p.domain_contains("cell", &[Constant::Int(2), Constant::sym("b")]));
        assert!(p.is_domain_atom(&Atom::new("row", vec![Term::var("X")])));
    }
}
