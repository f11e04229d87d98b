//! Rule normalization ahead of abstraction.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Atom, CmpOp, Comparison, Program, Rule, Term};

/// Sort of argument `pos` of `predicate/arity`, including sort and object
/// domain predicates.
pub fn sort_at(p: &Program, predicate: &str, arity: usize, pos: usize) -> Option<String> {
    if let Some(s) = p.sort_of(predicate, arity, pos) {
        return Some(s.to_string());
    }
    if arity == 1 && p.sort_decls.contains_key(predicate) {
        return Some(predicate.to_string());
    }
    p.object(predicate)
        .filter(|o| o.sorts.len() == arity)
        .map(|o| o.sorts[pos].clone())
}

/// The sort of every variable occurring at a sorted position of the rule.
/// A variable seen at positions of different sorts keeps the first one.
pub fn var_sorts(p: &Program, r: &Rule) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for a in r.body_pos.iter().chain(&r.body_neg).chain(r.head.iter()) {
        for (i, t) in a.args.iter().enumerate() {
            if let (Term::Var(v), Some(s)) = (t, sort_at(p, &a.predicate, a.arity(), i)) {
                out.entry(v.clone()).or_insert(s);
            }
        }
    }
    out
}

fn fresh(base: &str, taken: &mut BTreeSet<String>) -> String {
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|n| !taken.contains(n))
        .map(|n| {
            taken.insert(n.clone());
            n
        })
        .unwrap()
}

/// Renames repeated occurrences of variables over sorts accepted by
/// `mapped` in positive non-domain body atoms, adding `V = V_k` for each
/// renamed occurrence. Afterwards every such variable occurs at most once
/// among the positive program atoms of the rule.
pub fn standardize_apart(p: &Program, r: &Rule, mapped: impl Fn(&str) -> bool) -> Rule {
    let mut out = r.clone();
    let mut taken: BTreeSet<String> = r.variables().into_iter().collect();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut added = Vec::new();
    for a in out.body_pos.iter_mut() {
        if p.is_domain_atom(a) {
            continue;
        }
        let arity = a.arity();
        for i in 0..arity {
            let Term::Var(v) = &a.args[i] else { continue };
            let Some(s) = sort_at(p, &a.predicate, arity, i) else { continue };
            if !mapped(&s) {
                continue;
            }
            if seen.insert(v.clone()) {
                continue;
            }
            let name = fresh(v, &mut taken);
            added.push(Comparison::new(CmpOp::Eq, Term::var(v.clone()), Term::var(name.clone())));
            a.args[i] = Term::var(name);
        }
    }
    out.relations.extend(added);
    out
}

/// Program atoms (not domain atoms) of the positive body.
pub fn program_atoms<'r>(p: &Program, atoms: &'r [Atom]) -> impl Iterator<Item = &'r Atom> + 'r {
    let domain: Vec<bool> = atoms.iter().map(|a| p.is_domain_atom(a)).collect();
    atoms.iter().zip(domain).filter(|(_, d)| !d).map(|(a, _)| a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    const SORTS: &str = "#sort row = 1..2. #sort column = 1..2. #sort num = 1..2.\n\
                         #bind sol/3 1 row. #bind sol/3 2 column. #bind sol/3 3 num.\n";

    #[test]
    fn sudoku_column_constraint() {
        let p = parse_program(&format!("{SORTS}:- sol(X,Y1,M), sol(X,Y2,M), Y1 < Y2.")).unwrap();
        let r = standardize_apart(&p, &p.rules[0], |s| s == "row" || s == "column");
        assert_eq!(r.to_string(), ":- sol(X,Y1,M), sol(X_1,Y2,M), Y1 < Y2, X = X_1.");
    }

    #[test]
    fn repeated_variable_in_one_atom() {
        let p = parse_program(&format!("{SORTS}d(X) :- sol(X,X,N).\n#bind d/1 1 row.")).unwrap();
        let r = standardize_apart(&p, &p.rules[0], |_| true);
        assert_eq!(r.to_string(), "d(X) :- sol(X,X_1,N), X = X_1.");
    }

    #[test]
    fn domain_atoms_untouched() {
        let p = parse_program(&format!("{SORTS}h(X) :- sol(X,Y,N), row(X).\n#bind h/1 1 row.")).unwrap();
        let r = standardize_apart(&p, &p.rules[0], |_| true);
        assert_eq!(r, p.rules[0]);
    }
}
