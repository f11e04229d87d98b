//! Checks that a program lies in the fragment the abstraction supports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::normalize::var_sorts;
use crate::syntax::Program;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Index into `Program::rules`.
    pub rule: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}: {}", self.rule + 1, self.message)
    }
}

/// Violations of the supported fragment. Each rule may have at most one
/// builtin relation per sort (relations over different sorts of a joint
/// mapping combine into one joint relation), and every variable of a
/// relation must occur in the positive body.
pub fn check_fragment(p: &Program) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (idx, r) in p.rules.iter().enumerate() {
        let bound: BTreeSet<&str> = r.body_pos.iter().flat_map(|a| a.vars()).collect();
        let sorts = var_sorts(p, r);
        let mut per_sort: BTreeMap<String, usize> = BTreeMap::new();
        for c in &r.relations {
            for v in c.vars() {
                if !bound.contains(v) {
                    out.push(Diagnostic {
                        rule: idx,
                        message: format!("variable {v} of `{c}` does not occur in the positive body"),
                    });
                }
            }
            let cs: BTreeSet<String> = c
                .vars()
                .map(|v| sorts.get(v).cloned().unwrap_or_default())
                .collect();
            if cs.len() > 1 {
                out.push(Diagnostic {
                    rule: idx,
                    message: format!("`{c}` relates variables of different sorts"),
                });
                continue;
            }
            if let Some(s) = cs.into_iter().next() {
                *per_sort.entry(s).or_default() += 1;
            }
        }
        for (s, n) in per_sort {
            if n > 1 {
                let what = if s.is_empty() { "unsorted variables".to_string() } else { format!("sort {s}") };
                out.push(Diagnostic {
                    rule: idx,
                    message: format!("{n} builtin relations over {what}; at most one is supported"),
                });
            }
        }
    }
    out
}

/// Predicates that depend positively on themselves. Such recursion is
/// supported; callers may surface it as a warning.
pub fn positive_cycles(p: &Program) -> Vec<String> {
    let mut edges: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in &p.rules {
        if let Some(h) = &r.head {
            for b in &r.body_pos {
                edges.entry(h.predicate.as_str()).or_default().insert(b.predicate.as_str());
            }
        }
    }
    let mut out = Vec::new();
    for &start in edges.keys() {
        let mut stack: Vec<&str> = edges[start].iter().copied().collect();
        let mut seen = BTreeSet::new();
        while let Some(n) = stack.pop() {
            if n == start {
                out.push(start.to_string());
                break;
            }
            if seen.insert(n) {
                stack.extend(edges.get(n).into_iter().flatten().copied());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    #[test]
    fn sudoku_rules_are_in_fragment() {
        let p = parse_program(
            "#sort row = 1..4. #sort column = 1..4. #sort num = 1..4.\n\
             #bind sol/3 1 row. #bind sol/3 2 column. #bind sol/3 3 num.\n\
             #bind hasNum/2 1 row. #bind hasNum/2 2 column.\n\
             #bind occupied/2 1 row. #bind occupied/2 2 column.\n\
             {sol(X,Y,N)} :- not occupied(X,Y), num(N), row(X), column(Y).\n\
             hasNum(X,Y) :- sol(X,Y,N).\n\
             :- not hasNum(X,Y), row(X), column(Y).\n\
             :- sol(X,Y1,M), sol(X,Y2,M), Y1 < Y2.\n\
             :- sol(X1,Y,M), sol(X2,Y,M), X1 < X2.",
        )
        .unwrap();
        assert_eq!(check_fragment(&p), vec![]);
    }

    #[test]
    fn two_builtins_flagged_once() {
        let p = parse_program(":- p(X), p(Y), p(Z), X < Y, Y < Z.").unwrap();
        assert_eq!(check_fragment(&p).len(), 1);
    }

    #[test]
    fn unsafe_relation_variable() {
        let p = parse_program(":- p(X), Y < X.").unwrap();
        let d = check_fragment(&p);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("variable Y"));
    }

    #[test]
    fn detects_positive_recursion() {
        let p = parse_program("r(X) :- s(X). r(Y) :- r(X), e(X,Y). q :- r(X).").unwrap();
        assert_eq!(positive_cycles(&p), vec!["r".to_string()]);
    }
}
