//! Random small programs and mappings for property tests.
#![allow(dead_code)]

use absgrid::mapping::DomainMapping;
use absgrid::syntax::{parse_program, Constant, Program};
use rand::rngs::StdRng;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::RngExt;

/// Atom templates over sort `s` (vars X, X2) and `t` (vars Y, Y2).
const ONE_D_ATOMS: &[&str] = &["p(X)", "p(X2)", "q(X)", "q(X2)", "r(X,Y)", "r(X2,Y)", "u(Y)", "a"];
const JOINT_ATOMS: &[&str] = &["r(X,Y)", "r(X2,Y2)", "w(X,Y)", "w(X2,Y2)", "a"];
const ONE_D_RELS: &[&str] = &["X < X2", "X = X2", "X != X2", "X <= 2", "X2 > 1"];
const JOINT_RELS: &[&str] = &["X < X2", "X = X2", "Y != Y2", "Y <= 1", "X2 >= 2"];

fn vars_of(atom: &str) -> Vec<&'static str> {
    ["X2", "Y2", "X", "Y"]
        .into_iter()
        .filter(|v| {
            atom.match_indices(v).any(|(i, _)| {
                let next = atom[i + v.len()..].chars().next();
                !matches!(next, Some('2'))
            })
        })
        .collect()
}

fn sort_atom(v: &str) -> String {
    if v.starts_with('X') {
        format!("s({v})")
    } else {
        format!("t({v})")
    }
}

/// A random program over sorts `s = 1..ds` and `t = 1..dt`. With `joint`,
/// every mapped predicate carries one `s` and one `t` argument so that the
/// two sorts can be abstracted jointly as the object `o(s,t)`.
pub fn random_program(rng: &mut StdRng, ds: i64, dt: i64, joint: bool) -> Program {
    let atoms = if joint { JOINT_ATOMS } else { ONE_D_ATOMS };
    let rels = if joint { JOINT_RELS } else { ONE_D_RELS };
    let mut text = format!(
        "#sort s = 1..{ds}. #sort t = 1..{dt}.\n\
         #bind p/1 1 s. #bind q/1 1 s. #bind u/1 1 t.\n\
         #bind r/2 1 s. #bind r/2 2 t. #bind w/2 1 s. #bind w/2 2 t.\n"
    );
    if joint {
        text.push_str("#object o(s, t).\n");
    }
    let n_rules = rng.random_range(1..=4);
    for _ in 0..n_rules {
        let mut pos: Vec<&str> = (0..rng.random_range(0..=2)).map(|_| *atoms.choose(rng).unwrap()).collect();
        let neg: Vec<&str> = (0..rng.random_range(0..=2)).map(|_| *atoms.choose(rng).unwrap()).collect();
        let head = if rng.random_bool(0.25) { None } else { Some(*atoms.choose(rng).unwrap()) };
        let choice = head.is_some() && rng.random_bool(0.4);
        pos.dedup();
        let mut vars: Vec<&str> = pos
            .iter()
            .chain(&neg)
            .chain(head.iter())
            .flat_map(|a| vars_of(a))
            .collect();
        let mut rel = None;
        if rng.random_bool(0.5) {
            let cand = *rels.choose(rng).unwrap();
            rel = Some(cand);
            vars.extend(vars_of(cand));
        }
        vars.sort_unstable();
        vars.dedup();
        let mut body: Vec<String> = pos.iter().map(|s| s.to_string()).collect();
        if joint {
            // pair X with Y and X2 with Y2
            for (x, y) in [("X", "Y"), ("X2", "Y2")] {
                if vars.contains(&x) || vars.contains(&y) {
                    body.push(format!("o({x},{y})"));
                }
            }
        } else {
            body.extend(vars.iter().map(|v| sort_atom(v)));
        }
        body.extend(neg.iter().map(|a| format!("not {a}")));
        body.extend(rel.iter().map(|r| r.to_string()));
        let head_text = match head {
            Some(h) if choice => format!("{{{h}}}"),
            Some(h) => h.to_string(),
            None => String::new(),
        };
        if body.is_empty() {
            if head.is_none() {
                continue;
            }
            text.push_str(&format!("{head_text}.\n"));
        } else {
            text.push_str(&format!("{head_text} :- {}.\n", body.join(", ")));
        }
    }
    // a few facts
    for _ in 0..rng.random_range(0..=2) {
        let x = rng.random_range(1..=ds);
        let y = rng.random_range(1..=dt);
        let f = if joint {
            format!("w({x},{y}).\n")
        } else {
            [format!("p({x}).\n"), format!("u({y}).\n"), format!("r({x},{y}).\n")]
                .choose(rng)
                .unwrap()
                .clone()
        };
        text.push_str(&f);
    }
    parse_program(&text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

/// A random partition of `items` into nonempty groups.
pub fn random_partition<T: Clone>(rng: &mut StdRng, items: &[T]) -> Vec<Vec<T>> {
    let mut items = items.to_vec();
    items.shuffle(rng);
    let k = rng.random_range(1..=items.len());
    let mut groups: Vec<Vec<T>> = vec![Vec::new(); k];
    for (i, it) in items.into_iter().enumerate() {
        let g = if i < k { i } else { rng.random_range(0..k) };
        groups[g].push(it);
    }
    groups
}

pub fn random_mapping(rng: &mut StdRng, p: &Program, joint: bool) -> DomainMapping {
    if joint {
        let mut cells = Vec::new();
        for x in p.sort_decls["s"].clone() {
            for y in p.sort_decls["t"].clone() {
                cells.push(vec![x.clone(), y]);
            }
        }
        DomainMapping::from_groups(vec!["s".into(), "t".into()], random_partition(rng, &cells)).unwrap()
    } else {
        let dom: Vec<Constant> = p.sort_decls["s"].clone();
        DomainMapping::from_partition("s", random_partition(rng, &dom)).unwrap()
    }
}
