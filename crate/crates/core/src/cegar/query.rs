use std::collections::BTreeSet;

use crate::abstraction::AbstractProgram;
use crate::ground::{GroundAtom, GroundProgram};
use crate::mapping::DomainMapping;
use crate::syntax::{Atom, Program, Rule};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    /// `hit_p(â) :- α.` for an original α mapped onto an atom of Î.
    Hit,
    /// `:- not hit_p(â).` for an atom of Î.
    Require,
    /// `:- α.` for an original α whose image is not in Î.
    Forbid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryRule {
    pub rule: Rule,
    pub kind: QueryKind,
    /// The abstract atom for `Hit`/`Require`, the original atom for `Forbid`.
    pub target: GroundAtom,
}

fn hit_atom(a: &GroundAtom) -> Atom {
    GroundAtom::new(format!("hit_{}", a.predicate), a.args.clone()).to_atom()
}

/// Rules whose addition to the concrete program is satisfiable iff some
/// answer set maps onto `abstract_model` (auxiliary atoms ignored).
/// Original atoms are those of the concrete grounding `g`; atoms absent
/// from it are false in every answer set.
pub fn build_spuriousness_query(
    p: &Program,
    g: &GroundProgram,
    m: &DomainMapping,
    ap: &AbstractProgram,
    abstract_model: &BTreeSet<GroundAtom>,
) -> Result<Vec<QueryRule>> {
    let targets: BTreeSet<&GroundAtom> = abstract_model
        .iter()
        .filter(|a| !ap.is_aux_predicate(&a.predicate))
        .collect();
    let mut out = Vec::new();
    for (_, a) in g.atoms.iter() {
        let image = m.lift_atom(p, a)?;
        if targets.contains(&image) {
            out.push(QueryRule {
                rule: Rule {
                    head: Some(hit_atom(&image)),
                    body_pos: vec![a.to_atom()],
                    ..Default::default()
                },
                kind: QueryKind::Hit,
                target: image,
            });
        } else {
            out.push(QueryRule {
                rule: Rule {
                    body_pos: vec![a.to_atom()],
                    ..Default::default()
                },
                kind: QueryKind::Forbid,
                target: a.clone(),
            });
        }
    }
    for t in targets {
        out.push(QueryRule {
            rule: Rule {
                body_neg: vec![hit_atom(t)],
                ..Default::default()
            },
            kind: QueryKind::Require,
            target: t.clone(),
        });
    }
    Ok(out)
}
