use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use crate::ground::{AtomId, GroundAtom, GroundProgram, GroundRule};
use crate::solver::{solve_minimize, Interpretation, SolveBudget};
use crate::syntax::Constant;

/// How a constraint takes part in the debug program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relax {
    Hard,
    /// Its own `ab` atom.
    Instance,
    /// An `ab` atom shared with all constraints of the same key.
    Shared(String),
}

#[derive(Debug, Clone)]
pub struct DebugProgram {
    pub ground: GroundProgram,
    /// The `ab` atoms; their number of true members is minimized.
    pub minimize: BTreeSet<AtomId>,
    /// Constraints (indices into the input program) behind each `ab` atom.
    pub relaxed: BTreeMap<AtomId, Vec<usize>>,
}

/// Replaces every relaxed constraint `:- B.` by `ab_c(args) :- B.`, where
/// `c` is the number of the source rule (or `q` for query constraints) and
/// `args` the instance's substitution.
pub fn build_debug_program(gq: &GroundProgram, relax: &dyn Fn(usize, &GroundRule) -> Relax) -> DebugProgram {
    let mut ground = GroundProgram {
        rules: Vec::with_capacity(gq.rules.len()),
        atoms: gq.atoms.clone(),
    };
    let mut minimize = BTreeSet::new();
    let mut relaxed: BTreeMap<AtomId, Vec<usize>> = BTreeMap::new();
    for (i, r) in gq.rules.iter().enumerate() {
        if !r.is_constraint() {
            ground.rules.push(r.clone());
            continue;
        }
        let ab = match relax(i, r) {
            Relax::Hard => {
                ground.rules.push(r.clone());
                continue;
            }
            Relax::Instance => {
                let (name, mut args) = match r.origin {
                    Some(o) => (format!("ab_{}", o + 1), r.subst.clone()),
                    None => ("ab_q".to_string(), Vec::new()),
                };
                if args.is_empty() {
                    args.push(Constant::Int(i as i64));
                }
                GroundAtom::new(name, args)
            }
            Relax::Shared(key) => GroundAtom::new(format!("ab_{key}"), Vec::new()),
        };
        let id = ground.atoms.intern(ab);
        minimize.insert(id);
        relaxed.entry(id).or_default().push(i);
        ground.rules.push(GroundRule {
            head: Some(id),
            ..r.clone()
        });
    }
    DebugProgram {
        ground,
        minimize,
        relaxed,
    }
}

/// Result of optimizing a debug program.
#[derive(Debug, Clone)]
pub struct Diagnosis {
    pub model: Option<Interpretation>,
    pub optimum: Option<usize>,
    pub optimal: bool,
    /// Relaxed constraints (input indices) whose `ab` atom is true.
    pub violated: Vec<usize>,
    /// True `ab` atoms with the constraints behind them.
    pub groups: Vec<Vec<usize>>,
}

/// Conflicts without a better debug model after which the current one is
/// taken. Proving optimality is often out of reach (Sudoku-style
/// constraints are pigeonhole-hard) and hints need no optimal model.
pub const DEBUG_STALL_CONFLICTS: u64 = 5_000;

pub fn diagnose(d: &DebugProgram, timeout: Duration) -> Diagnosis {
    let budget = SolveBudget::unlimited()
        .with_timeout(timeout)
        .with_stall_conflicts(DEBUG_STALL_CONFLICTS)
        .minimizing(d.minimize.clone());
    let opt = solve_minimize(&d.ground, &budget);
    let mut groups = Vec::new();
    if let Some(m) = &opt.model {
        for (ab, rules) in &d.relaxed {
            if m.contains(*ab) {
                groups.push(rules.clone());
            }
        }
    }
    Diagnosis {
        violated: groups.iter().flatten().copied().collect(),
        groups,
        optimum: opt.cost,
        optimal: opt.optimal,
        model: opt.model,
    }
}
