use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{RngExt, SeedableRng};

use super::{oracle, InstanceSpec, Problem};
use crate::{Error, Result};

const MAX_ATTEMPTS: usize = 10_000;

/// A random instance. With `certify`, candidates are drawn until the
/// brute-force oracle proves one unsatisfiable. Equal arguments give equal
/// instances.
pub fn generate_instance(problem: Problem, n: u32, seed: u64, certify: bool) -> Result<InstanceSpec> {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let spec = candidate(problem, n, seed, &mut rng);
        spec.validate()?;
        if !certify {
            return Ok(spec);
        }
        if !oracle::satisfiable(&spec) {
            return Ok(InstanceSpec { certified: true, ..spec });
        }
    }
    Err(Error::Invalid(format!(
        "no unsatisfiable {problem} instance of size {n} found from seed {seed}"
    )))
}

fn random_cells(rng: &mut StdRng, n: u32, k: usize, avoid: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let all: Vec<(u32, u32)> = (1..=n)
        .flat_map(|y| (1..=n).map(move |x| (x, y)))
        .filter(|c| !avoid.contains(c))
        .collect();
    let mut picked: Vec<(u32, u32)> = all.sample(rng, k.min(all.len())).copied().collect();
    picked.sort_by_key(|&(x, y)| (y, x));
    picked
}

fn candidate(problem: Problem, n: u32, seed: u64, rng: &mut StdRng) -> InstanceSpec {
    let mut spec = InstanceSpec::new(problem, n, seed);
    let cells = (n * n) as usize;
    match problem {
        Problem::Reachability => {
            let half = (n / 2).max(1);
            let start = (rng.random_range(1..=half), rng.random_range(1..=half));
            let k = rng.random_range(cells / 10..=cells / 4);
            spec.start = Some(start);
            spec.blocked = random_cells(rng, n, k, &[start]);
        }
        Problem::VisitallPlan | Problem::VisitallKt => {
            let start = (rng.random_range(1..=n), rng.random_range(1..=n));
            let k = rng.random_range(1..=(cells / 6).max(1));
            spec.start = Some(start);
            spec.blocked = random_cells(rng, n, k, &[start]);
        }
        Problem::KnightsTour => {
            let k = rng.random_range(0..=(cells / 8));
            spec.blocked = random_cells(rng, n, k, &[]);
        }
        Problem::Sudoku => {
            let k = rng.random_range(n as usize..=(cells / 3));
            let b = if n == 9 { 3 } else { 2 };
            let mut clues: Vec<(u32, u32, u32)> = Vec::new();
            for (x, y) in random_cells(rng, n, k, &[]) {
                let v = rng.random_range(1..=n);
                let clash = clues.iter().any(|&(cx, cy, cv)| {
                    cv == v && (cx == x || cy == y || ((cx - 1) / b == (x - 1) / b && (cy - 1) / b == (y - 1) / b))
                });
                if !clash {
                    clues.push((x, y, v));
                }
            }
            spec.clues = clues;
        }
    }
    spec
}

/// The standard 8x8 reachability example: the agent starts at (2,2) and the
/// bottom-right pocket is walled off by five obstacles.
pub fn fig1c_reachability() -> InstanceSpec {
    let mut spec = InstanceSpec::new(Problem::Reachability, 8, 0);
    spec.start = Some((2, 2));
    spec.blocked = vec![(7, 5), (7, 6), (8, 6), (6, 7), (5, 8)];
    spec.certified = !oracle::satisfiable(&spec);
    spec
}

/// A fixed 9x9 Sudoku clue set. Not certified: the
/// brute-force oracle only covers 4x4 grids.
pub fn fig1a_sudoku() -> InstanceSpec {
    let mut spec = InstanceSpec::new(Problem::Sudoku, 9, 0);
    spec.clues = vec![
        (2, 1, 7),
        (2, 2, 6),
        (3, 2, 5),
        (2, 3, 9),
        (1, 4, 4),
        (3, 4, 8),
        (3, 5, 1),
        (1, 6, 9),
        (3, 6, 2),
    ];
    spec
}
