//! Direct search procedures deciding each benchmark without ASP.

use std::collections::{BTreeSet, VecDeque};

use super::{InstanceSpec, Problem, KING4, KNIGHT};

/// Is the instance solvable?
pub fn satisfiable(spec: &InstanceSpec) -> bool {
    match spec.problem {
        Problem::Reachability => unreachable_cells(spec).is_empty(),
        Problem::Sudoku => sudoku_completion(spec).is_some(),
        Problem::KnightsTour => knights_tour(spec).is_some(),
        Problem::VisitallPlan | Problem::VisitallKt => visitall_path(spec).is_some(),
    }
}

fn step(spec: &InstanceSpec, (x, y): (u32, u32), (dx, dy): (i32, i32)) -> Option<(u32, u32)> {
    let (x2, y2) = (x as i32 + dx, y as i32 + dy);
    let n = spec.n as i32;
    if !(1..=n).contains(&x2) || !(1..=n).contains(&y2) {
        return None;
    }
    let c = (x2 as u32, y2 as u32);
    (!spec.is_blocked(c.0, c.1)).then_some(c)
}

/// Free cells a flood fill from the start does not reach.
pub fn unreachable_cells(spec: &InstanceSpec) -> Vec<(u32, u32)> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    if let Some(s) = spec.start {
        seen.insert(s);
        queue.push_back(s);
    }
    while let Some(c) = queue.pop_front() {
        for d in KING4 {
            if let Some(next) = step(spec, c, d) {
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    spec.free_cells().into_iter().filter(|c| !seen.contains(c)).collect()
}

/// A filled grid `grid[y-1][x-1]` extending the clues, if one exists.
pub fn sudoku_completion(spec: &InstanceSpec) -> Option<Vec<Vec<u32>>> {
    let n = spec.n as usize;
    let b = if n == 9 { 3 } else { 2 };
    let mut grid = vec![vec![0u32; n]; n];
    for &(x, y, v) in &spec.clues {
        let cell = &mut grid[y as usize - 1][x as usize - 1];
        if *cell != 0 && *cell != v {
            return None;
        }
        *cell = v;
    }
    let ok = |g: &Vec<Vec<u32>>, r: usize, c: usize, v: u32| {
        (0..n).all(|i| (i == c || g[r][i] != v) && (i == r || g[i][c] != v))
            && (0..n).all(|i| {
                let (rr, cc) = (r / b * b + i / b, c / b * b + i % b);
                (rr, cc) == (r, c) || g[rr][cc] != v
            })
    };
    for r in 0..n {
        for c in 0..n {
            if grid[r][c] != 0 && !ok(&grid, r, c, grid[r][c]) {
                return None;
            }
        }
    }
    fn fill(g: &mut Vec<Vec<u32>>, n: usize, pos: usize, ok: &dyn Fn(&Vec<Vec<u32>>, usize, usize, u32) -> bool) -> bool {
        if pos == n * n {
            return true;
        }
        let (r, c) = (pos / n, pos % n);
        if g[r][c] != 0 {
            return fill(g, n, pos + 1, ok);
        }
        for v in 1..=n as u32 {
            if ok(g, r, c, v) {
                g[r][c] = v;
                if fill(g, n, pos + 1, ok) {
                    return true;
                }
                g[r][c] = 0;
            }
        }
        false
    }
    fill(&mut grid, n, 0, &ok).then_some(grid)
}

/// Depth-first search for a path from `start` through all free cells.
/// With `close`, the last cell must also move back to `start`.
fn hamiltonian(spec: &InstanceSpec, start: (u32, u32), deltas: &[(i32, i32)], close: bool) -> Option<Vec<(u32, u32)>> {
    let total = spec.free_cells().len();
    let mut path = vec![start];
    let mut on_path = BTreeSet::from([start]);
    fn go(
        spec: &InstanceSpec,
        deltas: &[(i32, i32)],
        close: bool,
        total: usize,
        path: &mut Vec<(u32, u32)>,
        on_path: &mut BTreeSet<(u32, u32)>,
    ) -> bool {
        let last = *path.last().unwrap();
        if path.len() == total {
            return !close || deltas.iter().any(|&d| step(spec, last, d) == Some(path[0]));
        }
        for &d in deltas {
            if let Some(next) = step(spec, last, d) {
                if on_path.insert(next) {
                    path.push(next);
                    if go(spec, deltas, close, total, path, on_path) {
                        return true;
                    }
                    path.pop();
                    on_path.remove(&next);
                }
            }
        }
        false
    }
    go(spec, deltas, close, total, &mut path, &mut on_path).then_some(path)
}

/// A closed knight's tour over the free cells, as a cell sequence.
pub fn knights_tour(spec: &InstanceSpec) -> Option<Vec<(u32, u32)>> {
    match spec.tour_start() {
        None => Some(Vec::new()),
        Some(s) => hamiltonian(spec, s, &KNIGHT, true),
    }
}

/// A path from the start visiting every free cell once.
pub fn visitall_path(spec: &InstanceSpec) -> Option<Vec<(u32, u32)>> {
    let s = spec.start?;
    if spec.is_blocked(s.0, s.1) {
        return None;
    }
    hamiltonian(spec, s, &KING4, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_grid_is_reachable() {
        let mut s = InstanceSpec::new(Problem::Reachability, 4, 0);
        s.start = Some((1, 1));
        assert!(satisfiable(&s));
        s.blocked = vec![(3, 4), (4, 3)];
        assert_eq!(unreachable_cells(&s), vec![(4, 4)]);
    }

    #[test]
    fn four_by_four_has_no_closed_knights_tour() {
        assert!(!satisfiable(&InstanceSpec::new(Problem::KnightsTour, 4, 0)));
    }

    #[test]
    fn snake_path_exists() {
        let mut s = InstanceSpec::new(Problem::VisitallKt, 4, 0);
        s.start = Some((1, 1));
        assert_eq!(visitall_path(&s).unwrap().len(), 16);
        // a corner cut off from the start by two obstacles
        s.blocked = vec![(3, 4), (4, 3)];
        assert!(!satisfiable(&s));
    }

    #[test]
    fn sudoku_clash_in_block() {
        let mut s = InstanceSpec::new(Problem::Sudoku, 4, 0);
        s.clues = vec![(1, 1, 1)];
        assert!(satisfiable(&s));
        s.clues.push((2, 2, 1));
        assert!(!satisfiable(&s));
    }
}
