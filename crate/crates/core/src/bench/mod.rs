//! Benchmark encodings, instances, and brute-force oracles.

mod generate;
pub mod oracle;

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::quadtree::GridMapping;
use crate::syntax::{parse_program, Program};
use crate::{Error, Result};

pub use generate::{fig1a_sudoku, fig1c_reachability, generate_instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Problem {
    #[value(alias = "r")]
    Reachability,
    #[value(alias = "s")]
    Sudoku,
    #[value(alias = "kt")]
    KnightsTour,
    #[value(alias = "v")]
    VisitallPlan,
    #[value(alias = "vkt")]
    VisitallKt,
}

pub const PROBLEMS: [Problem; 5] = [
    Problem::Reachability,
    Problem::Sudoku,
    Problem::KnightsTour,
    Problem::VisitallPlan,
    Problem::VisitallKt,
];

/// How the grid of a problem is laid out over its sorts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridAxes {
    /// Sort of the column coordinate.
    pub x_sort: &'static str,
    /// Sort of the row coordinate.
    pub y_sort: &'static str,
    /// Grid object predicate.
    pub object: &'static str,
    /// Sorts of the grid object in argument order.
    pub order: [&'static str; 2],
}

impl GridAxes {
    pub fn order(&self) -> Vec<String> {
        self.order.iter().map(|s| s.to_string()).collect()
    }

    pub fn mapping(&self, g: &GridMapping) -> Result<crate::mapping::DomainMapping> {
        g.to_domain_mapping(self.x_sort, self.y_sort, &self.order())
    }

    /// Grid coordinates `(x, y)` of an object tuple in argument order.
    pub fn xy(&self, tuple: &[crate::syntax::Constant]) -> Option<(u32, u32)> {
        let v = |c: &crate::syntax::Constant| match c {
            crate::syntax::Constant::Int(i) => u32::try_from(*i).ok(),
            _ => None,
        };
        let (a, b) = (v(tuple.first()?)?, v(tuple.get(1)?)?);
        if self.order[0] == self.x_sort {
            Some((a, b))
        } else {
            Some((b, a))
        }
    }
}

const CELL_COL_ROW: GridAxes = GridAxes {
    x_sort: "col",
    y_sort: "row",
    object: "cell",
    order: ["col", "row"],
};

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Reachability => "reachability",
            Problem::Sudoku => "sudoku",
            Problem::KnightsTour => "knights_tour",
            Problem::VisitallPlan => "visitall_plan",
            Problem::VisitallKt => "visitall_kt",
        }
    }

    pub fn encoding_text(self) -> &'static str {
        match self {
            Problem::Reachability => include_str!("encodings/reachability.lp"),
            Problem::Sudoku => include_str!("encodings/sudoku.lp"),
            Problem::KnightsTour => include_str!("encodings/knights_tour.lp"),
            Problem::VisitallPlan => include_str!("encodings/visitall_plan.lp"),
            Problem::VisitallKt => include_str!("encodings/visitall_kt.lp"),
        }
    }

    pub fn axes(self) -> GridAxes {
        match self {
            Problem::Sudoku => GridAxes {
                x_sort: "column",
                y_sort: "row",
                object: "cell",
                order: ["row", "column"],
            },
            _ => CELL_COL_ROW,
        }
    }

    /// Name of the time sort, for planning encodings.
    pub fn time_sort(self) -> Option<&'static str> {
        (self == Problem::VisitallPlan).then_some("time")
    }

    /// Quad-tree branching for a grid of side `n`: 3 for 9x9 Sudoku.
    pub fn branching(self, n: u32) -> u32 {
        if self == Problem::Sudoku && n % 3 == 0 {
            3
        } else {
            2
        }
    }

    /// The encoding together with the facts of `instance`.
    pub fn program(self, instance: &InstanceSpec) -> Result<Program> {
        self.program_from_text(&instance.to_lp())
    }

    /// The encoding together with a fact file in the `.lp` syntax.
    pub fn program_from_text(self, instance: &str) -> Result<Program> {
        parse_program(&format!("{}\n{}", instance, self.encoding_text()))
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <Problem as clap::ValueEnum>::from_str(s, true)
            .map_err(|_| Error::Invalid(format!("unknown problem `{s}`")))
    }
}

/// A grid instance. Cells are `(x, y)`, x the column from the left and y
/// the row from the top, both 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub problem: Problem,
    pub n: u32,
    pub seed: u64,
    /// Obstacles (reachability, visitall) or forbidden cells (knight's tour).
    #[serde(default)]
    pub blocked: Vec<(u32, u32)>,
    /// Sudoku clues `(x, y, value)`.
    #[serde(default)]
    pub clues: Vec<(u32, u32, u32)>,
    #[serde(default)]
    pub start: Option<(u32, u32)>,
    /// Unsatisfiability confirmed by a brute-force oracle.
    #[serde(default)]
    pub certified: bool,
}

const META_PREFIX: &str = "%! ";

impl InstanceSpec {
    pub fn new(problem: Problem, n: u32, seed: u64) -> Self {
        InstanceSpec {
            problem,
            n,
            seed,
            blocked: Vec::new(),
            clues: Vec::new(),
            start: None,
            certified: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let inside = |&(x, y): &(u32, u32)| (1..=self.n).contains(&x) && (1..=self.n).contains(&y);
        let cells = self.blocked.iter().chain(&self.start).copied();
        let clue_cells = self.clues.iter().map(|&(x, y, _)| (x, y));
        if let Some(c) = cells.chain(clue_cells).find(|c| !inside(c)) {
            return Err(Error::Invalid(format!("cell {c:?} outside the {0}x{0} grid", self.n)));
        }
        if let Some(c) = self.clues.iter().find(|c| c.2 == 0 || c.2 > self.n) {
            return Err(Error::Invalid(format!("clue value {} outside 1..{}", c.2, self.n)));
        }
        if self.problem == Problem::Sudoku && !matches!(self.n, 4 | 9) {
            return Err(Error::Invalid("sudoku grids are 4x4 or 9x9".into()));
        }
        if self.problem != Problem::Sudoku && self.problem != Problem::KnightsTour && self.start.is_none() {
            return Err(Error::Invalid(format!("{} needs a start cell", self.problem)));
        }
        Ok(())
    }

    pub fn is_blocked(&self, x: u32, y: u32) -> bool {
        self.blocked.contains(&(x, y))
    }

    /// Free cells in row-major order.
    pub fn free_cells(&self) -> Vec<(u32, u32)> {
        (1..=self.n)
            .flat_map(|y| (1..=self.n).map(move |x| (x, y)))
            .filter(|&(x, y)| !self.is_blocked(x, y))
            .collect()
    }

    /// The knight's tour anchor: its start, else the first free cell.
    pub fn tour_start(&self) -> Option<(u32, u32)> {
        self.start.or_else(|| self.free_cells().first().copied())
    }

    /// Facts file: a metadata comment line, sort declarations, topology
    /// facts and instance facts.
    pub fn to_lp(&self) -> String {
        let n = self.n;
        let mut s = String::new();
        let meta = serde_json::to_string(self).expect("instances serialize");
        let _ = writeln!(s, "{META_PREFIX}{meta}");
        match self.problem {
            Problem::Sudoku => {
                let b = if n == 9 { 3 } else { 2 };
                let _ = writeln!(s, "#sort row = 1..{n}. #sort column = 1..{n}. #sort num = 1..{n}. #sort block = 1..{n}.");
                for y in 1..=n {
                    for x in 1..=n {
                        let blk = (y - 1) / b * b + (x - 1) / b + 1;
                        let _ = write!(s, "inblock({y},{x},{blk}). ");
                    }
                    s.push('\n');
                }
                for &(x, y, v) in &self.clues {
                    let _ = writeln!(s, "occupied({y},{x}). sol({y},{x},{v}).");
                }
            }
            p => {
                let _ = writeln!(s, "#sort col = 1..{n}. #sort row = 1..{n}.");
                let blocked = if p == Problem::KnightsTour { "forbidden" } else { "obstacle" };
                for &(x, y) in &self.blocked {
                    let _ = writeln!(s, "{blocked}({x},{y}).");
                }
                let start = if p == Problem::KnightsTour { self.tour_start() } else { self.start };
                if let Some((x, y)) = start {
                    let _ = writeln!(s, "start({x},{y}).");
                }
                match p {
                    Problem::Reachability => {
                        for (x, y, _, x2, y2) in moves(n, &KING4) {
                            let _ = writeln!(s, "adj({x},{y},{x2},{y2}).");
                        }
                    }
                    Problem::KnightsTour => {
                        let _ = writeln!(s, "#sort dir = 1..8.");
                        for (x, y, d, x2, y2) in moves(n, &KNIGHT) {
                            let _ = writeln!(s, "kdest({x},{y},{d},{x2},{y2}).");
                        }
                    }
                    _ => {
                        let _ = writeln!(s, "#sort dir = 1..4.");
                        for (x, y, d, x2, y2) in moves(n, &KING4) {
                            let _ = writeln!(s, "ndest({x},{y},{d},{x2},{y2}).");
                        }
                        if p == Problem::VisitallPlan {
                            let horizon = self.free_cells().len().saturating_sub(1);
                            let _ = writeln!(s, "#sort time = 0..{horizon}.");
                            for t in 0..horizon {
                                let _ = writeln!(s, "step({t},{}).", t + 1);
                            }
                        }
                    }
                }
            }
        }
        s
    }

    /// Reads the metadata line written by [`InstanceSpec::to_lp`].
    pub fn from_lp(text: &str) -> Result<Self> {
        let line = text
            .lines()
            .find_map(|l| l.strip_prefix(META_PREFIX))
            .ok_or_else(|| Error::Invalid("instance file has no metadata line".into()))?;
        let spec: InstanceSpec =
            serde_json::from_str(line).map_err(|e| Error::Invalid(format!("instance metadata: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }
}

/// 4-neighbour moves in the order right, down, left, up.
pub const KING4: [(i32, i32); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
pub const KNIGHT: [(i32, i32); 8] = [(1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2)];

/// All moves `(x, y, d, x2, y2)` staying on an `n`x`n` board; `d` is
/// 1-based.
pub fn moves(n: u32, deltas: &[(i32, i32)]) -> Vec<(u32, u32, usize, u32, u32)> {
    let mut out = Vec::new();
    for y in 1..=n {
        for x in 1..=n {
            for (d, &(dx, dy)) in deltas.iter().enumerate() {
                let (x2, y2) = (x as i32 + dx, y as i32 + dy);
                if (1..=n as i32).contains(&x2) && (1..=n as i32).contains(&y2) {
                    out.push((x, y, d + 1, x2 as u32, y2 as u32));
                }
            }
        }
    }
    out
}
