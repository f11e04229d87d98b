//! Grid pictures of a mapping over an instance.
//!
//! ASCII: `#` blocked cells, `@` the agent, digits for Sudoku clues. Region
//! borders use `+`, `|` and `-`; borders of the initial regions are drawn
//! double (`||` and `=`). SVG draws the same, with stroke widths shrinking
//! with region depth.

use std::fmt::Write as _;

use crate::bench::{InstanceSpec, Problem};
use crate::quadtree::{GridMapping, Region};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum RenderFormat {
    #[default]
    Ascii,
    Svg,
}

pub fn render(m: &GridMapping, spec: &InstanceSpec, format: RenderFormat) -> Result<String> {
    if m.n() != spec.n {
        return Err(Error::Grid(format!("mapping is for n={}, instance has n={}", m.n(), spec.n)));
    }
    Ok(match format {
        RenderFormat::Ascii => ascii(m, spec),
        RenderFormat::Svg => svg(m, spec),
    })
}

fn cell_mark(spec: &InstanceSpec, x: u32, y: u32) -> char {
    if let Some(&(_, _, v)) = spec.clues.iter().find(|c| c.0 == x && c.1 == y) {
        return char::from_digit(v, 10).unwrap_or('?');
    }
    if spec.is_blocked(x, y) {
        return '#';
    }
    if spec.problem != Problem::KnightsTour && spec.start == Some((x, y)) {
        return '@';
    }
    '.'
}

struct Borders<'a> {
    m: &'a GridMapping,
    top_side: u32,
}

impl Borders<'_> {
    fn leaf(&self, x: u32, y: u32) -> Option<&Region> {
        self.m.leaf_at(x, y)
    }

    /// Border left of column `x` (1-based; `x = n+1` is the right edge) in
    /// row `y`: 0 none, 1 plain, 2 top-level.
    fn vertical(&self, x: u32, y: u32) -> u8 {
        let n = self.m.n();
        if x == 1 || x == n + 1 || (x - 1) % self.top_side == 0 {
            2
        } else if self.leaf(x - 1, y) != self.leaf(x, y) {
            1
        } else {
            0
        }
    }

    /// Border above row `y` in column `x`.
    fn horizontal(&self, x: u32, y: u32) -> u8 {
        let n = self.m.n();
        if y == 1 || y == n + 1 || (y - 1) % self.top_side == 0 {
            2
        } else if self.leaf(x, y - 1) != self.leaf(x, y) {
            1
        } else {
            0
        }
    }
}

fn top_side(m: &GridMapping) -> u32 {
    m.n() / m.branching()
}

fn ascii(m: &GridMapping, spec: &InstanceSpec) -> String {
    let n = m.n();
    let b = Borders { m, top_side: top_side(m) };
    let mut out = String::new();
    for y in 1..=n + 1 {
        // border line above row y
        for x in 1..=n + 1 {
            let up = if y > 1 { b.vertical(x, y - 1) } else { 0 };
            let down = if y <= n { b.vertical(x, y) } else { 0 };
            let left = if x > 1 { b.horizontal(x - 1, y) } else { 0 };
            let right = if x <= n { b.horizontal(x, y) } else { 0 };
            let v = up.max(down);
            let fill = match left {
                0 => ' ',
                1 => '-',
                _ => '=',
            };
            let slot = match (v, left.max(right) > 0) {
                (0, false) => "  ".to_string(),
                (0, true) => format!("{fill}{fill}"),
                (1, false) => " |".to_string(),
                (_, false) => "||".to_string(),
                (1, true) => format!("{fill}+"),
                (_, true) => "++".to_string(),
            };
            out.push_str(&slot);
            if x <= n {
                out.push_str(match b.horizontal(x, y) {
                    0 => "   ",
                    1 => "---",
                    _ => "===",
                });
            }
        }
        out.push('\n');
        if y > n {
            break;
        }
        for x in 1..=n + 1 {
            out.push_str(match b.vertical(x, y) {
                0 => "  ",
                1 => " |",
                _ => "||",
            });
            if x <= n {
                let _ = write!(out, " {} ", cell_mark(spec, x, y));
            }
        }
        out.push('\n');
    }
    out
}

const CELL: u32 = 40;
const MARGIN: u32 = 10;

fn svg(m: &GridMapping, spec: &InstanceSpec) -> String {
    let n = m.n();
    let size = n * CELL + 2 * MARGIN;
    let px = |c: u32| MARGIN + (c - 1) * CELL;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>"#);
    for y in 1..=n {
        for x in 1..=n {
            let (cx, cy) = (px(x), px(y));
            match cell_mark(spec, x, y) {
                '#' => {
                    let _ = writeln!(s, r##"<rect x="{cx}" y="{cy}" width="{CELL}" height="{CELL}" fill="#444"/>"##);
                }
                '@' => {
                    let r = CELL / 3;
                    let _ = writeln!(
                        s,
                        r##"<circle cx="{}" cy="{}" r="{r}" fill="#c33"/>"##,
                        cx + CELL / 2,
                        cy + CELL / 2
                    );
                }
                '.' => {}
                d => {
                    let _ = writeln!(
                        s,
                        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="{}" text-anchor="middle">{d}</text>"#,
                        cx + CELL / 2,
                        cy + CELL * 2 / 3,
                        CELL / 2
                    );
                }
            }
        }
    }
    // region outlines, coarse to fine
    let mut regions: Vec<(u32, Region)> = Vec::new();
    collect(m.root(), &mut regions);
    regions.sort_by_key(|(depth, r)| (*depth, r.top_left_key()));
    let deepest = regions.iter().map(|(d, _)| *d).max().unwrap_or(0);
    for (depth, r) in regions {
        let width = (deepest + 2 - depth.min(deepest)) as f64 * 0.75;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="{width}"/>"#,
            px(r.x.0),
            px(r.y.0),
            r.side() * CELL,
            r.side() * CELL
        );
    }
    s.push_str("</svg>\n");
    s
}

fn collect(node: &crate::quadtree::RegionNode, out: &mut Vec<(u32, Region)>) {
    out.push((node.depth, node.extent));
    for c in &node.children {
        collect(c, out);
    }
}
