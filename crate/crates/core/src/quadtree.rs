//! Hierarchical grid abstractions (quad-trees, or 9-ary trees for Sudoku).
//!
//! Coordinates are 1-based; `x` is the column counted from the left and
//! `y` the row counted from the top.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::mapping::DomainMapping;
use crate::syntax::Constant;
use crate::{Error, Result};

/// A square block of cells, bounds inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Region {
    pub x: (u32, u32),
    pub y: (u32, u32),
}

impl Region {
    pub fn side(&self) -> u32 {
        self.x.1 - self.x.0 + 1
    }

    pub fn size(&self) -> u32 {
        self.side() * self.side()
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        (self.x.0..=self.x.1).contains(&x) && (self.y.0..=self.y.1).contains(&y)
    }

    pub fn contains_region(&self, other: &Region) -> bool {
        self.x.0 <= other.x.0 && other.x.1 <= self.x.1 && self.y.0 <= other.y.0 && other.y.1 <= self.y.1
    }

    /// Sort key putting the top-left-most region first.
    pub fn top_left_key(&self) -> (u32, u32) {
        (self.y.0, self.x.0)
    }

    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (self.y.0..=self.y.1).flat_map(move |y| (self.x.0..=self.x.1).map(move |x| (x, y)))
    }

    fn children(&self, b: u32) -> Vec<Region> {
        let s = self.side() / b;
        let mut out = Vec::new();
        for j in 0..b {
            for i in 0..b {
                let x0 = self.x.0 + i * s;
                let y0 = self.y.0 + j * s;
                out.push(Region {
                    x: (x0, x0 + s - 1),
                    y: (y0, y0 + s - 1),
                });
            }
        }
        out
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={}..{} y={}..{}", self.x.0, self.x.1, self.y.0, self.y.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionNode {
    pub extent: Region,
    pub depth: u32,
    /// Empty for a leaf, else `b²` children in row-major order.
    pub children: Vec<Arc<RegionNode>>,
}

impl RegionNode {
    fn leaf(extent: Region, depth: u32) -> Arc<Self> {
        Arc::new(RegionNode {
            extent,
            depth,
            children: Vec::new(),
        })
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn expand(&self, b: u32) -> Arc<Self> {
        Arc::new(RegionNode {
            extent: self.extent,
            depth: self.depth,
            children: self
                .extent
                .children(b)
                .into_iter()
                .map(|r| RegionNode::leaf(r, self.depth + 1))
                .collect(),
        })
    }

    fn collect_leaves(&self, out: &mut Vec<Region>) {
        if self.is_leaf() {
            out.push(self.extent);
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }
}

/// Denominator of the cost measure.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CostDenominator {
    /// `n² 2^{-i²}` per level, read literally.
    #[default]
    Literal,
    /// The number of regions of side `b^i`, `n² b^{-2i}`.
    PerLevelCount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMapping {
    n: u32,
    branching: u32,
    root: Arc<RegionNode>,
    /// Leaves in top-left-most order.
    leaves: Vec<Region>,
}

fn log_exact(n: u32, b: u32) -> Option<u32> {
    let mut k = 0;
    let mut v = 1u32;
    while v < n {
        v = v.checked_mul(b)?;
        k += 1;
    }
    (v == n && k >= 1).then_some(k)
}

impl GridMapping {
    fn with_root(n: u32, branching: u32, root: Arc<RegionNode>) -> Self {
        let mut leaves = Vec::new();
        root.collect_leaves(&mut leaves);
        leaves.sort_by_key(Region::top_left_key);
        GridMapping {
            n,
            branching,
            root,
            leaves,
        }
    }

    /// The root expanded once: `b²` leaves of side `n/b`.
    pub fn initial(n: u32, branching: u32) -> Result<Self> {
        if branching < 2 || log_exact(n, branching).is_none() {
            return Err(Error::Grid(format!("grid side {n} is not a power of {branching}")));
        }
        let root = RegionNode {
            extent: Region { x: (1, n), y: (1, n) },
            depth: 0,
            children: Vec::new(),
        };
        Ok(Self::with_root(n, branching, root.expand(branching)))
    }

    /// Every leaf a single cell.
    pub fn identity(n: u32, branching: u32) -> Result<Self> {
        let mut g = Self::initial(n, branching)?;
        while let Some(r) = g.leaves.iter().find(|r| r.side() > 1).copied() {
            g = g.split(&r)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn branching(&self) -> u32 {
        self.branching
    }

    pub fn root(&self) -> &RegionNode {
        &self.root
    }

    pub fn leaves(&self) -> &[Region] {
        &self.leaves
    }

    pub fn leaf_at(&self, x: u32, y: u32) -> Option<&Region> {
        self.leaves.iter().find(|r| r.contains(x, y))
    }

    pub fn is_identity(&self) -> bool {
        self.leaves.iter().all(|r| r.side() == 1)
    }

    /// The largest non-singleton leaf, top-left-most among equals.
    pub fn largest_leaf(&self) -> Option<Region> {
        let mut best: Option<Region> = None;
        for r in &self.leaves {
            if r.side() > 1 && best.is_none_or(|b| r.side() > b.side()) {
                best = Some(*r);
            }
        }
        best
    }

    /// Replaces `leaf` by its `b²` children.
    pub fn split(&self, leaf: &Region) -> Result<Self> {
        if !self.leaves.contains(leaf) {
            return Err(Error::Grid(format!("{leaf} is not a leaf")));
        }
        if leaf.side() == 1 {
            return Err(Error::Grid(format!("cannot split the single cell {leaf}")));
        }
        fn go(node: &Arc<RegionNode>, leaf: &Region, b: u32) -> Arc<RegionNode> {
            if node.extent == *leaf {
                return node.expand(b);
            }
            if !node.extent.contains_region(leaf) {
                return node.clone();
            }
            Arc::new(RegionNode {
                extent: node.extent,
                depth: node.depth,
                children: node.children.iter().map(|c| go(c, leaf, b)).collect(),
            })
        }
        Ok(Self::with_root(self.n, self.branching, go(&self.root, leaf, self.branching)))
    }

    /// Level `i` of a region of side `b^i`.
    fn level(&self, r: &Region) -> u32 {
        log_exact(r.side(), self.branching).unwrap_or(0)
    }

    /// Number of leaves of side `b^i`, for `i = 0..=ℓ`.
    pub fn level_counts(&self) -> Vec<usize> {
        let top = self.top_level();
        let mut out = vec![0; top as usize + 1];
        for r in &self.leaves {
            out[self.level(r) as usize] += 1;
        }
        out
    }

    /// ℓ, the level of the regions of the initial mapping.
    pub fn top_level(&self) -> u32 {
        log_exact(self.n, self.branching).unwrap() - 1
    }

    /// The cost measure in [0,1]; higher means finer. Branching 3 always
    /// uses the per-level count. A grid whose initial mapping already is the
    /// identity (ℓ = 0) has cost 0.
    pub fn cost(&self, denominator: CostDenominator) -> f64 {
        let top = self.top_level();
        let n2 = f64::from(self.n * self.n);
        let b = f64::from(self.branching);
        let counts = self.level_counts();
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..=top {
            let w = f64::from(top - i);
            num += counts[i as usize] as f64 * w;
            let regions = match denominator {
                CostDenominator::Literal if self.branching == 2 => n2 * 2f64.powi(-((i * i) as i32)),
                _ => n2 * b.powi(-2 * i as i32),
            };
            den += regions * w;
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// The joint mapping over `(x_sort, y_sort)` whose clusters are the
    /// leaves. `order` lists the two sorts in the order of the program's
    /// grid object, e.g. `["row", "column"]` for `cell(row, column)`.
    pub fn to_domain_mapping(&self, x_sort: &str, y_sort: &str, order: &[String]) -> Result<DomainMapping> {
        let x_first = match order {
            [a, b] if a == x_sort && b == y_sort => true,
            [a, b] if a == y_sort && b == x_sort => false,
            _ => {
                return Err(Error::Grid(format!(
                    "object sorts ({}) do not match the grid sorts {x_sort}, {y_sort}",
                    order.join(", ")
                )))
            }
        };
        let groups = self
            .leaves
            .iter()
            .map(|r| {
                r.cells()
                    .map(|(x, y)| {
                        let (x, y) = (Constant::Int(x.into()), Constant::Int(y.into()));
                        if x_first {
                            vec![x, y]
                        } else {
                            vec![y, x]
                        }
                    })
                    .collect()
            })
            .collect();
        DomainMapping::from_groups(order.to_vec(), groups)
    }

    /// Rebuilds the tree whose leaves are exactly `leaves`.
    pub fn from_leaves(n: u32, branching: u32, leaves: &[Region]) -> Result<Self> {
        let mut g = Self::initial(n, branching)?;
        let mut want = leaves.to_vec();
        want.sort_by_key(Region::top_left_key);
        want.dedup();
        for w in &want {
            if w.x.1 > n || w.y.1 > n || w.x.0 == 0 || w.y.0 == 0 {
                return Err(Error::Grid(format!("{w} lies outside the {n}x{n} grid")));
            }
        }
        loop {
            let next = g
                .leaves
                .iter()
                .find(|l| !want.contains(l) && want.iter().any(|w| l.contains_region(w) && l != &w))
                .copied();
            match next {
                Some(l) => g = g.split(&l)?,
                None => break,
            }
        }
        if g.leaves != want {
            return Err(Error::Grid("regions do not form a quad-tree partition".into()));
        }
        Ok(g)
    }
}

impl fmt::Display for GridMapping {
    /// `n=8 b=2; x=1..4 y=1..4; ...` with leaves in top-left-most order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} b={}", self.n, self.branching)?;
        for r in &self.leaves {
            write!(f, "; {r}")?;
        }
        Ok(())
    }
}

fn parse_range(s: &str) -> Option<(u32, u32)> {
    let (a, b) = s.split_once("..").unwrap_or((s, s));
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl FromStr for GridMapping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Grid(format!("cannot read grid mapping: {what}"));
        let mut parts = s.split(';').map(str::trim).filter(|p| !p.is_empty());
        let head = parts.next().ok_or_else(|| bad("empty"))?;
        let (mut n, mut b) = (None, None);
        for kv in head.split_whitespace() {
            match kv.split_once('=') {
                Some(("n", v)) => n = v.parse().ok(),
                Some(("b", v)) => b = v.parse().ok(),
                _ => return Err(bad(kv)),
            }
        }
        let (n, b) = (n.ok_or_else(|| bad("missing n"))?, b.unwrap_or(2));
        let mut leaves = Vec::new();
        for p in parts {
            let (mut x, mut y) = (None, None);
            for kv in p.split_whitespace() {
                match kv.split_once('=') {
                    Some(("x", v)) => x = parse_range(v),
                    Some(("y", v)) => y = parse_range(v),
                    _ => return Err(bad(kv)),
                }
            }
            leaves.push(Region {
                x: x.ok_or_else(|| bad(p))?,
                y: y.ok_or_else(|| bad(p))?,
            });
        }
        if leaves.is_empty() {
            return Self::initial(n, b);
        }
        Self::from_leaves(n, b, &leaves)
    }
}

impl Serialize for GridMapping {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GridMapping {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_counts() {
        let g = GridMapping::initial(8, 2).unwrap();
        assert_eq!(g.leaves().len(), 4);
        let g = g.split(&g.leaves()[3]).unwrap();
        assert_eq!(g.level_counts(), vec![0, 4, 3]);
        assert!(g.split(&Region { x: (1, 1), y: (1, 1) }).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = GridMapping::initial(8, 2).unwrap();
        let g = g.split(&g.leaves()[3]).unwrap();
        let back: GridMapping = g.to_string().parse().unwrap();
        assert_eq!(back, g);
        assert!("n=8 b=2; x=1..8 y=1..4".parse::<GridMapping>().is_err());
    }

    #[test]
    fn nine_by_nine() {
        let g = GridMapping::initial(9, 3).unwrap();
        assert_eq!(g.leaves().len(), 9);
        assert!(g.leaves().iter().all(|r| r.side() == 3));
        assert!(GridMapping::initial(8, 3).is_err());
    }
}
