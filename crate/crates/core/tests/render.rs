use std::collections::{BTreeMap, BTreeSet};

use absgrid::bench::{fig1c_reachability, InstanceSpec, Problem};
use absgrid::quadtree::{GridMapping, Region};
use absgrid::render::{render, RenderFormat};

fn fig1c_mapping() -> GridMapping {
    let g = GridMapping::initial(8, 2).unwrap();
    let g = g.split(&Region { x: (5, 8), y: (5, 8) }).unwrap();
    let g = g.split(&Region { x: (5, 6), y: (7, 8) }).unwrap();
    g.split(&Region { x: (7, 8), y: (5, 6) }).unwrap()
}

/// Reads the region partition and the cell marks back from an ASCII
/// picture: cells are joined unless a border separates them.
fn read_ascii(text: &str, n: u32) -> (BTreeSet<BTreeSet<(u32, u32)>>, BTreeMap<(u32, u32), char>) {
    let lines: Vec<Vec<char>> = text.lines().map(|l| l.chars().collect()).collect();
    assert_eq!(lines.len() as u32, 2 * n + 1);
    let at = |line: usize, col: usize| lines[line].get(col).copied().unwrap_or(' ');
    let slot = |x: u32| (x as usize - 1) * 5;
    let row = |y: u32| 2 * (y as usize - 1) + 1;
    let mut parent: BTreeMap<(u32, u32), (u32, u32)> = BTreeMap::new();
    fn find(p: &mut BTreeMap<(u32, u32), (u32, u32)>, c: (u32, u32)) -> (u32, u32) {
        let up = p[&c];
        if up == c {
            return c;
        }
        let r = find(p, up);
        p.insert(c, r);
        r
    }
    let mut marks = BTreeMap::new();
    for y in 1..=n {
        for x in 1..=n {
            parent.insert((x, y), (x, y));
            marks.insert((x, y), at(row(y), slot(x) + 3));
        }
    }
    for y in 1..=n {
        for x in 1..=n {
            if x > 1 && at(row(y), slot(x) + 1) == ' ' {
                let (a, b) = (find(&mut parent, (x - 1, y)), find(&mut parent, (x, y)));
                parent.insert(a, b);
            }
            if y > 1 && at(row(y) - 1, slot(x) + 3) == ' ' {
                let (a, b) = (find(&mut parent, (x, y - 1)), find(&mut parent, (x, y)));
                parent.insert(a, b);
            }
        }
    }
    let mut groups: BTreeMap<(u32, u32), BTreeSet<(u32, u32)>> = BTreeMap::new();
    for y in 1..=n {
        for x in 1..=n {
            let r = find(&mut parent, (x, y));
            groups.entry(r).or_default().insert((x, y));
        }
    }
    (groups.into_values().collect(), marks)
}

fn leaf_cells(g: &GridMapping) -> BTreeSet<BTreeSet<(u32, u32)>> {
    g.leaves().iter().map(|r| r.cells().collect()).collect()
}

#[test]
fn fig1c_partition_and_cells() {
    let spec = fig1c_reachability();
    let g = fig1c_mapping();
    let text = render(&g, &spec, RenderFormat::Ascii).unwrap();
    let (parts, marks) = read_ascii(&text, 8);
    assert_eq!(parts, leaf_cells(&g), "\n{text}");
    for ((x, y), c) in marks {
        let want = if spec.is_blocked(x, y) {
            '#'
        } else if spec.start == Some((x, y)) {
            '@'
        } else {
            '.'
        };
        assert_eq!(c, want, "cell ({x},{y})\n{text}");
    }
}

#[test]
fn top_level_borders_are_double() {
    let spec = fig1c_reachability();
    let text = render(&fig1c_mapping(), &spec, RenderFormat::Ascii).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // border lines above rows 1, 5 and below 8
    for (i, l) in lines.iter().enumerate() {
        let double = l.contains('=');
        assert_eq!(double, i % 8 == 0, "line {i}: {l}");
    }
    for l in lines.iter().skip(1).step_by(2) {
        assert!(l.starts_with("||") && l.ends_with("||"));
        assert_eq!(&l[20..22], "||", "{l}");
    }
}

#[test]
fn coarsest_and_identity() {
    let spec = InstanceSpec {
        start: Some((1, 1)),
        ..InstanceSpec::new(Problem::Reachability, 8, 0)
    };
    let coarse = GridMapping::initial(8, 2).unwrap();
    let (parts, _) = read_ascii(&render(&coarse, &spec, RenderFormat::Ascii).unwrap(), 8);
    assert_eq!(parts.len(), 4);
    let id = GridMapping::identity(8, 2).unwrap();
    let (parts, _) = read_ascii(&render(&id, &spec, RenderFormat::Ascii).unwrap(), 8);
    assert_eq!(parts.len(), 64);
    assert!(parts.iter().all(|p| p.len() == 1));
}

#[test]
fn svg_outlines_nest_by_depth() {
    let spec = fig1c_reachability();
    let g = fig1c_mapping();
    let svg = render(&g, &spec, RenderFormat::Svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg, render(&g, &spec, RenderFormat::Svg).unwrap());
    let widths: Vec<f64> = svg
        .lines()
        .filter(|l| l.contains(r#"fill="none""#))
        .map(|l| {
            let w = l.split(r#"stroke-width=""#).nth(1).unwrap();
            w[..w.find('"').unwrap()].parse().unwrap()
        })
        .collect();
    // root, 4 quadrants, 4 + 4 + 4 below the split ones
    assert_eq!(widths.len(), 17);
    assert!(widths.windows(2).all(|w| w[0] >= w[1]));
    assert!(widths[0] > *widths.last().unwrap());
    assert_eq!(svg.matches(r##"fill="#444""##).count(), spec.blocked.len());
    assert_eq!(svg.matches("<circle").count(), 1);
}

#[test]
fn size_mismatch_is_an_error() {
    let spec = fig1c_reachability();
    assert!(render(&GridMapping::initial(4, 2).unwrap(), &spec, RenderFormat::Ascii).is_err());
}
