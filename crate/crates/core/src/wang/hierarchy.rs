use super::tile::Compass;
use crate::{CaError, Cell, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Blank,
    ArmH,
    ArmV,
    Center,
}

impl Label {
    pub fn is_cross(self) -> bool {
        self != Label::Blank
    }
}

/// Where the origin sits in a limit placement of the growing patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Anchor {
    SWCorner,
    SouthMid,
    EastMid,
    Center,
}

impl Anchor {
    pub const ALL: [Anchor; 4] = [Anchor::SWCorner, Anchor::SouthMid, Anchor::EastMid, Anchor::Center];

    /// Number of disjoint paths of the limit tiling.
    pub fn path_count(self) -> usize {
        match self {
            Anchor::SWCorner => 1,
            Anchor::SouthMid | Anchor::EastMid => 2,
            Anchor::Center => 4,
        }
    }
}

/// `2^(n+1) − 1`: the step-0 pattern is a single blank cell.
pub fn side_for_step(n: u32) -> usize {
    (1usize << (n + 1)) - 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchicalPattern {
    step: u32,
    side: usize,
    anchor: Anchor,
    labels: Vec<Label>,
}

impl HierarchicalPattern {
    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn anchor(&self) -> Anchor {
        self.anchor
    }

    /// Row-major, `y = 0` the southmost row.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, (x, y): (usize, usize)) -> Label {
        self.labels[y * self.side + x]
    }

    /// Pattern coordinates of the plane origin.
    pub fn origin(&self) -> (usize, usize) {
        let (s, c) = (self.side, self.side / 2);
        match self.anchor {
            Anchor::SWCorner => (0, 0),
            Anchor::SouthMid => (c, 0),
            Anchor::EastMid => (s - 1, c),
            Anchor::Center => (c, c),
        }
    }

    /// Plane position of a pattern cell.
    pub fn plane(&self, (x, y): (usize, usize)) -> Cell {
        let (ox, oy) = self.origin();
        (x as i64 - ox as i64, y as i64 - oy as i64)
    }

    /// The step-(n−1) block in quadrant `q` (0 = SW, 1 = SE, 2 = NW, 3 = NE).
    pub fn quadrant(&self, q: usize) -> Vec<Label> {
        let half = self.side / 2;
        let (x0, y0) = [(0, 0), (half + 1, 0), (0, half + 1), (half + 1, half + 1)][q];
        (0..half)
            .flat_map(|y| (0..half).map(move |x| (x0 + x, y0 + y)))
            .map(|c| self.label(c))
            .collect()
    }
}

/// The step-`n` pattern: four step-(n−1) copies separated by a full
/// horizontal and a full vertical line forming the central cross.
pub fn generate_hierarchy(step: u32, anchor: Anchor, limits: &Limits) -> Result<HierarchicalPattern> {
    if step == 0 || step > 30 {
        return Err(CaError::InvalidArgument(format!("hierarchy step must be in 1..=30, got {step}")));
    }
    let side = side_for_step(step);
    let cells = (side as u128) * (side as u128);
    if cells > limits.max_cells as u128 {
        return Err(CaError::cap("hierarchy cells", cells, limits.max_cells as u128));
    }
    let mut labels = vec![Label::Blank; side * side];
    fill(&mut labels, side, 0, 0, step);
    Ok(HierarchicalPattern {
        step,
        side,
        anchor,
        labels,
    })
}

fn fill(labels: &mut [Label], stride: usize, x0: usize, y0: usize, n: u32) {
    if n == 0 {
        return;
    }
    let s = side_for_step(n);
    let c = s / 2;
    for i in 0..s {
        labels[(y0 + c) * stride + x0 + i] = Label::ArmH;
        labels[(y0 + i) * stride + x0 + c] = Label::ArmV;
    }
    labels[(y0 + c) * stride + x0 + c] = Label::Center;
    for (dx, dy) in [(0, 0), (c + 1, 0), (0, c + 1), (c + 1, c + 1)] {
        fill(labels, stride, x0 + dx, y0 + dy, n - 1);
    }
}

/// Generalized Hilbert curve over the rectangle spanned by `a` (major
/// axis) and `b` from `start`. Steps are unit steps except possibly one
/// diagonal step when the major side is odd and the minor side even.
pub fn gilbert(start: Cell, a: Cell, b: Cell) -> Vec<Cell> {
    let mut out = Vec::with_capacity(((a.0 + a.1).abs() * (b.0 + b.1).abs()) as usize);
    gilbert_rec(start, a, b, &mut out);
    out
}

fn gilbert_rec((x, y): Cell, (ax, ay): Cell, (bx, by): Cell, out: &mut Vec<Cell>) {
    let w = (ax + ay).abs();
    let h = (bx + by).abs();
    let (dax, day) = (ax.signum(), ay.signum());
    let (dbx, dby) = (bx.signum(), by.signum());
    if h == 1 {
        out.extend((0..w).map(|i| (x + i * dax, y + i * day)));
        return;
    }
    if w == 1 {
        out.extend((0..h).map(|i| (x + i * dbx, y + i * dby)));
        return;
    }
    let (mut ax2, mut ay2) = (ax.div_euclid(2), ay.div_euclid(2));
    let (mut bx2, mut by2) = (bx.div_euclid(2), by.div_euclid(2));
    let w2 = (ax2 + ay2).abs();
    let h2 = (bx2 + by2).abs();
    if 2 * w > 3 * h {
        if w2 % 2 == 1 && w > 2 {
            ax2 += dax;
            ay2 += day;
        }
        gilbert_rec((x, y), (ax2, ay2), (bx, by), out);
        gilbert_rec((x + ax2, y + ay2), (ax - ax2, ay - ay2), (bx, by), out);
    } else {
        if h2 % 2 == 1 && h > 2 {
            bx2 += dbx;
            by2 += dby;
        }
        gilbert_rec((x, y), (bx2, by2), (ax2, ay2), out);
        gilbert_rec((x + bx2, y + by2), (ax, ay), (bx - bx2, by - by2), out);
        gilbert_rec(
            (x + (ax - dax) + (bx2 - dbx), y + (ay - day) + (by2 - dby)),
            (-bx2, -by2),
            (-(ax - ax2), -(ay - ay2)),
            out,
        );
    }
}

/// Disjoint directed paths covering a hierarchical pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCover {
    side: usize,
    dirs: Vec<Compass>,
    paths: Vec<Vec<(usize, usize)>>,
}

impl PathCover {
    pub fn side(&self) -> usize {
        self.side
    }

    /// Direction of every cell, row-major. The last cell of each path
    /// points out of the pattern.
    pub fn dirs(&self) -> &[Compass] {
        &self.dirs
    }

    pub fn dir(&self, (x, y): (usize, usize)) -> Compass {
        self.dirs[y * self.side + x]
    }

    pub fn paths(&self) -> &[Vec<(usize, usize)>] {
        &self.paths
    }

    /// Recovers the paths from the directions alone: starts are cells no
    /// other cell points to.
    pub fn traced_paths(&self) -> Vec<Vec<(usize, usize)>> {
        let s = self.side;
        let step = |(x, y): (usize, usize)| -> Option<(usize, usize)> {
            let (dx, dy) = self.dir((x, y)).delta();
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            (nx >= 0 && ny >= 0 && (nx as usize) < s && (ny as usize) < s).then_some((nx as usize, ny as usize))
        };
        let mut has_pred = vec![false; s * s];
        for y in 0..s {
            for x in 0..s {
                if let Some((nx, ny)) = step((x, y)) {
                    has_pred[ny * s + nx] = true;
                }
            }
        }
        let mut out = Vec::new();
        for y in 0..s {
            for x in 0..s {
                if has_pred[y * s + x] {
                    continue;
                }
                let mut path = vec![(x, y)];
                let mut here = (x, y);
                while let Some(next) = step(here) {
                    if path.len() > s * s {
                        break;
                    }
                    path.push(next);
                    here = next;
                }
                out.push(path);
            }
        }
        out
    }
}

/// Attaches plane-filling paths to the pattern: one for the SW-corner
/// anchor, two for the mid-side anchors, four for the centered anchor.
///
/// Cross cells outside every quadrant join the region clockwise-adjacent
/// to them; the center cell opens the north-east path.
pub fn attach_space_filling_path(h: &HierarchicalPattern) -> PathCover {
    let s = h.side as i64;
    let c = s / 2;
    let paths: Vec<Vec<Cell>> = match h.anchor {
        Anchor::SWCorner => vec![gilbert((0, 0), (s, 0), (0, s))],
        Anchor::SouthMid => south_mid(s),
        Anchor::EastMid => south_mid(s)
            .into_iter()
            .map(|p| p.into_iter().map(|(x, y)| (s - 1 - y, x)).collect())
            .collect(),
        Anchor::Center => {
            let mut ne = vec![(c, c)];
            ne.extend(gilbert((c, c + 1), (c + 1, 0), (0, c)));
            let rot = |p: &[Cell]| -> Vec<Cell> { p.iter().map(|&(x, y)| (y, s - 1 - x)).collect() };
            let se = rot(&ne[1..]);
            let sw = rot(&se);
            let nw = rot(&sw);
            vec![ne, se, sw, nw]
        }
    };
    let side = h.side;
    let mut dirs = vec![None; side * side];
    for p in &paths {
        for pair in p.windows(2) {
            let d = Compass::from_delta((pair[1].0 - pair[0].0, pair[1].1 - pair[0].1))
                .expect("paths move by unit steps");
            dirs[pair[0].1 as usize * side + pair[0].0 as usize] = Some(d);
        }
        let (lx, ly) = *p.last().expect("non-empty path");
        let out = Compass::ALL
            .into_iter()
            .find(|d| {
                let (nx, ny) = (lx + d.delta().0, ly + d.delta().1);
                nx < 0 || ny < 0 || nx >= s || ny >= s
            })
            .expect("paths end on the pattern boundary");
        dirs[ly as usize * side + lx as usize] = Some(out);
    }
    PathCover {
        side,
        dirs: dirs.into_iter().map(|d| d.expect("paths cover the pattern")).collect(),
        paths: paths
            .into_iter()
            .map(|p| p.into_iter().map(|(x, y)| (x as usize, y as usize)).collect())
            .collect(),
    }
}

/// East path: center and north arm, then the east block downward. West
/// path: south arm, then the west block upward.
fn south_mid(s: i64) -> Vec<Vec<Cell>> {
    let c = s / 2;
    let mut east: Vec<Cell> = (c..s).map(|y| (c, y)).collect();
    east.extend(gilbert((c + 1, s - 1), (0, -s), (c, 0)));
    let mut west: Vec<Cell> = (0..c).rev().map(|y| (c, y)).collect();
    west.extend(gilbert((c - 1, 0), (0, s), (-c, 0)));
    vec![east, west]
}
