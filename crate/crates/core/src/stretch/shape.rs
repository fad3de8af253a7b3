use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::lattice::det;
use crate::wang::Compass;
use crate::{CaError, Cell, Result};

/// The six possible neighbors of a macro-tile. `N`/`S` are the translates
/// by `±ν`, `E`/`W` by `±μ`, `R1`/`R2` the remaining diagonal pair when the
/// shape touches it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BorderSide {
    N,
    S,
    E,
    W,
    R1,
    R2,
}

impl BorderSide {
    pub fn opposite(self) -> BorderSide {
        match self {
            BorderSide::N => BorderSide::S,
            BorderSide::S => BorderSide::N,
            BorderSide::E => BorderSide::W,
            BorderSide::W => BorderSide::E,
            BorderSide::R1 => BorderSide::R2,
            BorderSide::R2 => BorderSide::R1,
        }
    }

    pub fn from_compass(c: Compass) -> BorderSide {
        match c {
            Compass::N => BorderSide::N,
            Compass::S => BorderSide::S,
            Compass::E => BorderSide::E,
            Compass::W => BorderSide::W,
        }
    }
}

/// The edge of `cell` on its `side`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellEdge {
    pub cell: Cell,
    pub side: Compass,
}

impl CellEdge {
    /// Twice the midpoint, in integer coordinates.
    pub fn midpoint2(&self) -> Cell {
        let (dx, dy) = self.side.delta();
        (2 * self.cell.0 + dx, 2 * self.cell.1 + dy)
    }

    /// The same edge seen from the other cell.
    pub fn flipped(&self) -> CellEdge {
        let (dx, dy) = self.side.delta();
        CellEdge {
            cell: (self.cell.0 + dx, self.cell.1 + dy),
            side: self.side.opposite(),
        }
    }
}

/// Integer approximation of the parallelogram spanned by `ν` and `μ`.
///
/// Starts from the cells `x = s·ν + t·μ` with `0 ≤ s, t < 1`, whose
/// translates by the lattice generated by `ν` and `μ` partition the plane.
/// Pieces cut off near an acute vertex are moved to a lattice translate
/// touching the main body; this keeps the partition exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroShape {
    nu: Cell,
    mu: Cell,
    scale: i64,
    cells: Vec<Cell>,
    index: HashMap<Cell, usize>,
    borders: BTreeMap<BorderSide, Vec<CellEdge>>,
    vectors: BTreeMap<BorderSide, (i64, i64)>,
    /// Parallelogram cells moved to a translate, with the lattice step.
    moved: HashMap<Cell, (i64, i64)>,
}

fn floor_div(p: i64, q: i64) -> i64 {
    if q < 0 {
        (-p).div_euclid(-q)
    } else {
        p.div_euclid(q)
    }
}

impl MacroShape {
    /// Scaled `ν`, the translation to the north neighbor.
    pub fn nu(&self) -> Cell {
        self.nu
    }

    /// Scaled `μ`, the translation to the east neighbor.
    pub fn mu(&self) -> Cell {
        self.mu
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Sorted by `y`, then `x`.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index_of(&self, c: Cell) -> Option<usize> {
        self.index.get(&c).copied()
    }

    /// Border edges facing `side`, ordered by midpoint.
    pub fn border(&self, side: BorderSide) -> &[CellEdge] {
        self.borders.get(&side).map_or(&[], |v| v.as_slice())
    }

    pub fn borders(&self) -> &BTreeMap<BorderSide, Vec<CellEdge>> {
        &self.borders
    }

    pub fn neighbor_count(&self) -> usize {
        self.borders.len()
    }

    /// Whether the shape touches a diagonal translate, whose shared part is
    /// then a neutral side.
    pub fn overlap_suppressed(&self) -> bool {
        self.neighbor_count() == 6
    }

    /// Lattice coordinates `(e, n)` of the neighbor on `side`.
    pub fn side_offset(&self, side: BorderSide) -> Option<(i64, i64)> {
        self.vectors.get(&side).copied()
    }

    pub fn translate(&self, (e, n): (i64, i64)) -> Cell {
        (e * self.mu.0 + n * self.nu.0, e * self.mu.1 + n * self.nu.1)
    }

    /// Largest side of the bounding box.
    pub fn max_extent(&self) -> i64 {
        let xs = self.cells.iter().map(|c| c.0);
        let ys = self.cells.iter().map(|c| c.1);
        let w = xs.clone().max().unwrap() - xs.min().unwrap() + 1;
        let h = ys.clone().max().unwrap() - ys.min().unwrap() + 1;
        w.max(h)
    }

    /// Splits `x` as `c + e·μ + n·ν` with `c` in the shape.
    pub fn locate(&self, x: Cell) -> (Cell, (i64, i64)) {
        relocate(self.nu, self.mu, &self.moved, x)
    }
}

fn locate(nu: Cell, mu: Cell, x: Cell) -> (Cell, (i64, i64)) {
    let d = det(nu, mu);
    let n = floor_div(det(x, mu), d);
    let e = floor_div(det(nu, x), d);
    ((x.0 - n * nu.0 - e * mu.0, x.1 - n * nu.1 - e * mu.1), (e, n))
}

fn relocate(nu: Cell, mu: Cell, moved: &HashMap<Cell, (i64, i64)>, x: Cell) -> (Cell, (i64, i64)) {
    let (c, (e, n)) = locate(nu, mu, x);
    match moved.get(&c) {
        Some(&(le, ln)) => {
            let off = (le * mu.0 + ln * nu.0, le * mu.1 + ln * nu.1);
            ((c.0 + off.0, c.1 + off.1), (e - le, n - ln))
        }
        None => (c, (e, n)),
    }
}

fn vertex_gap_ok(nu: Cell, mu: Cell) -> bool {
    let inf = |v: Cell| v.0.abs().max(v.1.abs());
    let sum = (nu.0 + mu.0, nu.1 + mu.1);
    let diff = (nu.0 - mu.0, nu.1 - mu.1);
    [nu, mu, sum, diff].into_iter().all(|v| inf(v) >= 3)
}

/// Largest scale tried before giving up.
const MAX_SCALE: i64 = 16;

/// Builds the macro-tile shape for `ν` (north) and `μ` (east), scaling both
/// by the least `i` such that all parallelogram vertices are at least 3
/// apart (∞-norm) and the shape is edge-connected with its four axial
/// neighbors touching.
pub fn build_shape(nu: Cell, mu: Cell) -> Result<MacroShape> {
    if det(nu, mu) == 0 {
        return Err(CaError::InvalidArgument(format!("{nu:?} and {mu:?} are parallel")));
    }
    let first = (1..=MAX_SCALE).find(|&i| vertex_gap_ok((i * nu.0, i * nu.1), (i * mu.0, i * mu.1)));
    for i in first.unwrap_or(MAX_SCALE + 1)..=MAX_SCALE {
        if let Some(shape) = try_shape((i * nu.0, i * nu.1), (i * mu.0, i * mu.1), i) {
            return Ok(shape);
        }
    }
    Err(CaError::InvalidArgument(format!(
        "no connected macro shape for {nu:?}, {mu:?} up to scale {MAX_SCALE}"
    )))
}

/// The shape for `ν` and `μ` as given, without the vertex-distance
/// scaling. Fails if it is not a valid macro shape.
pub fn build_shape_unscaled(nu: Cell, mu: Cell) -> Result<MacroShape> {
    if det(nu, mu) == 0 {
        return Err(CaError::InvalidArgument(format!("{nu:?} and {mu:?} are parallel")));
    }
    try_shape(nu, mu, 1)
        .ok_or_else(|| CaError::InvalidArgument(format!("no connected macro shape for {nu:?}, {mu:?} at scale 1")))
}

fn try_shape(nu: Cell, mu: Cell, scale: i64) -> Option<MacroShape> {
    let corners = [(0, 0), nu, mu, (nu.0 + mu.0, nu.1 + mu.1)];
    let (x0, x1) = (corners.iter().map(|c| c.0).min()?, corners.iter().map(|c| c.0).max()?);
    let (y0, y1) = (corners.iter().map(|c| c.1).min()?, corners.iter().map(|c| c.1).max()?);
    let mut set: HashSet<Cell> = HashSet::new();
    for y in y0..=y1 {
        for x in x0..=x1 {
            if locate(nu, mu, (x, y)).1 == (0, 0) {
                set.insert((x, y));
            }
        }
    }
    let moved = join_components(nu, mu, &mut set)?;
    let mut cells: Vec<Cell> = set.into_iter().collect();
    cells.sort_by_key(|&(x, y)| (y, x));
    let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut by_offset: HashMap<(i64, i64), Vec<CellEdge>> = HashMap::new();
    for &c in &cells {
        for side in Compass::ALL {
            let (dx, dy) = side.delta();
            let nb = (c.0 + dx, c.1 + dy);
            if !index.contains_key(&nb) {
                by_offset.entry(relocate(nu, mu, &moved, nb).1).or_default().push(CellEdge { cell: c, side });
            }
        }
    }
    let axial = [
        (BorderSide::N, (0, 1)),
        (BorderSide::S, (0, -1)),
        (BorderSide::E, (1, 0)),
        (BorderSide::W, (-1, 0)),
    ];
    let mut vectors = BTreeMap::new();
    for (side, off) in axial {
        if !by_offset.contains_key(&off) {
            return None;
        }
        vectors.insert(side, off);
    }
    let extra: Vec<(i64, i64)> = by_offset.keys().copied().filter(|o| o.0 != 0 && o.1 != 0).collect();
    match extra.as_slice() {
        [] => {}
        [a, b] if *a == (-b.0, -b.1) => {
            let r1 = if a.1 > 0 { *a } else { *b };
            vectors.insert(BorderSide::R1, r1);
            vectors.insert(BorderSide::R2, (-r1.0, -r1.1));
        }
        _ => return None,
    }
    let mut borders = BTreeMap::new();
    for (&side, off) in &vectors {
        let mut edges = by_offset.remove(off).expect("offset present");
        edges.sort_by_key(|e| e.midpoint2());
        borders.insert(side, edges);
    }
    Some(MacroShape {
        nu,
        mu,
        scale,
        cells,
        index,
        borders,
        vectors,
        moved,
    })
}

/// Moves every component other than the largest to a lattice translate
/// adjacent to the rest. Returns the lattice step of each moved original
/// cell, or `None` if some piece has no such translate.
fn join_components(nu: Cell, mu: Cell, set: &mut HashSet<Cell>) -> Option<HashMap<Cell, (i64, i64)>> {
    let steps = [(0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, -1), (1, -1), (-1, 1)];
    let mut moved: HashMap<Cell, (i64, i64)> = HashMap::new();
    // Current position of each original cell.
    let mut origin_of: HashMap<Cell, Cell> = set.iter().map(|&c| (c, c)).collect();
    for _ in 0..set.len() {
        let mut comps = components(set);
        if comps.len() == 1 {
            return Some(moved);
        }
        comps.sort_by_key(|c| std::cmp::Reverse(c.len()));
        let piece = comps.pop().expect("at least two components");
        for &cell in &piece {
            set.remove(&cell);
        }
        let (le, ln) = steps.into_iter().find(|&(e, n)| {
            let off = (e * mu.0 + n * nu.0, e * mu.1 + n * nu.1);
            piece.iter().any(|&c| {
                Compass::ALL.iter().any(|d| {
                    let (dx, dy) = d.delta();
                    set.contains(&(c.0 + off.0 + dx, c.1 + off.1 + dy))
                })
            })
        })?;
        let off = (le * mu.0 + ln * nu.0, le * mu.1 + ln * nu.1);
        for &c in &piece {
            let to = (c.0 + off.0, c.1 + off.1);
            let orig = origin_of.remove(&c).expect("tracked cell");
            let prev = moved.remove(&orig).unwrap_or((0, 0));
            let total = (prev.0 + le, prev.1 + ln);
            if total != (0, 0) {
                moved.insert(orig, total);
            }
            origin_of.insert(to, orig);
            set.insert(to);
        }
    }
    None
}

fn components(set: &HashSet<Cell>) -> Vec<Vec<Cell>> {
    let mut seen: HashSet<Cell> = HashSet::new();
    let mut out = Vec::new();
    let mut sorted: Vec<Cell> = set.iter().copied().collect();
    sorted.sort();
    for start in sorted {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for d in Compass::ALL {
                let (dx, dy) = d.delta();
                let nb = (c.0 + dx, c.1 + dy);
                if set.contains(&nb) && seen.insert(nb) {
                    comp.push(nb);
                    queue.push_back(nb);
                }
            }
        }
        out.push(comp);
    }
    out
}
