use std::collections::{HashMap, HashSet};

use super::shape::{BorderSide, CellEdge, MacroShape};
use crate::lattice::LatticeTorus;
use crate::wang::{check_tiling, count_torus_tilings, Color, Compass, Domain, Tile, TileSet, Tiling};
use crate::{CaError, Cell, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ColorKey {
    Neutral,
    Interior { base: usize, edge: CellEdge },
    Border { vertical: bool, color: Color, index: usize },
}

/// A tile set whose tiles are the cells of macro-tiles, one macro-tile per
/// base tile. Tile `(b, c)` has id `b·k + c` for base index `b` and shape
/// cell index `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StretchedTileSet {
    base: TileSet,
    shape: MacroShape,
    tiles: TileSet,
    neutral_color: Color,
    /// Colors used on edges inside a macro-tile.
    interior: HashSet<Color>,
}

impl StretchedTileSet {
    pub fn base(&self) -> &TileSet {
        &self.base
    }

    pub fn shape(&self) -> &MacroShape {
        &self.shape
    }

    pub fn tiles(&self) -> &TileSet {
        &self.tiles
    }

    pub fn neutral_color(&self) -> Color {
        self.neutral_color
    }

    /// Tile ids of the macro-tile of base tile `base_id`, in shape cell
    /// order.
    pub fn macro_tile(&self, base_id: usize) -> Result<Vec<usize>> {
        let b = self.base_index(base_id)?;
        let k = self.shape.len();
        Ok((0..k).map(|c| b * k + c).collect())
    }

    /// `(base id, shape cell)` of a stretched tile.
    pub fn decode(&self, id: usize) -> Result<(usize, Cell)> {
        let k = self.shape.len();
        let b = id / k;
        if b >= self.base.len() {
            return Err(CaError::UnknownTile(id));
        }
        Ok((self.base.tiles()[b].id, self.shape.cells()[id % k]))
    }

    /// Lattice step `(e, n)` to the macro-tile pointed by a base direction.
    pub fn macro_step(&self, dir: Compass) -> (i64, i64) {
        self.shape
            .side_offset(BorderSide::from_compass(dir))
            .expect("axial sides always exist")
    }

    fn base_index(&self, base_id: usize) -> Result<usize> {
        self.base
            .tiles()
            .iter()
            .position(|t| t.id == base_id)
            .ok_or(CaError::UnknownTile(base_id))
    }

    /// Number of ways to fill the shape with tiles of one macro-tile so
    /// that all interior edges match and every edge on the shape boundary
    /// carries a border color (capped at 2).
    pub fn assemblies(&self, base_id: usize) -> Result<usize> {
        let b = self.base_index(base_id)?;
        let k = self.shape.len();
        let cands: Vec<&Tile> = (0..k).map(|c| &self.tiles.tiles()[b * k + c]).collect();
        let cells = self.shape.cells();
        let mut placed: Vec<usize> = Vec::with_capacity(k);
        let mut cursor = vec![0usize];
        let mut found = 0;
        let fits = |placed: &[usize], pos: usize, t: &Tile| {
            Compass::ALL.iter().all(|&d| {
                let (dx, dy) = d.delta();
                let nb = (cells[pos].0 + dx, cells[pos].1 + dy);
                match self.shape.index_of(nb) {
                    Some(j) if j < pos => cands[placed[j]].color(d.opposite()) == t.color(d),
                    Some(_) => true,
                    None => !self.interior.contains(&t.color(d)),
                }
            })
        };
        loop {
            let pos = placed.len();
            if pos == k {
                found += 1;
                if found >= 2 {
                    return Ok(found);
                }
                placed.pop();
                cursor.pop();
                continue;
            }
            let start = cursor[pos];
            match (start..k).find(|&c| fits(&placed, pos, cands[c])) {
                Some(c) => {
                    cursor[pos] = c + 1;
                    placed.push(c);
                    cursor.push(0);
                }
                None if pos == 0 => return Ok(found),
                None => {
                    cursor.pop();
                    placed.pop();
                }
            }
        }
    }
}

/// Replaces every base tile by `k` tiles assembling into the macro shape.
/// Interior edges get colors private to the base tile; the border edge at
/// position `i` of side N/S (resp. E/W) gets the pair (base color, `i`);
/// the diagonal sides get the neutral color.
pub fn stretch_tileset(ts: &TileSet, shape: &MacroShape, limits: &Limits) -> Result<StretchedTileSet> {
    let total = ts.len() as u128 * shape.len() as u128;
    if total > limits.max_cells as u128 {
        return Err(CaError::cap("stretched tiles", total, limits.max_cells as u128));
    }
    let mut border_of: HashMap<CellEdge, (BorderSide, usize)> = HashMap::new();
    for (&side, edges) in shape.borders() {
        for (i, &e) in edges.iter().enumerate() {
            border_of.insert(e, (side, i));
        }
    }
    let mut palette: HashMap<ColorKey, Color> = HashMap::from([(ColorKey::Neutral, 0)]);
    let mut color = |key: ColorKey| -> Color {
        let n = palette.len() as Color;
        *palette.entry(key).or_insert(n)
    };
    let k = shape.len();
    let mut tiles = Vec::with_capacity(ts.len() * k);
    for (b, base) in ts.tiles().iter().enumerate() {
        for (ci, &c) in shape.cells().iter().enumerate() {
            let mut cols = [0; 4];
            for (slot, side) in Compass::ALL.into_iter().enumerate() {
                let edge = CellEdge { cell: c, side };
                let (dx, dy) = side.delta();
                let key = if shape.index_of((c.0 + dx, c.1 + dy)).is_some() {
                    let canon = edge.min(edge.flipped());
                    ColorKey::Interior { base: b, edge: canon }
                } else {
                    let (bs, index) = border_of[&edge];
                    match bs {
                        BorderSide::N | BorderSide::S => ColorKey::Border {
                            vertical: true,
                            color: base.color(if bs == BorderSide::N { Compass::N } else { Compass::S }),
                            index,
                        },
                        BorderSide::E | BorderSide::W => ColorKey::Border {
                            vertical: false,
                            color: base.color(if bs == BorderSide::E { Compass::E } else { Compass::W }),
                            index,
                        },
                        BorderSide::R1 | BorderSide::R2 => ColorKey::Neutral,
                    }
                };
                cols[slot] = color(key);
            }
            let mut t = Tile::new(b * k + ci, cols[0], cols[1], cols[2], cols[3]);
            t.direction = base.direction;
            tiles.push(t);
        }
    }
    let interior = palette
        .iter()
        .filter(|(k, _)| matches!(k, ColorKey::Interior { .. }))
        .map(|(_, &c)| c)
        .collect();
    Ok(StretchedTileSet {
        base: ts.clone(),
        shape: shape.clone(),
        tiles: TileSet::new(tiles)?,
        neutral_color: 0,
        interior,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismReport {
    pub base_tilings: u64,
    /// Stretched tilings with a macro-tile anchored at the origin.
    pub anchored_tilings: u64,
    /// All stretched tilings: one family per translate of the macro grid.
    pub total_tilings: Option<u64>,
    /// Every anchored tiling decodes through the macro-tiles to a distinct
    /// valid base tiling.
    pub decodes: bool,
}

impl IsomorphismReport {
    pub fn holds(&self) -> bool {
        self.decodes && self.base_tilings == self.anchored_tilings
    }
}

/// Compares tilings of the `p × q` torus by the base set with tilings of
/// the torus `Z² / ⟨p·μ, q·ν⟩` by the stretched set. The stretched tilings
/// come in `k` translates of the macro grid; the bijection is with those
/// anchored at the origin. `with_total` also counts all of them.
pub fn verify_isomorphism(
    ts: &TileSet,
    sts: &StretchedTileSet,
    p: usize,
    q: usize,
    with_total: bool,
    limits: &Limits,
) -> Result<IsomorphismReport> {
    let base_tilings = count_torus_tilings(ts, p, q, limits)?;
    let shape = sts.shape();
    let torus = LatticeTorus::new(&[shape.translate((p as i64, 0)), shape.translate((0, q as i64))])?;
    let (origin_cell, _) = shape.locate((0, 0));
    let slot = shape.index_of(origin_cell).expect("located cells lie in the shape");
    let anchor_tiles: Vec<usize> = (0..ts.len()).map(|b| b * shape.len() + slot).collect();
    let mut decoded: HashSet<Vec<usize>> = HashSet::new();
    let mut decodes = true;
    let anchored = torus_search(sts.tiles(), &torus, Some(&anchor_tiles), limits, |cells| {
        match decode_tiling(sts, &torus, p, q, cells) {
            Some(base) if decoded.insert(base.cells().to_vec()) => {
                decodes &= check_tiling(ts, &base).map(|v| v.is_none()).unwrap_or(false);
            }
            _ => decodes = false,
        }
    })?;
    let total_tilings = if with_total {
        Some(torus_search(sts.tiles(), &torus, None, limits, |_| {})?)
    } else {
        None
    };
    Ok(IsomorphismReport {
        base_tilings,
        anchored_tilings: anchored,
        total_tilings,
        decodes,
    })
}

fn decode_tiling(sts: &StretchedTileSet, torus: &LatticeTorus, p: usize, q: usize, cells: &[usize]) -> Option<Tiling> {
    let shape = sts.shape();
    let mut base = Vec::with_capacity(p * q);
    for n in 0..q as i64 {
        for e in 0..p as i64 {
            let off = shape.translate((e, n));
            let mut id = None;
            for &c in shape.cells() {
                let (b, cell) = sts.decode(cells[torus.index((c.0 + off.0, c.1 + off.1))]).ok()?;
                if cell != c || id.is_some_and(|i| i != b) {
                    return None;
                }
                id = Some(b);
            }
            base.push(id?);
        }
    }
    Tiling::new(Domain::Torus { p, q }, base).ok()
}

/// Counts valid tilings of a lattice torus, calling `visit` on each. If
/// `first_cell` is given, cell 0 is restricted to those tiles.
fn torus_search(
    ts: &TileSet,
    torus: &LatticeTorus,
    first_cell: Option<&[usize]>,
    limits: &Limits,
    mut visit: impl FnMut(&[usize]),
) -> Result<u64> {
    let n = torus.cells();
    let tiles = ts.tiles();
    let all: Vec<usize> = (0..tiles.len()).collect();
    let first: Vec<usize> = match first_cell {
        Some(ids) => ids.iter().map(|&id| tiles.iter().position(|t| t.id == id).expect("known id")).collect(),
        None => all.clone(),
    };
    let nbrs: Vec<[usize; 4]> = (0..n)
        .map(|i| {
            let c = torus.cell(i);
            Compass::ALL.map(|d| torus.index((c.0 + d.delta().0, c.1 + d.delta().1)))
        })
        .collect();
    let fits = |placed: &[usize], pos: usize, t: usize| {
        Compass::ALL.iter().enumerate().all(|(slot, &d)| {
            let j = nbrs[pos][slot];
            let other = if j == pos {
                t
            } else if j < pos {
                placed[j]
            } else {
                return true;
            };
            tiles[t].color(d) == tiles[other].color(d.opposite())
        })
    };
    let mut placed: Vec<usize> = Vec::with_capacity(n);
    let mut cursor = vec![0usize];
    let mut count = 0u64;
    let mut nodes = 0u64;
    loop {
        let pos = placed.len();
        if pos == n {
            count += 1;
            let ids: Vec<usize> = placed.iter().map(|&t| tiles[t].id).collect();
            visit(&ids);
            placed.pop();
            cursor.pop();
            continue;
        }
        let cands = if pos == 0 { &first } else { &all };
        let start = cursor[pos];
        match cands.iter().skip(start).position(|&t| fits(&placed, pos, t)) {
            Some(off) => {
                nodes += 1;
                if nodes > limits.max_cells {
                    return Err(CaError::cap("torus tiling search nodes", nodes as u128, limits.max_cells as u128));
                }
                cursor[pos] = start + off + 1;
                placed.push(cands[start + off]);
                cursor.push(0);
            }
            None if pos == 0 => return Ok(count),
            None => {
                cursor.pop();
                placed.pop();
            }
        }
    }
}
