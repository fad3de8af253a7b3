use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::{CaError, Cell, Result};

pub type Color = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Compass {
    N,
    E,
    S,
    W,
}

impl Compass {
    pub const ALL: [Compass; 4] = [Compass::N, Compass::E, Compass::S, Compass::W];

    pub fn opposite(self) -> Compass {
        match self {
            Compass::N => Compass::S,
            Compass::E => Compass::W,
            Compass::S => Compass::N,
            Compass::W => Compass::E,
        }
    }

    pub fn delta(self) -> Cell {
        match self {
            Compass::N => (0, 1),
            Compass::E => (1, 0),
            Compass::S => (0, -1),
            Compass::W => (-1, 0),
        }
    }

    pub fn from_delta(d: Cell) -> Option<Compass> {
        Compass::ALL.into_iter().find(|c| c.delta() == d)
    }

    /// Quarter turn clockwise.
    pub fn cw(self) -> Compass {
        match self {
            Compass::N => Compass::E,
            Compass::E => Compass::S,
            Compass::S => Compass::W,
            Compass::W => Compass::N,
        }
    }

    pub fn ccw(self) -> Compass {
        self.cw().opposite()
    }

    pub fn letter(self) -> char {
        match self {
            Compass::N => 'N',
            Compass::E => 'E',
            Compass::S => 'S',
            Compass::W => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Compass> {
        Compass::ALL.into_iter().find(|d| d.letter() == c)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Compass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tile {
    pub id: usize,
    colors: [Color; 4],
    pub direction: Option<Compass>,
}

impl Tile {
    pub fn new(id: usize, n: Color, e: Color, s: Color, w: Color) -> Self {
        Tile {
            id,
            colors: [n, e, s, w],
            direction: None,
        }
    }

    pub fn directed(mut self, dir: Compass) -> Self {
        self.direction = Some(dir);
        self
    }

    pub fn color(&self, side: Compass) -> Color {
        self.colors[side.slot()]
    }

    pub fn colors(&self) -> [Color; 4] {
        self.colors
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileSet {
    tiles: Vec<Tile>,
    by_id: HashMap<usize, usize>,
}

impl TileSet {
    pub fn new(tiles: Vec<Tile>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(tiles.len());
        for (i, t) in tiles.iter().enumerate() {
            if by_id.insert(t.id, i).is_some() {
                return Err(CaError::InvalidArgument(format!("duplicate tile id {}", t.id)));
            }
        }
        Ok(TileSet { tiles, by_id })
    }

    /// One tile with every side colored `color`.
    pub fn uniform(color: Color) -> Self {
        TileSet::new(vec![Tile::new(0, color, color, color, color)]).expect("single tile")
    }

    /// Two tiles forced to alternate in both directions.
    pub fn checkerboard() -> Self {
        TileSet::new(vec![Tile::new(0, 0, 0, 1, 1), Tile::new(1, 1, 1, 0, 0)]).expect("distinct ids")
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn get(&self, id: usize) -> Result<&Tile> {
        self.by_id.get(&id).map(|&i| &self.tiles[i]).ok_or(CaError::UnknownTile(id))
    }

    pub fn palette(&self) -> BTreeSet<Color> {
        self.tiles.iter().flat_map(|t| t.colors).collect()
    }

    pub fn is_directed(&self) -> bool {
        self.tiles.iter().all(|t| t.direction.is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// `w × h` cells with free boundary.
    Rect { w: usize, h: usize },
    /// `p × q` cells with wraparound.
    Torus { p: usize, q: usize },
}

impl Domain {
    pub fn dims(self) -> (usize, usize) {
        match self {
            Domain::Rect { w, h } => (w, h),
            Domain::Torus { p, q } => (p, q),
        }
    }

    pub fn is_torus(self) -> bool {
        matches!(self, Domain::Torus { .. })
    }
}

/// Tile ids over a domain, row-major with `y = 0` the southmost row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiling {
    domain: Domain,
    cells: Vec<usize>,
    valid: Option<bool>,
}

impl Tiling {
    pub fn new(domain: Domain, cells: Vec<usize>) -> Result<Self> {
        let (w, h) = domain.dims();
        if w == 0 || h == 0 || cells.len() != w * h {
            return Err(CaError::InvalidArgument(format!(
                "tiling of {w}x{h} needs {} cells, got {}",
                w * h,
                cells.len()
            )));
        }
        Ok(Tiling {
            domain,
            cells,
            valid: None,
        })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dims(&self) -> (usize, usize) {
        self.domain.dims()
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn get(&self, (x, y): (usize, usize)) -> usize {
        self.cells[y * self.dims().0 + x]
    }

    /// Result of the last [`Tiling::validate`], if any.
    pub fn valid(&self) -> Option<bool> {
        self.valid
    }

    pub fn validate(&mut self, ts: &TileSet) -> Result<Option<Violation>> {
        let v = check_tiling(ts, self)?;
        self.valid = Some(v.is_none());
        Ok(v)
    }

    /// Repeats a torus tiling `rx × ry` times as a rectangle.
    pub fn unroll(&self, rx: usize, ry: usize) -> Tiling {
        let (w, h) = self.dims();
        let (nw, nh) = (w * rx, h * ry);
        let cells = (0..nh)
            .flat_map(|y| (0..nw).map(move |x| (x % w, y % h)))
            .map(|c| self.get(c))
            .collect();
        Tiling {
            domain: Domain::Rect { w: nw, h: nh },
            cells,
            valid: None,
        }
    }
}

/// The first mismatched edge: between `cell` and its neighbor on `side`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub cell: (usize, usize),
    pub side: Compass,
}

/// `None` when every adjacent pair (with wraparound on tori) shares the
/// color of its common edge.
pub fn check_tiling(ts: &TileSet, t: &Tiling) -> Result<Option<Violation>> {
    let (w, h) = t.dims();
    let tiles: Vec<&Tile> = t.cells.iter().map(|&id| ts.get(id)).collect::<Result<_>>()?;
    let at = |x: usize, y: usize| tiles[y * w + x];
    let torus = t.domain.is_torus();
    for y in 0..h {
        for x in 0..w {
            let here = at(x, y);
            if x + 1 < w || torus {
                let east = at((x + 1) % w, y);
                if here.color(Compass::E) != east.color(Compass::W) {
                    return Ok(Some(Violation {
                        cell: (x, y),
                        side: Compass::E,
                    }));
                }
            }
            if y + 1 < h || torus {
                let north = at(x, (y + 1) % h);
                if here.color(Compass::N) != north.color(Compass::S) {
                    return Ok(Some(Violation {
                        cell: (x, y),
                        side: Compass::N,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_on_unit_torus() {
        let ts = TileSet::uniform(0);
        let t = Tiling::new(Domain::Torus { p: 1, q: 1 }, vec![0]).unwrap();
        assert_eq!(check_tiling(&ts, &t).unwrap(), None);
    }

    #[test]
    fn mismatch_reported() {
        let ts = TileSet::new(vec![Tile::new(1, 0, 1, 0, 0), Tile::new(2, 0, 0, 0, 2)]).unwrap();
        let t = Tiling::new(Domain::Rect { w: 2, h: 1 }, vec![1, 2]).unwrap();
        assert_eq!(
            check_tiling(&ts, &t).unwrap(),
            Some(Violation {
                cell: (0, 0),
                side: Compass::E
            })
        );
    }

    #[test]
    fn checkerboard_torus() {
        let ts = TileSet::checkerboard();
        let mut t = Tiling::new(Domain::Torus { p: 2, q: 2 }, vec![0, 1, 1, 0]).unwrap();
        assert_eq!(t.validate(&ts).unwrap(), None);
        assert_eq!(t.valid(), Some(true));
        let bad = Tiling::new(Domain::Torus { p: 2, q: 2 }, vec![0, 0, 1, 1]).unwrap();
        assert!(check_tiling(&ts, &bad).unwrap().is_some());
        let unrolled = t.unroll(2, 3);
        assert_eq!(unrolled.dims(), (4, 6));
        assert_eq!(check_tiling(&ts, &unrolled).unwrap(), None);
    }

    #[test]
    fn unknown_tile_and_duplicates() {
        let ts = TileSet::uniform(0);
        let t = Tiling::new(Domain::Rect { w: 1, h: 1 }, vec![5]).unwrap();
        assert_eq!(check_tiling(&ts, &t), Err(CaError::UnknownTile(5)));
        assert!(TileSet::new(vec![Tile::new(0, 0, 0, 0, 0), Tile::new(0, 1, 1, 1, 1)]).is_err());
    }

    #[test]
    fn compass_turns() {
        for d in Compass::ALL {
            assert_eq!(d.cw().ccw(), d);
            assert_eq!(d.cw().cw(), d.opposite());
            assert_eq!(Compass::from_delta(d.delta()), Some(d));
        }
    }
}
