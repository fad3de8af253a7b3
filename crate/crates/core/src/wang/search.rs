use std::collections::HashMap;

use super::tile::{Color, Compass, Domain, Tile, TileSet, Tiling};
use crate::{CaError, Limits, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Tiling),
    /// The search space was exhausted: no valid tiling of this domain.
    Exhausted,
    /// The node budget ran out first.
    Unknown,
}

impl SearchOutcome {
    pub fn tiling(&self) -> Option<&Tiling> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Backtracking search for an `n × n` tiling with free boundary. Cells are
/// filled row-major from the south-west corner, tiles tried in id order.
pub fn tiles_square(ts: &TileSet, n: usize, limits: &Limits) -> SearchOutcome {
    if n == 0 {
        return SearchOutcome::Exhausted;
    }
    first(ts, Domain::Rect { w: n, h: n }, limits)
}

pub fn tiles_torus(ts: &TileSet, p: usize, q: usize, limits: &Limits) -> SearchOutcome {
    if p == 0 || q == 0 {
        return SearchOutcome::Exhausted;
    }
    first(ts, Domain::Torus { p, q }, limits)
}

/// Number of valid tilings of the `p × q` torus.
pub fn count_torus_tilings(ts: &TileSet, p: usize, q: usize, limits: &Limits) -> Result<u64> {
    let mut s = Solver::new(ts, Domain::Torus { p, q }, limits.max_cells);
    let mut count = 0u64;
    let done = s.run(|_| {
        count += 1;
        true
    });
    if done {
        Ok(count)
    } else {
        Err(CaError::cap("torus tiling search nodes", s.nodes as u128 + 1, limits.max_cells as u128))
    }
}

fn first(ts: &TileSet, domain: Domain, limits: &Limits) -> SearchOutcome {
    let mut s = Solver::new(ts, domain, limits.max_cells);
    let mut found = None;
    let done = s.run(|cells| {
        found = Some(cells.to_vec());
        false
    });
    match found {
        Some(cells) => {
            let mut t = Tiling::new(domain, cells).expect("solver fills the domain");
            t.validate(ts).expect("ids come from the tile set");
            SearchOutcome::Found(t)
        }
        None if done => SearchOutcome::Exhausted,
        None => SearchOutcome::Unknown,
    }
}

struct Solver<'a> {
    tiles: Vec<&'a Tile>,
    /// Tile indices (in id order) by west color; `None` key lists all.
    by_west: HashMap<Color, Vec<usize>>,
    all: Vec<usize>,
    w: usize,
    h: usize,
    torus: bool,
    budget: u64,
    nodes: u64,
}

impl<'a> Solver<'a> {
    fn new(ts: &'a TileSet, domain: Domain, budget: u64) -> Self {
        let mut tiles: Vec<&Tile> = ts.tiles().iter().collect();
        tiles.sort_by_key(|t| t.id);
        let mut by_west: HashMap<Color, Vec<usize>> = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            by_west.entry(t.color(Compass::W)).or_default().push(i);
        }
        let (w, h) = domain.dims();
        Solver {
            all: (0..tiles.len()).collect(),
            tiles,
            by_west,
            w,
            h,
            torus: domain.is_torus(),
            budget,
            nodes: 0,
        }
    }

    fn fits(&self, placed: &[usize], pos: usize, cand: usize) -> bool {
        let (x, y) = (pos % self.w, pos / self.w);
        let t = self.tiles[cand];
        let tile_at = |p: usize| if p == pos { t } else { self.tiles[placed[p]] };
        if y > 0 && tile_at(pos - self.w).color(Compass::N) != t.color(Compass::S) {
            return false;
        }
        if self.torus {
            if x == self.w - 1 && t.color(Compass::E) != tile_at(pos + 1 - self.w).color(Compass::W) {
                return false;
            }
            if y == self.h - 1 && t.color(Compass::N) != tile_at(x).color(Compass::S) {
                return false;
            }
        }
        true
    }

    fn candidates(&self, placed: &[usize], pos: usize) -> &[usize] {
        if pos % self.w == 0 {
            &self.all
        } else {
            let west = self.tiles[placed[pos - 1]].color(Compass::E);
            self.by_west.get(&west).map_or(&[], |v| v.as_slice())
        }
    }

    /// Depth-first enumeration; `on_solution` returns whether to continue.
    /// Returns `true` if the search finished within budget (or was stopped
    /// by the callback), `false` if the budget ran out.
    fn run(&mut self, mut on_solution: impl FnMut(&[usize]) -> bool) -> bool {
        let total = self.w * self.h;
        let mut placed: Vec<usize> = Vec::with_capacity(total);
        // Next candidate slot to try at each depth.
        let mut cursor: Vec<usize> = vec![0];
        loop {
            let pos = placed.len();
            if pos == total {
                let ids: Vec<usize> = placed.iter().map(|&i| self.tiles[i].id).collect();
                if !on_solution(&ids) {
                    return true;
                }
                placed.pop();
                cursor.pop();
                continue;
            }
            let cands = self.candidates(&placed, pos);
            let start = cursor[pos];
            let next = cands[start.min(cands.len())..]
                .iter()
                .position(|&c| self.fits(&placed, pos, c))
                .map(|off| (start + off, cands[start + off]));
            match next {
                Some((slot, cand)) => {
                    self.nodes += 1;
                    if self.nodes > self.budget {
                        return false;
                    }
                    cursor[pos] = slot + 1;
                    placed.push(cand);
                    cursor.push(0);
                }
                None => {
                    if pos == 0 {
                        return true;
                    }
                    cursor.pop();
                    placed.pop();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wang::{check_tiling, Tile};

    fn lim() -> Limits {
        Limits::default()
    }

    fn east_west() -> TileSet {
        TileSet::new(vec![Tile::new(0, 0, 0, 0, 1)]).unwrap()
    }

    #[test]
    fn uniform_tiles_everything() {
        let ts = TileSet::uniform(0);
        for n in 1..5 {
            assert!(matches!(tiles_square(&ts, n, &lim()), SearchOutcome::Found(_)));
        }
        let t = tiles_torus(&ts, 1, 1, &lim());
        assert_eq!(t.tiling().unwrap().cells(), &[0]);
    }

    #[test]
    fn mismatched_singleton() {
        let ts = east_west();
        assert!(matches!(tiles_square(&ts, 1, &lim()), SearchOutcome::Found(_)));
        assert_eq!(tiles_square(&ts, 2, &lim()), SearchOutcome::Exhausted);
        for p in 1..=3 {
            for q in 1..=3 {
                assert_eq!(tiles_torus(&ts, p, q, &lim()), SearchOutcome::Exhausted);
            }
        }
    }

    #[test]
    fn checkerboard_search() {
        let ts = TileSet::checkerboard();
        for n in 1..=6 {
            let out = tiles_square(&ts, n, &lim());
            let t = out.tiling().expect("checkerboard tiles squares");
            assert_eq!(t.valid(), Some(true));
        }
        let t = tiles_torus(&ts, 2, 2, &lim());
        let t = t.tiling().unwrap();
        assert_eq!(t.cells(), &[0, 1, 1, 0]);
        assert_eq!(check_tiling(&ts, &t.unroll(2, 2)).unwrap(), None);
        assert_eq!(tiles_torus(&ts, 1, 1, &lim()), SearchOutcome::Exhausted);
        assert_eq!(tiles_torus(&ts, 3, 2, &lim()), SearchOutcome::Exhausted);
        assert_eq!(count_torus_tilings(&ts, 2, 2, &lim()).unwrap(), 2);
        assert_eq!(count_torus_tilings(&ts, 4, 2, &lim()).unwrap(), 2);
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let ts = TileSet::new((0..4).map(|i| Tile::new(i, 0, 0, 0, 0)).collect()).unwrap();
        let tiny = Limits {
            max_cells: 3,
            ..Limits::default()
        };
        assert_eq!(tiles_square(&ts, 2, &tiny), SearchOutcome::Unknown);
        assert!(count_torus_tilings(&ts, 2, 2, &tiny).is_err());
        assert_eq!(count_torus_tilings(&ts, 2, 2, &lim()).unwrap(), 256);
    }

    #[test]
    fn failure_is_monotone() {
        // Two tiles that only fit in a 2-wide strip: the second has a
        // dead east color.
        let ts = TileSet::new(vec![Tile::new(0, 0, 1, 0, 2), Tile::new(1, 0, 3, 0, 1)]).unwrap();
        let mut failed = false;
        for n in 1..=5 {
            let ok = matches!(tiles_square(&ts, n, &lim()), SearchOutcome::Found(_));
            assert!(!(failed && ok), "tiling found at {n} after a failure");
            failed |= !ok;
        }
        assert!(failed);
    }

    #[test]
    fn torus_results_unroll_validly() {
        let ts = TileSet::new(vec![
            Tile::new(0, 0, 1, 0, 2),
            Tile::new(1, 0, 2, 0, 1),
            Tile::new(2, 1, 0, 1, 0),
        ])
        .unwrap();
        for (p, q) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            if let SearchOutcome::Found(t) = tiles_torus(&ts, p, q, &lim()) {
                assert_eq!(check_tiling(&ts, &t.unroll(2, 2)).unwrap(), None);
            }
        }
    }
}
