use std::collections::HashMap;
use std::hash::Hash;

use super::tile::{Color, Compass, Domain, Tile, TileSet, Tiling};

/// Derives a tile set from a finite label pattern: the color of an edge is
/// the ordered pair of labels it separates (outer edges pair a label with
/// the outside). Returns the tile set and the tiling reproducing the
/// pattern; equal labels with equal surroundings share a tile.
pub fn wangify<L: Clone + Eq + Hash>(
    w: usize,
    h: usize,
    labels: &[L],
    direction: impl Fn(&L) -> Option<Compass>,
) -> (TileSet, Tiling) {
    let (ts, mut tilings) = wangify_many(&[(w, h, labels)], direction);
    (ts, tilings.pop().expect("one pattern"))
}

/// [`wangify`] over several patterns sharing one tile set.
pub fn wangify_many<L: Clone + Eq + Hash>(
    patterns: &[(usize, usize, &[L])],
    direction: impl Fn(&L) -> Option<Compass>,
) -> (TileSet, Vec<Tiling>) {
    const OUTSIDE: usize = usize::MAX;
    let mut label_ids: HashMap<&L, usize> = HashMap::new();
    let mut colors: HashMap<(bool, usize, usize), Color> = HashMap::new();
    let mut tiles: Vec<Tile> = Vec::new();
    let mut tile_ids: HashMap<([Color; 4], Option<Compass>), usize> = HashMap::new();
    let mut all_cells = Vec::with_capacity(patterns.len());
    for &(w, h, labels) in patterns {
        assert_eq!(labels.len(), w * h, "pattern must be w × h");
        let ids: Vec<usize> = labels
            .iter()
            .map(|l| {
                let n = label_ids.len();
                *label_ids.entry(l).or_insert(n)
            })
            .collect();
        let at = |x: i64, y: i64| -> usize {
            if x < 0 || y < 0 || x >= w as i64 || y >= h as i64 {
                OUTSIDE
            } else {
                ids[y as usize * w + x as usize]
            }
        };
        let mut color = |vertical: bool, lo: usize, hi: usize| -> Color {
            let n = colors.len() as Color;
            *colors.entry((vertical, lo, hi)).or_insert(n)
        };
        let mut cells = Vec::with_capacity(w * h);
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                let me = at(x, y);
                let n = color(true, me, at(x, y + 1));
                let s = color(true, at(x, y - 1), me);
                let e = color(false, me, at(x + 1, y));
                let wc = color(false, at(x - 1, y), me);
                let dir = direction(&labels[y as usize * w + x as usize]);
                let next = tiles.len();
                let id = *tile_ids.entry(([n, e, s, wc], dir)).or_insert_with(|| {
                    let mut t = Tile::new(next, n, e, s, wc);
                    t.direction = dir;
                    tiles.push(t);
                    next
                });
                cells.push(id);
            }
        }
        all_cells.push((w, h, cells));
    }
    let ts = TileSet::new(tiles).expect("fresh ids");
    let tilings = all_cells
        .into_iter()
        .map(|(w, h, cells)| {
            let mut t = Tiling::new(Domain::Rect { w, h }, cells).expect("w × h cells");
            t.validate(&ts).expect("ids come from the tile set");
            t
        })
        .collect();
    (ts, tilings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wang::{attach_space_filling_path, follow_path, generate_hierarchy, Anchor, PathEnd};
    use crate::Limits;

    #[test]
    fn hierarchy_becomes_a_valid_directed_tiling() {
        let h = generate_hierarchy(2, Anchor::Center, &Limits::default()).unwrap();
        let cover = attach_space_filling_path(&h);
        let labels: Vec<_> = h.labels().iter().zip(cover.dirs()).map(|(&l, &d)| (l, d)).collect();
        let (ts, t) = wangify(h.side(), h.side(), &labels, |&(_, d)| Some(d));
        assert_eq!(t.valid(), Some(true));
        assert!(ts.is_directed());
        for p in cover.paths() {
            let trace = follow_path(&ts, &t, p[0], 1000).unwrap();
            assert_eq!(&trace.cells, p);
            assert_eq!(trace.end, PathEnd::Boundary);
        }
    }

    #[test]
    fn constant_pattern_shares_tiles() {
        let (ts, t) = wangify(4, 4, &[7u8; 16], |_| None);
        // Corner, edge and interior positions differ only by their outer
        // edges: 9 distinct tiles.
        assert_eq!(ts.len(), 9);
        assert_eq!(t.valid(), Some(true));
    }
}
