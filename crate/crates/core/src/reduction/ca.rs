use std::collections::HashMap;

use crate::ca::{Alphabet, LocalRule2D, Neighborhood};
use crate::stretch::{build_shape, stretch_tileset, MacroShape, StretchedTileSet};
use crate::wang::{
    attach_space_filling_path, generate_hierarchy, wangify_many, Anchor, Color, Compass, HierarchicalPattern, Label,
    PathCover, TileSet, Tiling,
};
use crate::{CaError, Cell, Limits, Result, Symbol};

/// The three layers of a state of the reduction CA. `k` indexes the
/// stretched tiles, `tau` indexes `τ.tiles()` (not tile ids).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Layers {
    pub k: usize,
    pub tau: usize,
    pub bit: bool,
}

/// A finite hierarchical pattern at macro-tile level, tiled by the base
/// tile set of `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPattern {
    pub pattern: HierarchicalPattern,
    pub cover: PathCover,
    /// Base tile indices, row-major over the pattern.
    pub tiling: Tiling,
}

/// Macro-tile order used by guard plans: own macro, then `Compass::ALL`.
const MACROS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
struct GuardPlan {
    /// `(offset index, expected shape cell index)` per macro.
    macros: [Vec<(usize, usize)>; MACROS],
    /// `(a, b, side)`: the cell at `b` is across `side` of the cell at `a`.
    edges: Vec<(usize, usize, Compass)>,
}

/// The CA built from a tile set `τ` and a directed stretched tile set `K`
/// over states `K × τ × {0, 1}`.
///
/// A cell looks at its own macro-tile and the four axial neighbors. When
/// both tile layers match on every edge inside these five macro-tiles,
/// every `K` tile sits at its own position with one base tile per
/// macro-tile, and every macro-tile has a uniform bit, the bit is xored
/// with the bit of the macro-tile pointed by the base direction. Tile
/// layers never change.
#[derive(Debug, Clone)]
pub struct ReductionCA {
    tau: TileSet,
    k: StretchedTileSet,
    patterns: Vec<KPattern>,
    alphabet: Alphabet,
    extent: i64,
    offsets: Vec<Cell>,
    center: usize,
    plans: Vec<GuardPlan>,
    k_colors: Vec<[Color; 4]>,
    tau_colors: Vec<[Color; 4]>,
    base_dirs: Vec<Option<Compass>>,
    base_index: HashMap<usize, usize>,
}

/// The base tile set of `K`: every anchored step-`step` pattern, labelled
/// by hierarchy label and path direction, turned into tiles together.
pub fn hierarchy_base(step: u32, limits: &Limits) -> Result<(TileSet, Vec<KPattern>)> {
    let mut pats = Vec::new();
    for anchor in Anchor::ALL {
        let h = generate_hierarchy(step, anchor, limits)?;
        let cover = attach_space_filling_path(&h);
        let labels: Vec<(Label, Compass)> = h.labels().iter().zip(cover.dirs()).map(|(&l, &d)| (l, d)).collect();
        pats.push((h, cover, labels));
    }
    let views: Vec<(usize, usize, &[(Label, Compass)])> =
        pats.iter().map(|(h, _, l)| (h.side(), h.side(), l.as_slice())).collect();
    let (ts, tilings) = wangify_many(&views, |&(_, d)| Some(d));
    let patterns = pats
        .into_iter()
        .zip(tilings)
        .map(|((pattern, cover, _), tiling)| KPattern { pattern, cover, tiling })
        .collect();
    Ok((ts, patterns))
}

/// `F_τ` for the hierarchy of `step` stretched along `ν` (north) and `μ`
/// (east).
pub fn build_reduction(tau: &TileSet, nu: Cell, mu: Cell, step: u32, limits: &Limits) -> Result<ReductionCA> {
    let (base, patterns) = hierarchy_base(step, limits)?;
    let shape = build_shape(nu, mu)?;
    let mut red = build_reduction_with(tau, &base, &shape, limits)?;
    red.patterns = patterns;
    Ok(red)
}

/// `F_τ` for an arbitrary directed base tile set stretched to `shape`.
pub fn build_reduction_with(
    tau: &TileSet,
    k_base: &TileSet,
    shape: &MacroShape,
    limits: &Limits,
) -> Result<ReductionCA> {
    if tau.is_empty() || k_base.is_empty() {
        return Err(CaError::InvalidArgument("tile sets must be non-empty".into()));
    }
    if !k_base.is_directed() {
        return Err(CaError::InvalidArgument("the base tile set of K must be directed".into()));
    }
    let k = stretch_tileset(k_base, shape, limits)?;
    let states = k.tiles().len() as u128 * tau.len() as u128 * 2;
    let cap = (limits.max_cells as u128).min(u32::MAX as u128);
    if states > cap {
        return Err(CaError::cap("reduction states", states, cap));
    }
    let alphabet = Alphabet::raw(states as u32)?;

    let cells = shape.cells();
    let steps: [(i64, i64); MACROS] = [
        (0, 0),
        k.macro_step(Compass::N),
        k.macro_step(Compass::E),
        k.macro_step(Compass::S),
        k.macro_step(Compass::W),
    ];
    // Union cells per plan, relative to the evaluated cell.
    let rel: Vec<[Vec<(Cell, usize)>; MACROS]> = cells
        .iter()
        .map(|&here| {
            steps.map(|st| {
                let t = shape.translate(st);
                cells
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| ((t.0 + c.0 - here.0, t.1 + c.1 - here.1), j))
                    .collect()
            })
        })
        .collect();
    let extent = rel
        .iter()
        .flat_map(|m| m.iter().flatten())
        .map(|&((dx, dy), _)| dx.abs() + dy.abs())
        .max()
        .unwrap_or(0);
    let offsets = Neighborhood::VonNeumann {
        extent: (extent as u32, extent as u32),
    }
    .offsets();
    let offset_index: HashMap<Cell, usize> = offsets.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let center = offset_index[&(0, 0)];
    let plans = rel
        .iter()
        .map(|m| {
            let macros = m.clone().map(|v| v.into_iter().map(|(o, j)| (offset_index[&o], j)).collect());
            let union: HashMap<Cell, usize> = m.iter().flatten().map(|&(o, _)| (o, offset_index[&o])).collect();
            let mut edges = Vec::new();
            for (&o, &a) in &union {
                for side in [Compass::N, Compass::E] {
                    let (dx, dy) = side.delta();
                    if let Some(&b) = union.get(&(o.0 + dx, o.1 + dy)) {
                        edges.push((a, b, side));
                    }
                }
            }
            edges.sort_unstable();
            GuardPlan { macros, edges }
        })
        .collect();
    Ok(ReductionCA {
        tau: tau.clone(),
        k_colors: k.tiles().tiles().iter().map(|t| t.colors()).collect(),
        tau_colors: tau.tiles().iter().map(|t| t.colors()).collect(),
        base_dirs: k_base.tiles().iter().map(|t| t.direction).collect(),
        base_index: k_base.tiles().iter().enumerate().map(|(i, t)| (t.id, i)).collect(),
        k,
        patterns: Vec::new(),
        alphabet,
        extent,
        offsets,
        center,
        plans,
    })
}

fn side_color(colors: &[Color; 4], side: Compass) -> Color {
    colors[side as usize]
}

impl ReductionCA {
    pub fn tau(&self) -> &TileSet {
        &self.tau
    }

    pub fn k(&self) -> &StretchedTileSet {
        &self.k
    }

    pub fn shape(&self) -> &MacroShape {
        self.k.shape()
    }

    /// Anchored hierarchy patterns the base of `K` was derived from; empty
    /// for [`build_reduction_with`].
    pub fn patterns(&self) -> &[KPattern] {
        &self.patterns
    }

    pub fn pattern(&self, anchor: Anchor) -> Option<&KPattern> {
        self.patterns.iter().find(|p| p.pattern.anchor() == anchor)
    }

    /// Von Neumann extent of the neighborhood: the least one covering the
    /// five macro-tiles around any cell.
    pub fn extent(&self) -> i64 {
        self.extent
    }

    /// Largest side of the macro-tile bounding box.
    pub fn macro_side(&self) -> i64 {
        self.shape().max_extent()
    }

    pub fn state_count(&self) -> u32 {
        self.alphabet.size()
    }

    /// Index of a base tile of `K` by id.
    pub fn base_index(&self, id: usize) -> Result<usize> {
        self.base_index.get(&id).copied().ok_or(CaError::UnknownTile(id))
    }

    pub fn encode(&self, l: Layers) -> Symbol {
        ((l.k * self.tau.len() + l.tau) * 2 + l.bit as usize) as Symbol
    }

    pub fn layers(&self, s: Symbol) -> Layers {
        let s = s as usize;
        Layers {
            k: s / 2 / self.tau.len(),
            tau: s / 2 % self.tau.len(),
            bit: s % 2 == 1,
        }
    }

    /// The state holding stretched tile `(base index b, shape cell j)`.
    pub fn k_state(&self, b: usize, j: usize, tau: usize, bit: bool) -> Symbol {
        self.encode(Layers {
            k: b * self.shape().len() + j,
            tau,
            bit,
        })
    }

    /// The guard at a cell, reading offset `i` through `read`; returns the
    /// bit of the pointed macro-tile when it holds.
    fn guard(&self, read: &dyn Fn(usize) -> Symbol) -> Option<bool> {
        let kk = self.shape().len();
        let me = self.layers(read(self.center));
        let plan = &self.plans[me.k % kk];
        let mut bits = [false; MACROS];
        let mut own_base = 0;
        for (m, cells) in plan.macros.iter().enumerate() {
            let mut seen: Option<(usize, bool)> = None;
            for &(oi, j) in cells {
                let l = self.layers(read(oi));
                if l.k % kk != j {
                    return None;
                }
                let here = (l.k / kk, l.bit);
                match seen {
                    None => seen = Some(here),
                    Some(s) if s != here => return None,
                    Some(_) => {}
                }
            }
            let (b, bit) = seen?;
            bits[m] = bit;
            if m == 0 {
                own_base = b;
            }
        }
        for &(a, b, side) in &plan.edges {
            let (la, lb) = (self.layers(read(a)), self.layers(read(b)));
            let opp = side.opposite();
            if side_color(&self.k_colors[la.k], side) != side_color(&self.k_colors[lb.k], opp)
                || side_color(&self.tau_colors[la.tau], side) != side_color(&self.tau_colors[lb.tau], opp)
            {
                return None;
            }
        }
        let dir = self.base_dirs[own_base]?;
        Some(bits[1 + dir as usize])
    }

    /// Whether the guard holds at `x` in the configuration read by `get`.
    pub fn guard_holds(&self, get: &dyn Fn(Cell) -> Symbol, x: Cell) -> bool {
        self.guard(&|i| {
            let (dx, dy) = self.offsets[i];
            get((x.0 + dx, x.1 + dy))
        })
        .is_some()
    }

    /// The image at `x`, reading only the cells the guard needs.
    pub fn image_at(&self, get: &dyn Fn(Cell) -> Symbol, x: Cell) -> Symbol {
        let read = |i: usize| {
            let (dx, dy) = self.offsets[i];
            get((x.0 + dx, x.1 + dy))
        };
        self.step(&read)
    }

    fn step(&self, read: &dyn Fn(usize) -> Symbol) -> Symbol {
        let s = read(self.center);
        match self.guard(read) {
            Some(true) => s ^ 1,
            _ => s,
        }
    }
}

impl LocalRule2D for ReductionCA {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn offsets(&self) -> &[Cell] {
        &self.offsets
    }

    fn eval(&self, neighborhood: &[Symbol]) -> Symbol {
        self.step(&|i| neighborhood[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::{eval_at, TorusConfig2D};
    use crate::stretch::build_shape_unscaled;
    use crate::wang::Tile;
    use proptest::prelude::*;

    fn unit_east() -> ReductionCA {
        let shape = build_shape_unscaled((0, 1), (1, 0)).unwrap();
        let k = TileSet::new(vec![Tile::new(0, 0, 0, 0, 0).directed(Compass::E)]).unwrap();
        build_reduction_with(&TileSet::uniform(0), &k, &shape, &Limits::default()).unwrap()
    }

    #[test]
    fn unit_shape_xors_east_neighbor() {
        let red = unit_east();
        assert_eq!(red.extent(), 1);
        assert_eq!(red.state_count(), 2);
        let bits = [1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 0, 0, 0, 1, 0];
        let c = TorusConfig2D::new(red.alphabet(), 4, 4, bits.to_vec()).unwrap();
        let out = red.apply(&c).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(out.get((x, y)), c.get((x, y)) ^ c.get((x + 1, y)), "cell {x},{y}");
            }
        }
    }

    fn two_tau() -> TileSet {
        // Tile 1 cannot sit east of tile 0.
        TileSet::new(vec![Tile::new(0, 0, 0, 0, 0), Tile::new(1, 0, 0, 0, 5)]).unwrap()
    }

    #[test]
    fn tau_error_freezes_bits() {
        let shape = build_shape_unscaled((0, 1), (1, 0)).unwrap();
        let k = TileSet::new(vec![Tile::new(0, 0, 0, 0, 0).directed(Compass::E)]).unwrap();
        let red = build_reduction_with(&two_tau(), &k, &shape, &Limits::default()).unwrap();
        let mut cells = vec![red.k_state(0, 0, 0, true); 16];
        cells[2] = red.k_state(0, 0, 1, true);
        let c = TorusConfig2D::new(red.alphabet(), 4, 4, cells).unwrap();
        let out = red.apply(&c).unwrap();
        // The bad edge sits between (1, 0) and (2, 0); only the two cells
        // whose five macro-tiles contain both keep their bit.
        for y in 0..4 {
            for x in 0..4 {
                let frozen = y == 0 && (x == 1 || x == 2);
                assert_eq!(red.layers(out.get((x, y))).bit, frozen, "cell {x},{y}");
            }
        }
    }

    #[test]
    fn mixed_macro_bits_stay() {
        let shape = build_shape((0, 1), (1, 0)).unwrap();
        assert_eq!(shape.len(), 9);
        let k = TileSet::new(vec![Tile::new(0, 0, 0, 0, 0).directed(Compass::N)]).unwrap();
        let red = build_reduction_with(&TileSet::uniform(0), &k, &shape, &Limits::default()).unwrap();
        assert_eq!(red.macro_side(), 3);
        let state = |x: Cell| -> Symbol {
            let (c, (e, n)) = red.shape().locate(x);
            let j = red.shape().index_of(c).unwrap();
            let bit = (e, n) == (0, 1) || ((e, n) == (0, 0) && x == (0, 0));
            red.k_state(0, j, 0, bit)
        };
        let own: Vec<Cell> = red.shape().cells().to_vec();
        for &x in &own {
            assert_eq!(red.image_at(&state, x), state(x), "cell {x:?}");
        }
        // The macro-tile to the south is uniform and points at the mixed one.
        let south = red.shape().translate((0, -1));
        let x = (south.0 + own[0].0, south.1 + own[0].1);
        assert_eq!(red.image_at(&state, x), state(x));
    }

    #[test]
    fn guard_uses_only_the_neighborhood() {
        let shape = build_shape((1, 3), (4, 3)).unwrap();
        let k = TileSet::new(vec![Tile::new(0, 0, 0, 0, 0).directed(Compass::E)]).unwrap();
        let red = build_reduction_with(&TileSet::uniform(0), &k, &shape, &Limits::default()).unwrap();
        let cfg = |x: Cell| -> Symbol {
            let (c, (e, _)) = red.shape().locate(x);
            red.k_state(0, red.shape().index_of(c).unwrap(), 0, e == 1)
        };
        let x = red.shape().cells()[0];
        let mut buf = Vec::new();
        let direct = eval_at(&red, x, &cfg, &mut buf);
        assert_eq!(direct, red.image_at(&cfg, x));
        assert!(red.layers(direct).bit);
        let r = red.extent();
        let far = |y: Cell| {
            if (y.0 - x.0).abs() + (y.1 - x.1).abs() > r {
                0
            } else {
                cfg(y)
            }
        };
        assert_eq!(red.image_at(&far, x), direct);
    }

    #[test]
    fn hierarchy_reduction_sizes() {
        let red = build_reduction(&TileSet::uniform(0), (0, 1), (1, 0), 2, &Limits::default()).unwrap();
        assert_eq!(red.patterns().len(), 4);
        let k = red.k().tiles().len() as u32;
        assert_eq!(red.state_count(), k * 2);
        assert!(red.extent() >= 2 * red.macro_side() - 1);
    }

    #[test]
    fn state_cap() {
        let limits = Limits {
            max_cells: 10,
            ..Limits::default()
        };
        let shape = build_shape((0, 1), (1, 0)).unwrap();
        let k = TileSet::new(vec![Tile::new(0, 0, 0, 0, 0).directed(Compass::E)]).unwrap();
        let err = build_reduction_with(&TileSet::uniform(0), &k, &shape, &limits).unwrap_err();
        assert!(matches!(err, CaError::CapExceeded { .. }));
    }

    proptest! {
        #[test]
        fn tile_layers_never_change(cells in proptest::collection::vec(0u32..8, 36)) {
            let shape = build_shape_unscaled((0, 1), (1, 0)).unwrap();
            let k = TileSet::new(vec![
                Tile::new(0, 0, 0, 0, 0).directed(Compass::E),
                Tile::new(1, 0, 0, 0, 0).directed(Compass::N),
            ]).unwrap();
            let red = build_reduction_with(&two_tau(), &k, &shape, &Limits::default()).unwrap();
            prop_assert_eq!(red.state_count(), 8);
            let c = TorusConfig2D::new(red.alphabet(), 6, 6, cells).unwrap();
            let out = red.apply(&c).unwrap();
            for (&a, &b) in c.cells().iter().zip(out.cells()) {
                let (la, lb) = (red.layers(a), red.layers(b));
                prop_assert_eq!((la.k, la.tau), (lb.k, lb.tau));
            }
        }
    }
}
