use std::collections::HashSet;

use super::ca::ReductionCA;
use crate::ca::{evolve_pair, AsymptoticPair2D, HalfPlane, LocalRule2D, Rect, TorusConfig2D};
use crate::wang::{tiles_torus, Anchor, SearchOutcome, TileSet, Tiling};
use crate::{CaError, Cell, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// Two paths; the pair agrees on a half-plane bounded by a line along `ν`.
    MuAsymptotic,
    /// Four paths; the pair agrees on two half-planes, along `ν` and `μ`.
    NuMuAsymptotic,
}

impl WitnessKind {
    pub fn anchor(self) -> Anchor {
        match self {
            WitnessKind::MuAsymptotic => Anchor::SouthMid,
            WitnessKind::NuMuAsymptotic => Anchor::Center,
        }
    }
}

/// A line through `point` with direction `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitLine {
    pub point: Cell,
    pub direction: Cell,
}

/// Two configurations with identical tile layers whose bits differ exactly
/// on the macro-tiles of one plane-filling path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub pair: AsymptoticPair2D,
    pub kind: WitnessKind,
    pub split_lines: Vec<SplitLine>,
    /// A cell of the macro-tile where the paths start.
    pub center: Cell,
    /// The periodic `τ` tiling used for the `τ` layer.
    pub tau_tiling: Tiling,
}

impl WitnessPair {
    /// The `w × h` window around the starting macro-tile.
    pub fn window(&self, w: usize, h: usize) -> Rect {
        Rect::new(self.center.0 - (w as i64 - 1) / 2, self.center.1 - (h as i64 - 1) / 2, w, h)
    }
}

/// The first torus tiling of `τ` with both periods at most `max_period`,
/// by increasing area.
pub fn periodic_tiling(tau: &TileSet, max_period: usize, limits: &Limits) -> Result<Tiling> {
    let mut dims: Vec<(usize, usize)> = (1..=max_period)
        .flat_map(|p| (1..=max_period).map(move |q| (p, q)))
        .collect();
    dims.sort_by_key(|&(p, q)| (p * q, p));
    for (p, q) in dims {
        if let SearchOutcome::Found(t) = tiles_torus(tau, p, q, limits) {
            return Ok(t);
        }
    }
    Err(CaError::NoTiling(format!(
        "no torus tiling with periods up to {max_period}"
    )))
}

/// Index into `τ.tiles()` of the periodic tiling at `x`.
pub(crate) fn tau_at(tau: &TileSet, t: &Tiling, (x, y): Cell) -> usize {
    let (p, q) = t.dims();
    let id = t.get((x.rem_euclid(p as i64) as usize, y.rem_euclid(q as i64) as usize));
    tau.tiles().iter().position(|tile| tile.id == id).expect("tiling ids come from τ")
}

/// Builds `(c, c′)`: both carry the anchored `K` pattern and a periodic
/// `τ` tiling on the macro-tiles of the pattern, with a constant
/// background elsewhere. All bits of `c` are 0; `c′` has bit 1 on the
/// macro-tiles of the first path (east for two paths, north-east for four).
pub fn build_witness(red: &ReductionCA, kind: WitnessKind, limits: &Limits) -> Result<WitnessPair> {
    let tau_tiling = periodic_tiling(red.tau(), 4, limits)?;
    let kp = red
        .pattern(kind.anchor())
        .ok_or_else(|| CaError::InvalidArgument("the reduction has no hierarchy pattern".into()))?;
    let shape = red.shape();
    let side = kp.pattern.side();
    let path: HashSet<(usize, usize)> = kp.cover.paths()[0].iter().copied().collect();
    let cells_total = (side * side) as u128 * shape.len() as u128;
    if cells_total > limits.max_cells as u128 {
        return Err(CaError::cap("witness patch", cells_total, limits.max_cells as u128));
    }
    let mut domain = Vec::with_capacity(cells_total as usize);
    let (mut da, mut db) = (Vec::new(), Vec::new());
    let mut diffs = Vec::new();
    for y in 0..side {
        for x in 0..side {
            let b = red.base_index(kp.tiling.get((x, y)))?;
            let anchor = shape.translate(kp.pattern.plane((x, y)));
            let on_path = path.contains(&(x, y));
            for (j, &c) in shape.cells().iter().enumerate() {
                let cell = (anchor.0 + c.0, anchor.1 + c.1);
                let t = tau_at(red.tau(), &tau_tiling, cell);
                domain.push(cell);
                da.push(red.k_state(b, j, t, false));
                db.push(red.k_state(b, j, t, on_path));
                if on_path {
                    diffs.push(cell);
                }
            }
        }
    }
    let (nu, mu) = (shape.nu(), shape.mu());
    let c = side / 2;
    let start = shape.translate(kp.pattern.plane((c, c)));
    let mut normals = vec![(-mu.0, -mu.1)];
    let mut split_lines = vec![SplitLine {
        point: start,
        direction: nu,
    }];
    if kind == WitnessKind::NuMuAsymptotic {
        normals.push((-nu.0, -nu.1));
        split_lines.push(SplitLine {
            point: start,
            direction: mu,
        });
    }
    let halfplanes = normals
        .into_iter()
        .map(|n| HalfPlane::avoiding(n, diffs.iter().copied()))
        .collect();
    let background = TorusConfig2D::constant(red.alphabet(), 1, 1, 0)?;
    let pair = AsymptoticPair2D::new(background, domain, da, db, halfplanes)?;
    let first = shape.cells()[shape.len() / 2];
    Ok(WitnessPair {
        pair,
        kind,
        split_lines,
        center: (start.0 + first.0, start.1 + first.1),
        tau_tiling,
    })
}

/// Whether `F_τ(c)` and `F_τ(c′)` agree on `window`.
pub fn check_equal_image(red: &ReductionCA, pair: &AsymptoticPair2D, window: Rect, limits: &Limits) -> Result<bool> {
    Ok(evolve_pair(red, pair, 1, window, limits)?.equal_at(1))
}

/// Checks every `w × h` window around the starting macro-tile with
/// `w, h ≤ max_side`; returns the first window where the images differ.
pub fn check_witness_windows(
    red: &ReductionCA,
    w: &WitnessPair,
    max_side: usize,
    limits: &Limits,
) -> Result<Option<Rect>> {
    for ww in 1..=max_side {
        for hh in 1..=max_side {
            let win = w.window(ww, hh);
            if !check_equal_image(red, &w.pair, win, limits)? {
                return Ok(Some(win));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::build_reduction;
    use crate::wang::Tile;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn uniform_tau_witnesses_have_equal_images() {
        let red = build_reduction(&TileSet::uniform(0), (0, 1), (1, 0), 3, &lim()).unwrap();
        for kind in [WitnessKind::MuAsymptotic, WitnessKind::NuMuAsymptotic] {
            let w = build_witness(&red, kind, &lim()).unwrap();
            assert_eq!(w.split_lines.len(), if kind == WitnessKind::MuAsymptotic { 1 } else { 2 });
            assert!(!w.pair.difference_cells().is_empty());
            assert_eq!(check_witness_windows(&red, &w, 8, &lim()).unwrap(), None, "{kind:?}");
            let start = w.pair.difference_cells();
            assert!(start.contains(&w.center));
        }
    }

    #[test]
    fn tile_layers_identical_bits_differ_on_path() {
        let red = build_reduction(&TileSet::checkerboard(), (0, 1), (1, 0), 2, &lim()).unwrap();
        let w = build_witness(&red, WitnessKind::MuAsymptotic, &lim()).unwrap();
        let k = red.shape().len();
        let path_len = red.pattern(Anchor::SouthMid).unwrap().cover.paths()[0].len();
        assert_eq!(w.pair.difference_cells().len(), path_len * k);
        for &x in w.pair.domain() {
            let (a, b) = (red.layers(w.pair.a(x)), red.layers(w.pair.b(x)));
            assert_eq!((a.k, a.tau), (b.k, b.tau));
        }
        assert_eq!(check_witness_windows(&red, &w, 4, &lim()).unwrap(), None);
    }

    #[test]
    fn tau_error_breaks_equality() {
        let tau = TileSet::new(vec![Tile::new(0, 0, 0, 0, 0), Tile::new(1, 0, 0, 0, 5)]).unwrap();
        let red = build_reduction(&tau, (0, 1), (1, 0), 3, &lim()).unwrap();
        let w = build_witness(&red, WitnessKind::NuMuAsymptotic, &lim()).unwrap();
        let bad = w.center;
        let domain = w.pair.domain().to_vec();
        let swap = |s: u32| {
            let mut l = red.layers(s);
            l.tau = 1;
            red.encode(l)
        };
        let pick = |f: &dyn Fn(Cell) -> u32| -> Vec<u32> {
            domain.iter().map(|&x| if x == bad { swap(f(x)) } else { f(x) }).collect()
        };
        let broken = AsymptoticPair2D::new(
            w.pair.background().clone(),
            domain.clone(),
            pick(&|x| w.pair.a(x)),
            pick(&|x| w.pair.b(x)),
            w.pair.halfplanes().to_vec(),
        )
        .unwrap();
        assert!(!check_equal_image(&red, &broken, w.window(3, 3), &lim()).unwrap());
    }

    #[test]
    fn no_tiling_is_an_error() {
        // East and west colors never match.
        let tau = TileSet::new(vec![Tile::new(0, 0, 1, 0, 2)]).unwrap();
        let red = build_reduction(&tau, (0, 1), (1, 0), 2, &lim()).unwrap();
        let err = build_witness(&red, WitnessKind::MuAsymptotic, &lim()).unwrap_err();
        assert!(matches!(err, CaError::NoTiling(_)));
    }
}
