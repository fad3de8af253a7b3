use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ca::ReductionCA;
use super::witness::{periodic_tiling, tau_at};
use crate::ca::{AsymptoticPair2D, LocalRule2D, Rect, TorusConfig2D};
use crate::wang::{Anchor, Compass, Tiling};
use crate::{Cell, Limits, Result, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeBounds {
    /// Side of the square of macro-tiles whose bits may be flipped (at most 4).
    pub box_macros: usize,
    /// Number of random scenes on top of the structured ones.
    pub random_scenes: usize,
    pub seed: u64,
}

impl Default for ProbeBounds {
    fn default() -> Self {
        ProbeBounds {
            box_macros: 3,
            random_scenes: 4,
            seed: 0,
        }
    }
}

/// An equal-image pair found by the probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeWitness {
    pub scene: String,
    pub pair: AsymptoticPair2D,
    /// Lattice coordinates of the flipped macro-tiles.
    pub flipped: Vec<(i64, i64)>,
    /// The guard holds at every difference cell in both configurations.
    pub guard_at_differences: bool,
    /// Some `3 × 3` block inside the difference region carries a valid
    /// `τ` pattern.
    pub valid_block: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProbeReport {
    pub scenes: Vec<String>,
    pub pairs_tested: u64,
    pub equal_image_pairs: u64,
    pub with_valid_block: u64,
    /// At most [`KEPT_WITNESSES`] witnesses are stored.
    pub witnesses: Vec<ProbeWitness>,
    /// Every equal-image pair had the guard holding on its differences.
    pub structural_ok: bool,
}

pub const KEPT_WITNESSES: usize = 8;

struct Scene {
    name: String,
    background: TorusConfig2D,
    patch: HashMap<Cell, Symbol>,
}

impl Scene {
    fn get(&self, x: Cell) -> Symbol {
        self.patch.get(&x).copied().unwrap_or_else(|| self.background.get(x))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Background period along both axes of a macro lattice `⟨p·μ, q·ν⟩`.
fn macro_period(red: &ReductionCA, p: usize, q: usize) -> i64 {
    let (mu, nu) = (red.shape().mu(), red.shape().nu());
    let d = (p as i64 * mu.0) * (q as i64 * nu.1) - (p as i64 * mu.1) * (q as i64 * nu.0);
    d.abs()
}

/// A torus tiling of the base of `K` on at most 2 × 2 macro-tiles.
fn periodic_k(red: &ReductionCA, limits: &Limits) -> Option<Tiling> {
    periodic_tiling(red.k().base(), 2, limits).ok()
}

fn k_layer_periodic(red: &ReductionCA, kt: &Tiling, x: Cell) -> (usize, usize) {
    let shape = red.shape();
    let (c, (e, n)) = shape.locate(x);
    let (p, q) = kt.dims();
    let id = kt.get((e.rem_euclid(p as i64) as usize, n.rem_euclid(q as i64) as usize));
    let b = red.base_index(id).expect("tiling ids come from the base");
    (b, shape.index_of(c).expect("located in the shape"))
}

fn structured_scenes(red: &ReductionCA, rng: &mut ChaCha8Rng, limits: &Limits) -> Vec<Scene> {
    let mut scenes = Vec::new();
    let tau_tiling = periodic_tiling(red.tau(), 4, limits).ok();
    let ntau = red.tau().len();
    if let Some(kt) = periodic_k(red, limits) {
        let d = macro_period(red, kt.dims().0, kt.dims().1);
        let mut variants: Vec<(String, i64, i64)> = vec![("constant τ".into(), 1, 1), ("random τ".into(), 2, 2)];
        if let Some(t) = &tau_tiling {
            variants.insert(0, ("periodic τ".into(), t.dims().0 as i64, t.dims().1 as i64));
        }
        for (name, tp, tq) in variants {
            let (p, q) = (lcm(d, tp), lcm(d, tq));
            if (p * q) as u64 > limits.max_cells {
                continue;
            }
            let random: Vec<usize> = (0..(tp * tq)).map(|_| rng.gen_range(0..ntau)).collect();
            let bg = TorusConfig2D::from_fn(red.alphabet(), p as usize, q as usize, |x| {
                let (b, j) = k_layer_periodic(red, &kt, x);
                let t = match name.as_str() {
                    "periodic τ" => tau_at(red.tau(), tau_tiling.as_ref().expect("present"), x),
                    "constant τ" => 0,
                    _ => random[(x.1.rem_euclid(tq) * tp + x.0.rem_euclid(tp)) as usize],
                };
                red.k_state(b, j, t, false)
            });
            if let Ok(background) = bg {
                scenes.push(Scene {
                    name: format!("periodic K, {name}"),
                    background,
                    patch: HashMap::new(),
                });
            }
        }
    }
    if let Some(kp) = red.pattern(Anchor::Center) {
        let shape = red.shape();
        let side = kp.pattern.side();
        let mut patch = HashMap::new();
        for y in 0..side {
            for x in 0..side {
                let b = red.base_index(kp.tiling.get((x, y))).expect("tiling ids come from the base");
                let anchor = shape.translate(kp.pattern.plane((x, y)));
                for (j, &c) in shape.cells().iter().enumerate() {
                    let cell = (anchor.0 + c.0, anchor.1 + c.1);
                    let t = tau_tiling.as_ref().map_or(0, |tt| tau_at(red.tau(), tt, cell));
                    patch.insert(cell, red.k_state(b, j, t, false));
                }
            }
        }
        if let Ok(background) = TorusConfig2D::constant(red.alphabet(), 1, 1, 0) {
            scenes.push(Scene {
                name: "centered hierarchy".into(),
                background,
                patch,
            });
        }
    }
    scenes
}

fn random_scene(red: &ReductionCA, idx: usize, reach: i64, rng: &mut ChaCha8Rng) -> Option<Scene> {
    let shape = red.shape();
    let nbase = red.k().base().len();
    let ntau = red.tau().len();
    let mut patch = HashMap::new();
    for e in -reach..=reach {
        for n in -reach..=reach {
            let b = rng.gen_range(0..nbase);
            let bit = rng.gen_bool(0.5);
            let anchor = shape.translate((e, n));
            for (j, &c) in shape.cells().iter().enumerate() {
                let t = rng.gen_range(0..ntau);
                patch.insert((anchor.0 + c.0, anchor.1 + c.1), red.k_state(b, j, t, bit));
            }
        }
    }
    Some(Scene {
        name: format!("random {idx}"),
        background: TorusConfig2D::constant(red.alphabet(), 1, 1, 0).ok()?,
        patch,
    })
}

/// Whether the `τ` layer on the `3 × 3` block at `(x0, y0)` matches on
/// all inner edges.
fn valid_tau_block(red: &ReductionCA, get: &dyn Fn(Cell) -> Symbol, (x0, y0): Cell) -> bool {
    let tile = |x: Cell| &red.tau().tiles()[red.layers(get(x)).tau];
    (0..3).all(|dy| {
        (0..3).all(|dx| {
            let x = (x0 + dx, y0 + dy);
            (dx == 2 || tile(x).color(Compass::E) == tile((x.0 + 1, x.1)).color(Compass::W))
                && (dy == 2 || tile(x).color(Compass::N) == tile((x.0, x.1 + 1)).color(Compass::S))
        })
    })
}

/// Searches pairs that differ by flipping the bits of whole macro-tiles
/// inside a small box, over several backgrounds, and keeps those whose
/// one-step images agree everywhere. For each such pair it records
/// whether the guard held on all differences and whether the difference
/// region carries a valid `3 × 3` block of `τ`.
pub fn bounded_closing_probe(red: &ReductionCA, bounds: &ProbeBounds, limits: &Limits) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let side = bounds.box_macros.clamp(1, 4) as i64;
    let lo = -(side - 1) / 2;
    let box_macros: Vec<(i64, i64)> = (lo..lo + side).flat_map(|e| (lo..lo + side).map(move |n| (e, n))).collect();
    let mut scenes = structured_scenes(red, &mut rng, limits);
    for i in 0..bounds.random_scenes {
        scenes.extend(random_scene(red, i, side, &mut rng));
    }
    let shape = red.shape();
    let reach = red.reach();
    let mut report = ProbeReport {
        structural_ok: true,
        ..ProbeReport::default()
    };
    for scene in &scenes {
        report.scenes.push(scene.name.clone());
        let a = |x: Cell| scene.get(x);
        for mask in 1u32..(1 << box_macros.len()) {
            report.pairs_tested += 1;
            let flipped: Vec<(i64, i64)> = box_macros
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &m)| m)
                .collect();
            let flip_set: HashSet<(i64, i64)> = flipped.iter().copied().collect();
            let b = |x: Cell| {
                let s = scene.get(x);
                if flip_set.contains(&shape.locate(x).1) {
                    s ^ 1
                } else {
                    s
                }
            };
            let diffs: Vec<Cell> = flipped
                .iter()
                .flat_map(|&m| {
                    let t = shape.translate(m);
                    shape.cells().iter().map(move |&c| (t.0 + c.0, t.1 + c.1))
                })
                .collect();
            if diffs.iter().any(|&x| red.image_at(&a, x) != red.image_at(&b, x)) {
                continue;
            }
            let region = Rect::bounding(diffs.iter().copied()).expect("non-empty").grow(reach);
            if region.cells().any(|x| red.image_at(&a, x) != red.image_at(&b, x)) {
                continue;
            }
            report.equal_image_pairs += 1;
            let guard_at_differences = diffs.iter().all(|&x| red.guard_holds(&a, x) && red.guard_holds(&b, x));
            report.structural_ok &= guard_at_differences;
            let bbox = Rect::bounding(diffs.iter().copied()).expect("non-empty");
            let valid_block = bbox.w >= 3
                && bbox.h >= 3
                && (0..=(bbox.h - 3) as i64).any(|dy| {
                    (0..=(bbox.w - 3) as i64).any(|dx| valid_tau_block(red, &a, (bbox.x0 + dx, bbox.y0 + dy)))
                });
            if valid_block {
                report.with_valid_block += 1;
            }
            if report.witnesses.len() < KEPT_WITNESSES {
                if let Ok(pair) = witness_pair(scene, &diffs, &b) {
                    report.witnesses.push(ProbeWitness {
                        scene: scene.name.clone(),
                        pair,
                        flipped,
                        guard_at_differences,
                        valid_block,
                    });
                }
            }
        }
    }
    report
}

fn witness_pair(scene: &Scene, diffs: &[Cell], b: &dyn Fn(Cell) -> Symbol) -> Result<AsymptoticPair2D> {
    let mut domain: Vec<Cell> = scene.patch.keys().copied().collect();
    let known: HashSet<Cell> = domain.iter().copied().collect();
    domain.extend(diffs.iter().filter(|x| !known.contains(x)));
    domain.sort_unstable();
    let da = domain.iter().map(|&x| scene.get(x)).collect();
    let db = domain.iter().map(|&x| b(x)).collect();
    AsymptoticPair2D::new(scene.background.clone(), domain, da, db, Vec::new())
}
