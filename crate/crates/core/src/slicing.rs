//! Slicing a 2D CA along a direction `ν`.
//!
//! `Z²` is cut into the lines `L_i = {x : n·x = i}` parallel to the
//! primitive vector `d ⊥ ν`, where `n` is the primitive normal. Every cell is
//! `x = i·y1 + t·d` for a fixed `y1 ∈ L_1`. A configuration invariant under
//! `σ^v` with `v = k·d` is determined by the `k` cells `y_i + t·d`,
//! `0 ≤ t < k`, of each line, read as one symbol of `B = A^k` (`t = 0` most
//! significant). The 2D rule then acts on these line symbols as a 1D CA of
//! radius `r* = r·(|n_x| + |n_y|)`.

use crate::ca::{Alphabet, LocalRule2D, PeriodicConfig1D, RuleTable1D, RuleTable2D, TorusConfig2D};
use crate::lattice::{dot, gcd, LatticeTorus};
use crate::{CaError, Cell, Limits, Result, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// The line decomposition of `Z²` induced by `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LineFamily {
    pub nu: Cell,
    /// Primitive direction of the lines, with `d_x > 0`, or `d = (0, 1)`.
    pub d: Cell,
    /// Primitive normal; its component along `axis` is positive.
    pub normal: Cell,
    /// The point of `L_1` with smallest max-norm (ties: lexicographic).
    pub y1: Cell,
    /// Axis along which the lines are enumerated: `x` unless `d` is
    /// horizontal.
    pub axis: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SliceCoord {
    pub line_index: i64,
    pub offset: i64,
}

pub fn build_family(nu: Cell) -> Result<LineFamily> {
    if nu == (0, 0) {
        return Err(CaError::InvalidArgument("slicing vector must be non-zero".into()));
    }
    let g = gcd(nu.0, nu.1);
    let mut d = (-nu.1 / g, nu.0 / g);
    if d.0 < 0 || (d.0 == 0 && d.1 < 0) {
        d = (-d.0, -d.1);
    }
    let axis = if d.1 == 0 { Axis::Y } else { Axis::X };
    let mut normal = (-d.1, d.0);
    let along = match axis {
        Axis::X => normal.0,
        Axis::Y => normal.1,
    };
    if along < 0 {
        normal = (-normal.0, -normal.1);
    }
    let bound = normal.0.abs().max(normal.1.abs());
    let y1 = (-bound..=bound)
        .flat_map(|x| (-bound..=bound).map(move |y| (x, y)))
        .filter(|&p| dot(normal, p) == 1)
        .min_by_key(|&(x, y)| (x.abs().max(y.abs()), x, y))
        .expect("a primitive normal has a small Bezout point");
    Ok(LineFamily {
        nu,
        d,
        normal,
        y1,
        axis,
    })
}

impl LineFamily {
    pub fn line_index(&self, x: Cell) -> i64 {
        dot(self.normal, x)
    }

    pub fn decompose(&self, x: Cell) -> SliceCoord {
        let i = self.line_index(x);
        let rest = (x.0 - i * self.y1.0, x.1 - i * self.y1.1);
        let t = dot(rest, self.d) / dot(self.d, self.d);
        SliceCoord {
            line_index: i,
            offset: t,
        }
    }

    pub fn compose(&self, c: SliceCoord) -> Cell {
        (
            c.line_index * self.y1.0 + c.offset * self.d.0,
            c.line_index * self.y1.1 + c.offset * self.d.1,
        )
    }
}

pub fn compute_rstar(family: &LineFamily, r: u32) -> u32 {
    let r = r as i64;
    let r1 = family.line_index((r, r)).abs();
    let r2 = family.line_index((r, -r)).abs();
    r1.max(r2) as u32
}

/// The 1D CA over `B = A^k` conjugate to `F` restricted to `S_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicedCA {
    pub base_rule: RuleTable2D,
    pub family: LineFamily,
    pub v: Cell,
    pub k: u32,
    pub rstar: u32,
    pub rule: RuleTable1D,
}

impl SlicedCA {
    pub fn base_alphabet(&self) -> Alphabet {
        self.base_rule.alphabet()
    }

    pub fn sliced_alphabet(&self) -> Alphabet {
        self.rule.alphabet()
    }

    /// Digit `t mod k` of a line symbol.
    #[inline]
    pub fn digit(&self, b: Symbol, t: i64) -> Symbol {
        digit(b, t, self.k, self.base_alphabet().size())
    }

    /// Line symbol from its `k` digits.
    pub fn encode(&self, digits: &[Symbol]) -> Symbol {
        let a = self.base_alphabet().size();
        digits.iter().fold(0, |acc, &s| acc * a + s)
    }

    /// The cell `x` of the `v`-periodic configuration whose line symbols
    /// are given by `line`.
    pub fn cell_from_lines(&self, line: impl Fn(i64) -> Symbol, x: Cell) -> Symbol {
        let c = self.family.decompose(x);
        self.digit(line(c.line_index), c.offset)
    }
}

#[inline]
fn digit(b: Symbol, t: i64, k: u32, a: u32) -> Symbol {
    let pos = t.rem_euclid(k as i64) as u32;
    (b / a.pow(k - 1 - pos)) % a
}

/// The slice period `k` with `v = ±k·d`.
pub fn slice_period(family: &LineFamily, v: Cell) -> Result<u32> {
    if dot(v, family.nu) != 0 || v == (0, 0) {
        return Err(CaError::InvalidArgument(format!(
            "v = {v:?} must be a non-zero vector orthogonal to {:?}",
            family.nu
        )));
    }
    let k = if family.d.0 != 0 { v.0 / family.d.0 } else { v.1 / family.d.1 };
    Ok(k.unsigned_abs() as u32)
}

pub fn build_sliced_rule(rule: &RuleTable2D, nu: Cell, v: Cell, limits: &Limits) -> Result<SlicedCA> {
    let family = build_family(nu)?;
    let k = slice_period(&family, v)?;
    let a = rule.alphabet();
    let b = Alphabet::product(a, k)?;
    let rstar = compute_rstar(&family, rule.radius());
    // Where each neighborhood cell of t·d lands: (line slot, digit position).
    let lookups: Vec<Vec<(usize, i64)>> = (0..k as i64)
        .map(|t| {
            rule.offsets()
                .iter()
                .map(|&(dx, dy)| {
                    let c = family.decompose((t * family.d.0 + dx, t * family.d.1 + dy));
                    debug_assert!(c.line_index.unsigned_abs() <= rstar as u64);
                    ((c.line_index + rstar as i64) as usize, c.offset)
                })
                .collect()
        })
        .collect();
    let mut neigh = Vec::with_capacity(rule.offsets().len());
    let sliced = RuleTable1D::from_fn(b, rstar, limits, |word| {
        (0..k as usize).fold(0, |acc, t| {
            neigh.clear();
            neigh.extend(
                lookups[t]
                    .iter()
                    .map(|&(slot, off)| digit(word[slot], off, k, a.size())),
            );
            acc * a.size() + rule.eval(&neigh)
        })
    })?;
    Ok(SlicedCA {
        base_rule: rule.clone(),
        family,
        v,
        k,
        rstar,
        rule: sliced,
    })
}

/// `Ψ`: the line-symbol sequence of a `v`-periodic torus configuration.
pub fn psi(c: &TorusConfig2D, sliced: &SlicedCA) -> Result<PeriodicConfig1D> {
    sliced.base_alphabet().expect(c.alphabet())?;
    if !c.is_invariant(sliced.v) {
        return Err(CaError::NotPeriodic { v: sliced.v });
    }
    let (p, q) = c.dims();
    let n = sliced.family.normal;
    let period = gcd(n.0 * p as i64, n.1 * q as i64) as usize;
    let k = sliced.k as i64;
    let cells = (0..period as i64)
        .map(|i| {
            (0..k).fold(0, |acc, t| {
                let x = sliced.family.compose(SliceCoord {
                    line_index: i,
                    offset: t,
                });
                acc * c.alphabet().size() + c.get(x)
            })
        })
        .collect();
    Ok(PeriodicConfig1D::new(sliced.sliced_alphabet(), cells)?.minimal())
}

/// `Ψ⁻¹`, on the smallest rectangular torus carrying the result.
pub fn psi_inverse(a: &PeriodicConfig1D, sliced: &SlicedCA) -> Result<TorusConfig2D> {
    sliced.sliced_alphabet().expect(a.alphabet())?;
    let f = &sliced.family;
    let k = sliced.k as i64;
    let period = a.period() as i64;
    let lattice = LatticeTorus::new(&[(k * f.d.0, k * f.d.1), (period * f.y1.0, period * f.y1.1)])?;
    let (p, q) = lattice.rectangular_periods();
    TorusConfig2D::from_fn(sliced.base_alphabet(), p as usize, q as usize, |x| {
        sliced.cell_from_lines(|i| a.get(i), x)
    })
}

/// All configurations of `S_v` that are also `(p, q)`-periodic, in a fixed
/// order. Fails if there are more than `limits.max_cells` of them.
pub fn periodic_members(
    alphabet: Alphabet,
    v: Cell,
    p: usize,
    q: usize,
    limits: &Limits,
) -> Result<impl Iterator<Item = TorusConfig2D>> {
    let lattice = LatticeTorus::new(&[(p as i64, 0), (0, q as i64), v])?;
    let n = lattice.cells();
    let count = (alphabet.size() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > limits.max_cells as u128 {
        return Err(CaError::cap("S_v torus members", count, limits.max_cells as u128));
    }
    let slot: Vec<usize> = (0..q as i64)
        .flat_map(|y| (0..p as i64).map(move |x| (x, y)))
        .map(|x| lattice.index(x))
        .collect();
    let a = alphabet.size();
    Ok((0..count as u64).map(move |mut code| {
        let mut dom = vec![0; n];
        for s in dom.iter_mut() {
            *s = (code % a as u64) as Symbol;
            code /= a as u64;
        }
        let cells = slot.iter().map(|&i| dom[i]).collect();
        TorusConfig2D::new(alphabet, p, q, cells).expect("valid members")
    }))
}
