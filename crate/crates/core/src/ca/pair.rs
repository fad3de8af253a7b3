use std::collections::HashMap;

use super::{eval_at, LocalRule2D, TorusConfig2D};
use crate::lattice::dot;
use crate::{CaError, Cell, Limits, Result, Symbol};

/// An axis-aligned window `[x0, x0 + w) × [y0, y0 + h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x0: i64,
    pub y0: i64,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn new(x0: i64, y0: i64, w: usize, h: usize) -> Self {
        Rect { x0, y0, w, h }
    }

    /// The `w × h` window whose lower-left quarter starts at the origin.
    pub fn centered(w: usize, h: usize) -> Self {
        Rect::new(-((w as i64) / 2), -((h as i64) / 2), w, h)
    }

    pub fn len(&self) -> usize {
        self.w * self.h
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn grow(&self, m: i64) -> Rect {
        Rect::new(
            self.x0 - m,
            self.y0 - m,
            (self.w as i64 + 2 * m).max(0) as usize,
            (self.h as i64 + 2 * m).max(0) as usize,
        )
    }

    pub fn contains(&self, (x, y): Cell) -> bool {
        x >= self.x0 && y >= self.y0 && x < self.x0 + self.w as i64 && y < self.y0 + self.h as i64
    }

    /// Row-major (south row first) cells.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.h as i64).flat_map(move |dy| (0..self.w as i64).map(move |dx| (self.x0 + dx, self.y0 + dy)))
    }

    pub fn index(&self, (x, y): Cell) -> usize {
        ((y - self.y0) as usize) * self.w + (x - self.x0) as usize
    }

    pub fn bounding(cells: impl IntoIterator<Item = Cell>) -> Option<Rect> {
        let mut it = cells.into_iter();
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for (x, y) in it {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        Some(Rect::new(lo.0, lo.1, (hi.0 - lo.0 + 1) as usize, (hi.1 - lo.1 + 1) as usize))
    }
}

/// `{x : normal · x ≥ threshold}`, a half-plane where a pair must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfPlane {
    pub normal: Cell,
    pub threshold: i64,
}

impl HalfPlane {
    pub fn contains(&self, x: Cell) -> bool {
        dot(self.normal, x) >= self.threshold
    }

    /// The tightest half-plane with this normal avoiding all `cells`.
    pub fn avoiding(normal: Cell, cells: impl IntoIterator<Item = Cell>) -> Self {
        let threshold = cells.into_iter().map(|x| dot(normal, x) + 1).max().unwrap_or(0);
        HalfPlane { normal, threshold }
    }
}

/// Two configurations equal to a periodic background except on a finite
/// patch. They agree on every recorded half-plane, so the pair is
/// `n`-asymptotic for each recorded normal `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticPair2D {
    background: TorusConfig2D,
    domain: Vec<Cell>,
    diff_a: Vec<Symbol>,
    diff_b: Vec<Symbol>,
    halfplanes: Vec<HalfPlane>,
    lookup: HashMap<Cell, usize>,
}

impl AsymptoticPair2D {
    pub fn new(
        background: TorusConfig2D,
        domain: Vec<Cell>,
        diff_a: Vec<Symbol>,
        diff_b: Vec<Symbol>,
        halfplanes: Vec<HalfPlane>,
    ) -> Result<Self> {
        if domain.len() != diff_a.len() || domain.len() != diff_b.len() {
            return Err(CaError::InvalidArgument("patch lengths differ".into()));
        }
        let alphabet = background.alphabet();
        for &s in diff_a.iter().chain(&diff_b) {
            alphabet.check(s)?;
        }
        let mut lookup = HashMap::with_capacity(domain.len());
        for (i, &x) in domain.iter().enumerate() {
            if lookup.insert(x, i).is_some() {
                return Err(CaError::InvalidArgument(format!("cell {x:?} repeated in patch")));
            }
        }
        let pair = AsymptoticPair2D {
            background,
            domain,
            diff_a,
            diff_b,
            halfplanes,
            lookup,
        };
        let diffs = pair.difference_cells();
        if diffs.is_empty() {
            return Err(CaError::DegeneratePair("configurations are equal".into()));
        }
        for h in &pair.halfplanes {
            if let Some(x) = diffs.iter().find(|&&x| h.contains(x)) {
                return Err(CaError::DegeneratePair(format!(
                    "difference at {x:?} inside agreement half-plane {h:?}"
                )));
            }
        }
        Ok(pair)
    }

    pub fn background(&self) -> &TorusConfig2D {
        &self.background
    }

    pub fn domain(&self) -> &[Cell] {
        &self.domain
    }

    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    pub fn difference_cells(&self) -> Vec<Cell> {
        self.domain
            .iter()
            .zip(self.diff_a.iter().zip(&self.diff_b))
            .filter(|(_, (a, b))| a != b)
            .map(|(&x, _)| x)
            .collect()
    }

    #[inline]
    pub fn a(&self, x: Cell) -> Symbol {
        match self.lookup.get(&x) {
            Some(&i) => self.diff_a[i],
            None => self.background.get(x),
        }
    }

    #[inline]
    pub fn b(&self, x: Cell) -> Symbol {
        match self.lookup.get(&x) {
            Some(&i) => self.diff_b[i],
            None => self.background.get(x),
        }
    }
}

/// Space-time traces of a window under both members of a pair. Frame `t`
/// holds `F^t` restricted to the window, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTrace {
    pub window: Rect,
    pub a: Vec<Vec<Symbol>>,
    pub b: Vec<Vec<Symbol>>,
}

impl PairTrace {
    pub fn differences(&self, step: usize) -> Vec<Cell> {
        self.window
            .cells()
            .zip(self.a[step].iter().zip(&self.b[step]))
            .filter(|(_, (x, y))| x != y)
            .map(|(c, _)| c)
            .collect()
    }

    pub fn equal_at(&self, step: usize) -> bool {
        self.a[step] == self.b[step]
    }
}

/// `F^t` on `window` for `t = 0..=steps`, computed exactly on the plane by
/// shrinking dependency cones.
pub fn evolve_window<R: LocalRule2D + ?Sized>(
    rule: &R,
    get: &dyn Fn(Cell) -> Symbol,
    steps: usize,
    window: Rect,
    limits: &Limits,
) -> Result<Vec<Vec<Symbol>>> {
    let reach = rule.reach();
    let outer = window.grow(reach * steps as i64);
    if outer.len() as u64 > limits.max_cells {
        return Err(CaError::cap("dependency cone", outer.len() as u128, limits.max_cells as u128));
    }
    let mut region = outer;
    let mut values: Vec<Symbol> = region.cells().map(get).collect();
    let mut frames = Vec::with_capacity(steps + 1);
    let project = |region: &Rect, values: &[Symbol]| -> Vec<Symbol> {
        window.cells().map(|x| values[region.index(x)]).collect()
    };
    frames.push(project(&region, &values));
    let mut buf = Vec::new();
    for _ in 0..steps {
        let next = region.grow(-reach);
        let prev = |x: Cell| values[region.index(x)];
        let new_values: Vec<Symbol> = next.cells().map(|x| eval_at(rule, x, &prev, &mut buf)).collect();
        region = next;
        values = new_values;
        frames.push(project(&region, &values));
    }
    Ok(frames)
}

pub fn evolve_pair<R: LocalRule2D + ?Sized>(
    rule: &R,
    pair: &AsymptoticPair2D,
    steps: usize,
    window: Rect,
    limits: &Limits,
) -> Result<PairTrace> {
    rule.alphabet().expect(pair.background.alphabet())?;
    Ok(PairTrace {
        window,
        a: evolve_window(rule, &|x| pair.a(x), steps, window, limits)?,
        b: evolve_window(rule, &|x| pair.b(x), steps, window, limits)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::{builtin, Alphabet};

    fn single_diff(p: usize) -> AsymptoticPair2D {
        let bg = TorusConfig2D::constant(Alphabet::BINARY, p, p, 0).unwrap();
        AsymptoticPair2D::new(bg, vec![(0, 0)], vec![0], vec![1], vec![]).unwrap()
    }

    #[test]
    fn degenerate_pair_rejected() {
        let bg = TorusConfig2D::constant(Alphabet::BINARY, 2, 2, 0).unwrap();
        let err = AsymptoticPair2D::new(bg.clone(), vec![(0, 0)], vec![1], vec![1], vec![]).unwrap_err();
        assert!(matches!(err, CaError::DegeneratePair(_)));
        let h = HalfPlane {
            normal: (1, 0),
            threshold: 0,
        };
        assert!(AsymptoticPair2D::new(bg, vec![(0, 0)], vec![0], vec![1], vec![h]).is_err());
    }

    #[test]
    fn xor_corners_one_step() {
        let rule = builtin::xor_corners(Alphabet::BINARY);
        let trace = evolve_pair(&rule, &single_diff(5), 1, Rect::centered(5, 5), &Limits::default()).unwrap();
        assert_eq!(trace.differences(0), vec![(0, 0)]);
        assert_eq!(trace.differences(1), vec![(-1, -1), (1, 1)]);
    }

    #[test]
    fn identity_keeps_differences() {
        let rule = builtin::identity(Alphabet::BINARY, 1);
        let trace = evolve_pair(&rule, &single_diff(3), 4, Rect::centered(7, 7), &Limits::default()).unwrap();
        for t in 0..=4 {
            assert_eq!(trace.differences(t), vec![(0, 0)]);
        }
    }

    #[test]
    fn traces_do_not_depend_on_background_size() {
        // The constant background has every period; the traces must agree.
        let rule = builtin::xor_corners(Alphabet::BINARY);
        let w = Rect::centered(6, 6);
        let small = evolve_pair(&rule, &single_diff(1), 3, w, &Limits::default()).unwrap();
        let large = evolve_pair(&rule, &single_diff(40), 3, w, &Limits::default()).unwrap();
        assert_eq!(small, large);
    }

    #[test]
    fn cone_cap() {
        let rule = builtin::xor_corners(Alphabet::BINARY);
        let limits = Limits {
            max_cells: 10,
            ..Limits::default()
        };
        assert!(evolve_pair(&rule, &single_diff(3), 2, Rect::centered(3, 3), &limits).is_err());
    }
}
