use super::Alphabet;
use crate::lattice::lcm;
use crate::{CaError, Cell, Result, Symbol};

/// A `(p, q)`-periodic configuration of `A^{Z²}`, stored as one period.
///
/// Cell `(x, y)` lives at `cells[y·p + x]` for `0 ≤ x < p`, `0 ≤ y < q`;
/// every other cell is read modulo `(p, q)`. Equality compares the plane
/// configurations, so a `2×2` constant torus equals the `1×1` one.
#[derive(Debug, Clone)]
pub struct TorusConfig2D {
    alphabet: Alphabet,
    p: usize,
    q: usize,
    cells: Vec<Symbol>,
}

impl TorusConfig2D {
    pub fn new(alphabet: Alphabet, p: usize, q: usize, cells: Vec<Symbol>) -> Result<Self> {
        if p == 0 || q == 0 || cells.len() != p * q {
            return Err(CaError::InvalidArgument(format!(
                "torus {p}x{q} cannot hold {} cells",
                cells.len()
            )));
        }
        for &s in &cells {
            alphabet.check(s)?;
        }
        Ok(TorusConfig2D {
            alphabet,
            p,
            q,
            cells,
        })
    }

    pub fn constant(alphabet: Alphabet, p: usize, q: usize, s: Symbol) -> Result<Self> {
        Self::new(alphabet, p, q, vec![s; p * q])
    }

    pub fn from_fn(
        alphabet: Alphabet,
        p: usize,
        q: usize,
        mut f: impl FnMut(Cell) -> Symbol,
    ) -> Result<Self> {
        let mut cells = Vec::with_capacity(p * q);
        for y in 0..q as i64 {
            for x in 0..p as i64 {
                cells.push(f((x, y)));
            }
        }
        Self::new(alphabet, p, q, cells)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, (x, y): Cell) -> Symbol {
        let x = x.rem_euclid(self.p as i64) as usize;
        let y = y.rem_euclid(self.q as i64) as usize;
        self.cells[y * self.p + x]
    }

    /// `σ^v(c)(x) = c(x + v)`.
    pub fn shift(&self, v: Cell) -> Self {
        let (p, q) = (self.p as i64, self.q as i64);
        let mut cells = Vec::with_capacity(self.cells.len());
        for y in 0..q {
            for x in 0..p {
                cells.push(self.get((x + v.0, y + v.1)));
            }
        }
        TorusConfig2D { cells, ..*self }
    }

    pub fn is_invariant(&self, v: Cell) -> bool {
        (0..self.q as i64)
            .all(|y| (0..self.p as i64).all(|x| self.get((x, y)) == self.get((x + v.0, y + v.1))))
    }

    /// The same plane configuration on a `p×q` torus, if it is
    /// `(p, q)`-periodic.
    pub fn with_dims(&self, p: usize, q: usize) -> Result<Self> {
        let out = Self::from_fn(self.alphabet, p, q, |z| self.get(z))?;
        if out != *self {
            return Err(CaError::InvalidArgument(format!(
                "configuration with periods {:?} is not {p}x{q}-periodic",
                self.dims()
            )));
        }
        Ok(out)
    }

    /// Smallest rectangular periods.
    pub fn minimal(&self) -> Self {
        let p = (1..=self.p)
            .find(|&d| self.p % d == 0 && self.is_invariant((d as i64, 0)))
            .unwrap_or(self.p);
        let q = (1..=self.q)
            .find(|&d| self.q % d == 0 && self.is_invariant((0, d as i64)))
            .unwrap_or(self.q);
        Self::from_fn(self.alphabet, p, q, |z| self.get(z)).expect("sub-period is valid")
    }
}

impl PartialEq for TorusConfig2D {
    fn eq(&self, other: &Self) -> bool {
        if self.alphabet != other.alphabet {
            return false;
        }
        let p = lcm(self.p as i64, other.p as i64);
        let q = lcm(self.q as i64, other.q as i64);
        (0..q).all(|y| (0..p).all(|x| self.get((x, y)) == other.get((x, y))))
    }
}

impl Eq for TorusConfig2D {}

/// A spatially periodic configuration of `A^Z` (or `B^Z` for a product
/// alphabet), stored as one period starting at cell 0. Equality compares
/// the bi-infinite sequences.
#[derive(Debug, Clone)]
pub struct PeriodicConfig1D {
    alphabet: Alphabet,
    cells: Vec<Symbol>,
}

impl PeriodicConfig1D {
    pub fn new(alphabet: Alphabet, cells: Vec<Symbol>) -> Result<Self> {
        if cells.is_empty() {
            return Err(CaError::InvalidArgument("empty period".into()));
        }
        for &s in &cells {
            alphabet.check(s)?;
        }
        Ok(PeriodicConfig1D { alphabet, cells })
    }

    pub fn constant(alphabet: Alphabet, s: Symbol) -> Result<Self> {
        Self::new(alphabet, vec![s])
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn period(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, i: i64) -> Symbol {
        self.cells[i.rem_euclid(self.cells.len() as i64) as usize]
    }

    pub fn minimal_period(&self) -> usize {
        let n = self.cells.len();
        (1..=n)
            .find(|&d| n % d == 0 && (0..n).all(|i| self.cells[i] == self.cells[(i + d) % n]))
            .unwrap_or(n)
    }

    pub fn minimal(&self) -> Self {
        let d = self.minimal_period();
        PeriodicConfig1D {
            alphabet: self.alphabet,
            cells: self.cells[..d].to_vec(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        let n = self.cells.len() as i64;
        PeriodicConfig1D {
            alphabet: self.alphabet,
            cells: (0..n).map(|i| self.get(i + k)).collect(),
        }
    }
}

impl PartialEq for PeriodicConfig1D {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && (0..lcm(self.period() as i64, other.period() as i64)).all(|i| self.get(i) == other.get(i))
    }
}

impl Eq for PeriodicConfig1D {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn torus(p: usize, q: usize, cells: &[u32]) -> TorusConfig2D {
        TorusConfig2D::new(Alphabet::BINARY, p, q, cells.to_vec()).unwrap()
    }

    #[test]
    fn shift_examples() {
        let mut cells = vec![0; 9];
        cells[0] = 1;
        let c = torus(3, 3, &cells);
        assert_eq!(c.shift((0, 0)), c);
        assert_eq!(c.shift((3, 3)), c);
        let s = c.shift((1, 0));
        assert_eq!(s.get((2, 0)), 1);
        assert_eq!(s.cells().iter().sum::<u32>(), 1);
    }

    #[test]
    fn semantic_equality_across_periods() {
        let a = torus(1, 1, &[1]);
        let b = torus(2, 3, &[1; 6]);
        assert_eq!(a, b);
        let stripes = torus(2, 1, &[0, 1]);
        assert_eq!(stripes.with_dims(4, 2).unwrap(), stripes);
        assert!(stripes.with_dims(3, 1).is_err());
        assert_eq!(torus(4, 2, &[0, 1, 0, 1, 0, 1, 0, 1]).minimal().dims(), (2, 1));
    }

    #[test]
    fn periodic_1d_equality() {
        let a = PeriodicConfig1D::new(Alphabet::BINARY, vec![0, 1]).unwrap();
        let b = PeriodicConfig1D::new(Alphabet::BINARY, vec![0, 1, 0, 1, 0, 1]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, a.shift(1));
        assert_eq!(b.minimal().period(), 2);
    }

    #[test]
    fn symbols_are_range_checked() {
        assert!(TorusConfig2D::new(Alphabet::BINARY, 1, 1, vec![2]).is_err());
        assert!(PeriodicConfig1D::new(Alphabet::BINARY, vec![]).is_err());
    }

    proptest! {
        #[test]
        fn shifts_compose(
            cells in proptest::collection::vec(0u32..2, 12),
            v in (-5i64..5, -5i64..5),
            w in (-5i64..5, -5i64..5),
        ) {
            let c = torus(4, 3, &cells);
            prop_assert_eq!(c.shift(v).shift(w), c.shift((v.0 + w.0, v.1 + w.1)));
            prop_assert_eq!(c.shift(v).get((0, 0)), c.get(v));
        }
    }
}
