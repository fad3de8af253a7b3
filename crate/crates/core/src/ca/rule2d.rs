use super::{table_len, Alphabet, TorusConfig2D};
use crate::{CaError, Cell, Limits, Result, Symbol};

/// Anything that computes a new cell state from a finite neighborhood.
///
/// `eval` receives the states at [`LocalRule2D::offsets`], in that order.
pub trait LocalRule2D: Sync {
    fn alphabet(&self) -> Alphabet;
    fn offsets(&self) -> &[Cell];
    fn eval(&self, neighborhood: &[Symbol]) -> Symbol;

    /// Largest `max(|dx|, |dy|)` over the offsets.
    fn reach(&self) -> i64 {
        self.offsets()
            .iter()
            .map(|&(dx, dy)| dx.abs().max(dy.abs()))
            .max()
            .unwrap_or(0)
    }

    fn apply(&self, c: &TorusConfig2D) -> Result<TorusConfig2D> {
        self.alphabet().expect(c.alphabet())?;
        let (p, q) = c.dims();
        let mut buf = Vec::with_capacity(self.offsets().len());
        let mut out = Vec::with_capacity(p * q);
        for y in 0..q as i64 {
            for x in 0..p as i64 {
                out.push(eval_at(self, (x, y), &|z| c.get(z), &mut buf));
            }
        }
        TorusConfig2D::new(self.alphabet(), p, q, out)
    }
}

/// Evaluates `rule` at `x` reading states through `get`.
pub fn eval_at<R: LocalRule2D + ?Sized>(
    rule: &R,
    x: Cell,
    get: &dyn Fn(Cell) -> Symbol,
    buf: &mut Vec<Symbol>,
) -> Symbol {
    buf.clear();
    buf.extend(rule.offsets().iter().map(|&(dx, dy)| get((x.0 + dx, x.1 + dy))));
    rule.eval(buf)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Neighborhood {
    /// The `(2r+1)²` square.
    Moore { radius: u32 },
    /// The rhombus `|dx|·ey + |dy|·ex ≤ ex·ey` inside `[-ex, ex] × [-ey, ey]`.
    VonNeumann { extent: (u32, u32) },
}

impl Neighborhood {
    /// Offsets in lexicographic `(dx, dy)` order.
    pub fn offsets(self) -> Vec<Cell> {
        match self {
            Neighborhood::Moore { radius } => {
                let r = radius as i64;
                (-r..=r)
                    .flat_map(|dx| (-r..=r).map(move |dy| (dx, dy)))
                    .collect()
            }
            Neighborhood::VonNeumann { extent: (ex, ey) } => {
                let (ex, ey) = (ex as i64, ey as i64);
                (-ex..=ex)
                    .flat_map(|dx| (-ey..=ey).map(move |dy| (dx, dy)))
                    .filter(|&(dx, dy)| dx.abs() * ey + dy.abs() * ex <= ex * ey)
                    .collect()
            }
        }
    }

    pub fn radius(self) -> u32 {
        match self {
            Neighborhood::Moore { radius } => radius,
            Neighborhood::VonNeumann { extent } => extent.0.max(extent.1),
        }
    }
}

/// Read access to a neighborhood by relative offset, used while building
/// tables from closures.
pub struct NeighborView<'a> {
    offsets: &'a [Cell],
    states: &'a [Symbol],
}

impl NeighborView<'_> {
    /// State at `(dx, dy)`; offsets outside the neighborhood panic.
    pub fn at(&self, dx: i64, dy: i64) -> Symbol {
        let i = self
            .offsets
            .binary_search(&(dx, dy))
            .unwrap_or_else(|_| panic!("offset ({dx},{dy}) outside neighborhood"));
        self.states[i]
    }

    pub fn states(&self) -> &[Symbol] {
        self.states
    }
}

/// A 2D local rule materialized as a table over its neighborhood.
///
/// The table index reads the neighborhood states in offset order, first
/// offset most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleTable2D {
    alphabet: Alphabet,
    neighborhood: Neighborhood,
    offsets: Vec<Cell>,
    table: Vec<Symbol>,
}

impl RuleTable2D {
    pub fn new(alphabet: Alphabet, neighborhood: Neighborhood, table: Vec<Symbol>) -> Result<Self> {
        let offsets = neighborhood.offsets();
        let len = table_len("2D rule table", alphabet.size(), offsets.len() as u32, u64::MAX)?;
        if table.len() != len {
            return Err(CaError::InvalidArgument(format!(
                "2D table needs {len} entries, got {}",
                table.len()
            )));
        }
        for &s in &table {
            alphabet.check(s)?;
        }
        Ok(RuleTable2D {
            alphabet,
            neighborhood,
            offsets,
            table,
        })
    }

    pub fn from_fn(
        alphabet: Alphabet,
        neighborhood: Neighborhood,
        limits: &Limits,
        mut f: impl FnMut(&NeighborView) -> Symbol,
    ) -> Result<Self> {
        let offsets = neighborhood.offsets();
        let len = table_len(
            "2D rule table",
            alphabet.size(),
            offsets.len() as u32,
            limits.max_table,
        )?;
        let mut states = vec![0; offsets.len()];
        let mut table = Vec::with_capacity(len);
        for idx in 0..len {
            super::rule1d::decode(idx, alphabet.size(), &mut states);
            let s = f(&NeighborView {
                offsets: &offsets,
                states: &states,
            });
            alphabet.check(s)?;
            table.push(s);
        }
        Ok(RuleTable2D {
            alphabet,
            neighborhood,
            offsets,
            table,
        })
    }

    pub fn moore(alphabet: Alphabet, radius: u32, f: impl FnMut(&NeighborView) -> Symbol) -> Result<Self> {
        Self::from_fn(alphabet, Neighborhood::Moore { radius }, &Limits::default(), f)
    }

    pub fn neighborhood(&self) -> Neighborhood {
        self.neighborhood
    }

    pub fn radius(&self) -> u32 {
        self.neighborhood.radius()
    }

    pub fn table(&self) -> &[Symbol] {
        &self.table
    }

    pub fn offset_index(&self, offset: Cell) -> Option<usize> {
        self.offsets.binary_search(&offset).ok()
    }

    #[inline]
    pub fn eval_index(&self, idx: usize) -> Symbol {
        self.table[idx]
    }
}

impl LocalRule2D for RuleTable2D {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn offsets(&self) -> &[Cell] {
        &self.offsets
    }

    fn eval(&self, neighborhood: &[Symbol]) -> Symbol {
        let a = self.alphabet.size() as usize;
        let idx = neighborhood.iter().fold(0usize, |acc, &s| acc * a + s as usize);
        self.table[idx]
    }
}
