use super::{table_len, Alphabet, PeriodicConfig1D};
use crate::{CaError, Limits, Result, Symbol};

/// A 1D local rule `f: A^{2r+1} → A` stored as a full table.
///
/// Words are read as base-`|A|` numbers with `x_{-r}` most significant, so
/// elementary rule `n` has `table[4l + 2c + r] = (n >> (4l + 2c + r)) & 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleTable1D {
    alphabet: Alphabet,
    radius: u32,
    table: Vec<Symbol>,
}

impl RuleTable1D {
    pub fn new(alphabet: Alphabet, radius: u32, table: Vec<Symbol>) -> Result<Self> {
        let len = table_len("1D rule table", alphabet.size(), 2 * radius + 1, u64::MAX)?;
        if table.len() != len {
            return Err(CaError::InvalidArgument(format!(
                "1D table needs {len} entries, got {}",
                table.len()
            )));
        }
        for &s in &table {
            alphabet.check(s)?;
        }
        Ok(RuleTable1D {
            alphabet,
            radius,
            table,
        })
    }

    /// Builds the table by evaluating `f` on every word, `x_{-r}` first.
    pub fn from_fn(
        alphabet: Alphabet,
        radius: u32,
        limits: &Limits,
        mut f: impl FnMut(&[Symbol]) -> Symbol,
    ) -> Result<Self> {
        let width = 2 * radius + 1;
        let len = table_len("1D rule table", alphabet.size(), width, limits.max_table)?;
        let a = alphabet.size();
        let mut word = vec![0; width as usize];
        let mut table = Vec::with_capacity(len);
        for idx in 0..len {
            decode(idx, a, &mut word);
            let s = f(&word);
            alphabet.check(s)?;
            table.push(s);
        }
        Ok(RuleTable1D {
            alphabet,
            radius,
            table,
        })
    }

    /// Elementary CA by Wolfram number.
    pub fn elementary(n: u8) -> Self {
        let table = (0..8).map(|i| ((n as u32) >> i) & 1).collect();
        RuleTable1D {
            alphabet: Alphabet::BINARY,
            radius: 1,
            table,
        }
    }

    pub fn identity(alphabet: Alphabet, radius: u32) -> Self {
        Self::from_fn(alphabet, radius, &Limits::default(), |w| w[radius as usize])
            .expect("identity table fits default limits")
    }

    pub fn constant(alphabet: Alphabet, radius: u32, s: Symbol) -> Result<Self> {
        alphabet.check(s)?;
        Self::from_fn(alphabet, radius, &Limits::default(), |_| s)
    }

    /// `f(x₋₁, x₀, x₁) = x₋₁ + x₁ mod |A|`.
    pub fn xor(alphabet: Alphabet) -> Self {
        let a = alphabet.size();
        Self::from_fn(alphabet, 1, &Limits::default(), |w| (w[0] + w[2]) % a)
            .expect("radius-1 table fits default limits")
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn width(&self) -> usize {
        2 * self.radius as usize + 1
    }

    pub fn table(&self) -> &[Symbol] {
        &self.table
    }

    pub fn index_of(&self, word: &[Symbol]) -> usize {
        debug_assert_eq!(word.len(), self.width());
        let a = self.alphabet.size() as usize;
        word.iter().fold(0, |acc, &s| acc * a + s as usize)
    }

    pub fn eval(&self, word: &[Symbol]) -> Symbol {
        self.table[self.index_of(word)]
    }

    #[inline]
    pub fn eval_index(&self, idx: usize) -> Symbol {
        self.table[idx]
    }

    /// `g(x₋ᵣ…xᵣ) = f(xᵣ…x₋ᵣ)`: the same CA seen in a mirror.
    pub fn mirrored(&self) -> Self {
        let a = self.alphabet.size();
        let mut word = vec![0; self.width()];
        let table = (0..self.table.len())
            .map(|idx| {
                decode(idx, a, &mut word);
                word.reverse();
                self.eval(&word)
            })
            .collect();
        RuleTable1D {
            alphabet: self.alphabet,
            radius: self.radius,
            table,
        }
    }

    /// The same rule read with a larger radius (extra cells ignored).
    pub fn widened(&self, radius: u32) -> Result<Self> {
        if radius < self.radius {
            return Err(CaError::InvalidArgument(format!(
                "cannot shrink radius {} to {radius}",
                self.radius
            )));
        }
        let pad = (radius - self.radius) as usize;
        let w = self.width();
        Self::from_fn(self.alphabet, radius, &Limits::default(), |word| {
            self.eval(&word[pad..pad + w])
        })
    }

    pub fn apply(&self, c: &PeriodicConfig1D) -> Result<PeriodicConfig1D> {
        self.alphabet.expect(c.alphabet())?;
        let n = c.period() as i64;
        let cells = c.cells();
        let a = self.alphabet.size() as usize;
        let r = self.radius as i64;
        let out = (0..n)
            .map(|i| {
                let idx = (i - r..=i + r).fold(0usize, |acc, j| {
                    acc * a + cells[j.rem_euclid(n) as usize] as usize
                });
                self.table[idx]
            })
            .collect();
        PeriodicConfig1D::new(self.alphabet, out)
    }
}

/// Writes the base-`a` digits of `idx` into `word`, most significant first.
pub(crate) fn decode(mut idx: usize, a: u32, word: &mut [Symbol]) {
    for slot in word.iter_mut().rev() {
        *slot = (idx % a as usize) as Symbol;
        idx /= a as usize;
    }
}
