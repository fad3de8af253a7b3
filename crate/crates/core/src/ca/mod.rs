//! Exact cellular automata: rule tables, periodic configurations and
//! asymptotic pairs.

pub mod builtin;
mod config;
mod eventual;
mod orbit;
mod pair;
mod rule1d;
mod rule2d;

pub use config::{PeriodicConfig1D, TorusConfig2D};
pub use eventual::EventuallyPeriodic;
pub use orbit::temporal_period;
pub use pair::{evolve_pair, AsymptoticPair2D, HalfPlane, PairTrace, Rect};
pub use rule1d::RuleTable1D;
pub(crate) use rule1d::decode;
pub use rule2d::{eval_at, LocalRule2D, Neighborhood, RuleTable2D};

use crate::{CaError, Limits, Result, Symbol};

/// A finite alphabet `{0, …, size − 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(u32);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    /// Base alphabets are capped by [`Limits::max_alphabet`].
    pub fn new(size: u32, limits: &Limits) -> Result<Self> {
        if size == 0 || size > limits.max_alphabet {
            return Err(CaError::InvalidAlphabet(size as u64));
        }
        Ok(Alphabet(size))
    }

    /// Product alphabets (`A^k`) only need to be non-empty and fit a symbol.
    pub fn product(base: Alphabet, k: u32) -> Result<Self> {
        let size = (base.0 as u64)
            .checked_pow(k)
            .filter(|s| *s >= 1 && *s <= u32::MAX as u64)
            .ok_or(CaError::InvalidAlphabet((base.0 as u64).saturating_pow(k)))?;
        Ok(Alphabet(size as u32))
    }

    pub(crate) fn raw(size: u32) -> Result<Self> {
        if size == 0 {
            return Err(CaError::InvalidAlphabet(0));
        }
        Ok(Alphabet(size))
    }

    pub fn size(self) -> u32 {
        self.0
    }

    pub fn check(self, s: Symbol) -> Result<()> {
        if s < self.0 {
            Ok(())
        } else {
            Err(CaError::SymbolOutOfRange {
                symbol: s,
                size: self.0,
            })
        }
    }

    pub(crate) fn expect(self, other: Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(CaError::AlphabetMismatch {
                expected: self.0,
                found: other.0,
            })
        }
    }
}

/// `base^exp` as a table size, failing when it exceeds `cap`.
pub(crate) fn table_len(what: &'static str, base: u32, exp: u32, cap: u64) -> Result<usize> {
    let len = (base as u128).checked_pow(exp).unwrap_or(u128::MAX);
    if len > cap as u128 {
        return Err(CaError::cap(what, len, cap as u128));
    }
    Ok(len as usize)
}
