//! Named 2D rules, expanded to full tables.

use super::{Alphabet, Neighborhood, RuleTable2D};
use crate::{Cell, Limits, Result, Symbol};

pub fn identity(alphabet: Alphabet, radius: u32) -> RuleTable2D {
    RuleTable2D::moore(alphabet, radius, |n| n.at(0, 0)).expect("identity fits default limits")
}

pub fn constant(alphabet: Alphabet, radius: u32, s: Symbol) -> Result<RuleTable2D> {
    alphabet.check(s)?;
    RuleTable2D::moore(alphabet, radius, |_| s)
}

/// `F(c)(x) = c(x + (1,1)) + c(x − (1,1)) mod |A|`.
pub fn xor_corners(alphabet: Alphabet) -> RuleTable2D {
    let a = alphabet.size();
    RuleTable2D::moore(alphabet, 1, |n| (n.at(1, 1) + n.at(-1, -1)) % a)
        .expect("radius-1 table fits default limits")
}

/// Minimum over the radius-1 Moore neighborhood (AND for binary).
pub fn and_min(alphabet: Alphabet) -> RuleTable2D {
    RuleTable2D::moore(alphabet, 1, |n| *n.states().iter().min().unwrap())
        .expect("radius-1 table fits default limits")
}

/// `σ^v`: `F(c)(x) = c(x + v)`, on the smallest Moore radius containing `v`.
pub fn shift(alphabet: Alphabet, v: Cell, limits: &Limits) -> Result<RuleTable2D> {
    let radius = v.0.unsigned_abs().max(v.1.unsigned_abs()) as u32;
    RuleTable2D::from_fn(alphabet, Neighborhood::Moore { radius }, limits, |n| n.at(v.0, v.1))
}
