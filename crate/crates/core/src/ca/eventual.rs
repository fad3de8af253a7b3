use super::{Alphabet, RuleTable1D};
use crate::lattice::lcm;
use crate::{CaError, Result, Symbol};

/// A bi-infinite sequence `…LLL · middle · RRR…`.
///
/// `middle` occupies `[start, start + |middle|)`. Cells left of `start`
/// repeat `left` so that `left` itself sits at `[start − |left|, start)`;
/// cells from `start + |middle|` on repeat `right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodic {
    pub left: Vec<Symbol>,
    pub middle: Vec<Symbol>,
    pub right: Vec<Symbol>,
    pub start: i64,
}

impl EventuallyPeriodic {
    pub fn new(left: Vec<Symbol>, middle: Vec<Symbol>, right: Vec<Symbol>, start: i64) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(CaError::InvalidArgument("periodic tails must be non-empty".into()));
        }
        Ok(EventuallyPeriodic {
            left,
            middle,
            right,
            start,
        })
    }

    pub fn end(&self) -> i64 {
        self.start + self.middle.len() as i64
    }

    #[inline]
    pub fn at(&self, i: i64) -> Symbol {
        if i < self.start {
            self.left[(i - self.start).rem_euclid(self.left.len() as i64) as usize]
        } else if i < self.end() {
            self.middle[(i - self.start) as usize]
        } else {
            self.right[(i - self.end()).rem_euclid(self.right.len() as i64) as usize]
        }
    }

    pub fn check(&self, alphabet: Alphabet) -> Result<()> {
        self.left
            .iter()
            .chain(&self.middle)
            .chain(&self.right)
            .try_for_each(|&s| alphabet.check(s))
    }

    /// Window outside which both sequences are in their periodic tails, padded
    /// by one common period on each side.
    fn comparison_window(&self, other: &Self) -> (i64, i64) {
        let lo = self.start.min(other.start) - lcm(self.left.len() as i64, other.left.len() as i64);
        let hi = self.end().max(other.end()) + lcm(self.right.len() as i64, other.right.len() as i64);
        (lo, hi)
    }

    /// Exact equality of the bi-infinite sequences.
    pub fn same_sequence(&self, other: &Self) -> bool {
        let (lo, hi) = self.comparison_window(other);
        (lo..hi).all(|i| self.at(i) == other.at(i))
    }

    /// `Some(n)` if the sequences agree on `(−∞, n]` for the largest such `n`
    /// (or `i64::MAX` when they are equal); `None` if they differ arbitrarily
    /// far to the left.
    pub fn agree_left_up_to(&self, other: &Self) -> Option<i64> {
        let (lo, hi) = self.comparison_window(other);
        let first = (lo..hi).find(|&i| self.at(i) != other.at(i));
        match first {
            None => Some(i64::MAX),
            Some(i) if i >= self.start.min(other.start) => Some(i - 1),
            Some(_) => None,
        }
    }

    /// Mirror of [`Self::agree_left_up_to`]: agreement on `[n, ∞)`.
    pub fn agree_right_from(&self, other: &Self) -> Option<i64> {
        let (lo, hi) = self.comparison_window(other);
        let last = (lo..hi).rev().find(|&i| self.at(i) != other.at(i));
        match last {
            None => Some(i64::MIN),
            Some(i) if i < self.end().max(other.end()) => Some(i + 1),
            Some(_) => None,
        }
    }

    /// The image under a 1D CA, again eventually periodic.
    pub fn image(&self, rule: &RuleTable1D) -> Self {
        let r = rule.radius() as i64;
        let a = rule.alphabet().size() as usize;
        let f = |i: i64| {
            let idx = (i - r..=i + r).fold(0usize, |acc, j| acc * a + self.at(j) as usize);
            rule.eval_index(idx)
        };
        let start = self.start - r;
        let end = self.end() + r;
        let ll = self.left.len() as i64;
        let rl = self.right.len() as i64;
        EventuallyPeriodic {
            left: (start - ll..start).map(f).collect(),
            middle: (start..end).map(f).collect(),
            right: (end..end + rl).map(f).collect(),
            start,
        }
    }

    /// The mirror sequence `i ↦ self(−1 − i)`.
    pub fn reversed(&self) -> Self {
        let mut left = self.right.clone();
        left.reverse();
        let mut middle = self.middle.clone();
        middle.reverse();
        let mut right = self.left.clone();
        right.reverse();
        EventuallyPeriodic {
            left,
            middle,
            right,
            start: -self.end(),
        }
    }
}
