use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ca::{decode, LocalRule2D, RuleTable1D, RuleTable2D};
use crate::{CaError, Limits, Result, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    /// Every initial block.
    Exact,
    /// `n` random initial blocks; the count is a lower bound.
    Sample { n: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRow {
    pub w: usize,
    pub t: usize,
    pub count: u64,
    /// `log₂ count / t`.
    pub ratio: f64,
    pub lower_bound: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTable {
    pub mode: CountMode,
    pub rows: Vec<EntropyRow>,
    /// Whether, at every `t` with at least two widths, the ratio strictly
    /// increases with `w`. `None` when no such `t` exists.
    pub growth_in_w: Option<bool>,
}

/// Number of distinct `w × w × t` space-time boxes of `rule`.
///
/// A box at time steps `0..t` over a `w × w` window depends exactly on an
/// initial block of side `w + 2r(t−1)`, where `r` is the reach of the
/// neighborhood.
pub fn count_rectangles(rule: &RuleTable2D, w: usize, t: usize, mode: CountMode, limits: &Limits) -> Result<EntropyRow> {
    check_params(w, t)?;
    let r = rule.reach() as usize;
    let side = w + 2 * r * (t - 1);
    let a = rule.alphabet().size() as usize;
    let offsets: Vec<(usize, usize)> = rule
        .offsets()
        .iter()
        .map(|&(dx, dy)| ((dx + r as i64) as usize, (dy + r as i64) as usize))
        .collect();
    let evolve = |scratch: &mut Scratch, key: &mut Packer| {
        let Scratch { cur, next } = scratch;
        let mut s = side;
        for step in 0..t {
            let m = (s - w) / 2;
            for y in m..m + w {
                for x in m..m + w {
                    key.push(cur[y * s + x]);
                }
            }
            if step + 1 == t {
                break;
            }
            let ns = s - 2 * r;
            next.clear();
            for y in 0..ns {
                for x in 0..ns {
                    let idx = offsets
                        .iter()
                        .fold(0, |acc, &(ox, oy)| acc * a + cur[(y + oy) * s + x + ox] as usize);
                    next.push(rule.eval_index(idx));
                }
            }
            std::mem::swap(cur, next);
            s = ns;
        }
    };
    count(rule.alphabet().size(), side * side, w * w * t, w, t, mode, limits, evolve)
}

/// One-dimensional counterpart of [`count_rectangles`]: distinct `w × t`
/// space-time rectangles.
pub fn count_rectangles_1d(
    rule: &RuleTable1D,
    w: usize,
    t: usize,
    mode: CountMode,
    limits: &Limits,
) -> Result<EntropyRow> {
    check_params(w, t)?;
    let r = rule.radius() as usize;
    let len = w + 2 * r * (t - 1);
    let evolve = |scratch: &mut Scratch, key: &mut Packer| {
        let Scratch { cur, next } = scratch;
        for step in 0..t {
            let m = (cur.len() - w) / 2;
            for &s in &cur[m..m + w] {
                key.push(s);
            }
            if step + 1 == t {
                break;
            }
            next.clear();
            next.extend(cur.windows(rule.width()).map(|win| rule.eval(win)));
            std::mem::swap(cur, next);
        }
    };
    count(rule.alphabet().size(), len, w * t, w, t, mode, limits, evolve)
}

pub fn entropy_growth_report(
    rule: &RuleTable2D,
    w_list: &[usize],
    t_list: &[usize],
    mode: CountMode,
    limits: &Limits,
) -> Result<EntropyTable> {
    let mut rows = Vec::new();
    for &t in t_list {
        for &w in w_list {
            rows.push(count_rectangles(rule, w, t, mode, limits)?);
        }
    }
    let mut growth_in_w = None;
    for &t in t_list {
        let mut at_t: Vec<&EntropyRow> = rows.iter().filter(|r| r.t == t).collect();
        at_t.sort_by_key(|r| r.w);
        at_t.dedup_by_key(|r| r.w);
        if at_t.len() >= 2 {
            let strict = at_t.windows(2).all(|p| p[1].ratio > p[0].ratio);
            growth_in_w = Some(growth_in_w.unwrap_or(true) && strict);
        }
    }
    Ok(EntropyTable {
        mode,
        rows,
        growth_in_w,
    })
}

fn check_params(w: usize, t: usize) -> Result<()> {
    if w == 0 || t == 0 {
        return Err(CaError::InvalidArgument(format!("w and t must be positive (got w={w}, t={t})")));
    }
    Ok(())
}

struct Scratch {
    cur: Vec<Symbol>,
    next: Vec<Symbol>,
}

impl Scratch {
    fn new(cells: usize) -> Self {
        Scratch {
            cur: vec![0; cells],
            next: Vec::with_capacity(cells),
        }
    }

    fn load(&mut self, block: &[Symbol]) {
        self.cur.clear();
        self.cur.extend_from_slice(block);
    }
}

/// Packs a space-time box into a `u128`.
struct Packer {
    bits: u32,
    key: u128,
}

impl Packer {
    fn push(&mut self, s: Symbol) {
        self.key = (self.key << self.bits) | s as u128;
    }
}

#[allow(clippy::too_many_arguments)]
fn count(
    a: u32,
    block_cells: usize,
    box_cells: usize,
    w: usize,
    t: usize,
    mode: CountMode,
    limits: &Limits,
    evolve: impl Fn(&mut Scratch, &mut Packer) + Sync,
) -> Result<EntropyRow> {
    let bits = 32 - (a.max(2) - 1).leading_zeros();
    if box_cells as u64 * bits as u64 > 128 {
        return Err(CaError::cap("space-time box key bits", box_cells as u128 * bits as u128, 128));
    }
    let key_of = |scratch: &mut Scratch| {
        let mut p = Packer { bits, key: 0 };
        evolve(scratch, &mut p);
        p.key
    };
    let (keys, lower_bound) = match mode {
        CountMode::Exact => {
            // Binary budget: at most 2^max_entropy_cells initial blocks.
            let budget = 1u128 << limits.max_entropy_cells.min(100);
            let total = (a as u128).checked_pow(block_cells as u32).unwrap_or(u128::MAX);
            if total > budget {
                return Err(CaError::cap("entropy initial blocks", total, budget));
            }
            let keys = (0..total as u64)
                .into_par_iter()
                .fold(
                    || (HashSet::new(), vec![0; block_cells], Scratch::new(block_cells)),
                    |(mut set, mut block, mut scratch), code| {
                        decode(code as usize, a, &mut block);
                        scratch.load(&block);
                        set.insert(key_of(&mut scratch));
                        (set, block, scratch)
                    },
                )
                .map(|(set, _, _)| set)
                .reduce(HashSet::new, merge);
            (keys, false)
        }
        CountMode::Sample { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let blocks: Vec<Vec<Symbol>> = (0..n)
                .map(|_| (0..block_cells).map(|_| rng.gen_range(0..a)).collect())
                .collect();
            let keys = blocks
                .par_iter()
                .fold(
                    || (HashSet::new(), Scratch::new(block_cells)),
                    |(mut set, mut scratch), b| {
                        scratch.load(b);
                        set.insert(key_of(&mut scratch));
                        (set, scratch)
                    },
                )
                .map(|(set, _)| set)
                .reduce(HashSet::new, merge);
            (keys, true)
        }
    };
    let count = keys.len() as u64;
    Ok(EntropyRow {
        w,
        t,
        count,
        ratio: (count as f64).log2() / t as f64,
        lower_bound,
    })
}

fn merge(x: HashSet<u128>, y: HashSet<u128>) -> HashSet<u128> {
    let (mut big, small) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    big.extend(small);
    big
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::{builtin, Alphabet};

    fn exact(rule: &RuleTable2D, w: usize, t: usize) -> u64 {
        count_rectangles(rule, w, t, CountMode::Exact, &Limits::default()).unwrap().count
    }

    #[test]
    fn identity_counts() {
        let id = builtin::identity(Alphabet::BINARY, 1);
        for (w, t) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)] {
            assert_eq!(exact(&id, w, t), 1 << (w * w));
        }
    }

    #[test]
    fn xor_corners_counts() {
        let xc = builtin::xor_corners(Alphabet::BINARY);
        assert_eq!(exact(&xc, 1, 2), 4);
        let rep = entropy_growth_report(&xc, &[1, 2], &[2], CountMode::Exact, &Limits::default()).unwrap();
        assert_eq!(rep.growth_in_w, Some(true));
        assert!(rep.rows[1].ratio > rep.rows[0].ratio);
    }

    #[test]
    fn constant_zero_counts() {
        let zero = builtin::constant(Alphabet::BINARY, 1, 0).unwrap();
        for (w, t) in [(1, 1), (1, 2), (2, 2)] {
            assert_eq!(exact(&zero, w, t), 1 << (w * w));
        }
    }

    #[test]
    fn one_dimensional_xor() {
        let lim = Limits::default();
        // x₋₁ + x₁: both flanking cells of the width-4 block are free.
        let xor = RuleTable1D::xor(Alphabet::BINARY);
        assert_eq!(count_rectangles_1d(&xor, 2, 2, CountMode::Exact, &lim).unwrap().count, 16);
        // x₋₁ + x₀ (rule 60): only the left flank matters.
        let r60 = RuleTable1D::elementary(60);
        assert_eq!(count_rectangles_1d(&r60, 2, 2, CountMode::Exact, &lim).unwrap().count, 8);
    }

    #[test]
    fn exact_cap_enforced() {
        let xc = builtin::xor_corners(Alphabet::BINARY);
        let err = count_rectangles(&xc, 2, 3, CountMode::Exact, &Limits::default()).unwrap_err();
        assert!(matches!(err, CaError::CapExceeded { .. }));
    }

    #[test]
    fn sample_bounded_by_exact_and_monotone() {
        let lim = Limits::default();
        let xc = builtin::xor_corners(Alphabet::BINARY);
        let and = builtin::and_min(Alphabet::BINARY);
        for rule in [&xc, &and] {
            let mut prev_w = 0;
            for w in 1..=3 {
                let e = exact(rule, w, 1);
                assert!(e >= prev_w);
                prev_w = e;
            }
            let e12 = exact(rule, 1, 2);
            assert!(e12 >= exact(rule, 1, 1));
            assert!(exact(rule, 2, 2) >= e12);
            let s = count_rectangles(rule, 1, 2, CountMode::Sample { n: 200, seed: 3 }, &lim).unwrap();
            assert!(s.lower_bound && s.count <= e12);
        }
    }
}
