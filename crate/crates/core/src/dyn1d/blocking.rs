use std::collections::{BTreeSet, HashSet};

use crate::ca::RuleTable1D;
use crate::{Limits, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockingStatus {
    /// Confirmed by the subset fixpoint: the window never depends on the
    /// environment.
    Blocking,
    /// Two extensions of the word disagree on the window within this many
    /// steps.
    NotBlockingWithin(u32),
    /// Neither confirmed nor refuted up to this horizon.
    UnknownAt(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockingReport {
    pub word: Vec<Symbol>,
    pub s: usize,
    pub offset: usize,
    pub status: BlockingStatus,
}

/// Budget of extensions enumerated when refuting one candidate.
const REFUTATION_BUDGET: u64 = 1 << 20;

/// Classifies `word` as `s`-blocking at `offset`.
///
/// Confirmation tracks the set of possible contents of the window
/// `[offset, offset + s)`: the first step uses the cells of `word` and lets
/// every other cell vary; later steps let the `r` cells on each side of the
/// window vary freely. If the set stays a singleton until it repeats, the
/// word is blocking. Refutation enumerates every extension of `word` over
/// the dependency cone of the window up to `horizon` steps.
pub fn check_blocking(
    rule: &RuleTable1D,
    word: &[Symbol],
    s: usize,
    offset: usize,
    horizon: u32,
    limits: &Limits,
) -> BlockingStatus {
    assert!(s >= 1 && offset + s <= word.len(), "window must lie inside the word");
    if confirm(rule, word, s, offset) {
        return BlockingStatus::Blocking;
    }
    let budget = limits.max_cells.min(REFUTATION_BUDGET);
    match refute(rule, word, s, offset, horizon, budget) {
        Some(true) => BlockingStatus::NotBlockingWithin(horizon),
        _ => BlockingStatus::UnknownAt(horizon),
    }
}

fn confirm(rule: &RuleTable1D, word: &[Symbol], s: usize, offset: usize) -> bool {
    let a = rule.alphabet().size();
    let r = rule.radius() as usize;
    let k = word.len() as i64;
    // First step: cells of `word` are fixed, the rest free.
    let lo = offset as i64 - r as i64;
    let hi = (offset + s + r) as i64;
    let free: Vec<i64> = (lo..hi).filter(|&i| i < 0 || i >= k).collect();
    let mut first = BTreeSet::new();
    let mut row = vec![0; (hi - lo) as usize];
    for code in 0..(a as usize).pow(free.len() as u32) {
        let mut c = code;
        for i in lo..hi {
            row[(i - lo) as usize] = if i < 0 || i >= k {
                let v = (c % a as usize) as Symbol;
                c /= a as usize;
                v
            } else {
                word[i as usize]
            };
        }
        first.insert(step(rule, &row));
        if first.len() > 1 {
            return false;
        }
    }
    let mut current: Vec<Symbol> = first.into_iter().next().expect("at least one extension");
    let mut seen = HashSet::new();
    let flank_codes = (a as usize).pow(2 * r as u32);
    let mut padded = vec![0; s + 2 * r];
    loop {
        if !seen.insert(current.clone()) {
            return true;
        }
        let mut next: Option<Vec<Symbol>> = None;
        for code in 0..flank_codes {
            let mut c = code;
            for (i, slot) in padded.iter_mut().enumerate() {
                *slot = if i < r || i >= r + s {
                    let v = (c % a as usize) as Symbol;
                    c /= a as usize;
                    v
                } else {
                    current[i - r]
                };
            }
            let img = step(rule, &padded);
            match &next {
                None => next = Some(img),
                Some(n) if *n != img => return false,
                _ => {}
            }
        }
        current = next.expect("at least one flank");
    }
}

/// One synchronous step on a finite row; the result is `2r` shorter.
fn step(rule: &RuleTable1D, row: &[Symbol]) -> Vec<Symbol> {
    let w = rule.width();
    let a = rule.alphabet().size() as usize;
    row.windows(w)
        .map(|n| rule.eval_index(n.iter().fold(0, |acc, &x| acc * a + x as usize)))
        .collect()
}

/// `Some(true)` if two extensions disagree on the window within `horizon`
/// steps, `Some(false)` if all extensions agree, `None` if over budget.
fn refute(rule: &RuleTable1D, word: &[Symbol], s: usize, offset: usize, horizon: u32, budget: u64) -> Option<bool> {
    let a = rule.alphabet().size() as u64;
    let r = rule.radius() as i64;
    let h = horizon as i64;
    let k = word.len() as i64;
    let lo = offset as i64 - h * r;
    let hi = (offset + s) as i64 + h * r;
    let free: Vec<usize> = (lo..hi).filter(|&i| i < 0 || i >= k).map(|i| (i - lo) as usize).collect();
    let total = a.checked_pow(free.len() as u32);
    let mut row: Vec<Symbol> = (lo..hi)
        .map(|i| if i < 0 || i >= k { 0 } else { word[i as usize] })
        .collect();
    let trajectory = |row: &[Symbol]| {
        let mut out = Vec::with_capacity(horizon as usize * s);
        let mut cur = row.to_vec();
        for _ in 0..horizon {
            cur = step(rule, &cur);
            let m = (cur.len() - s) / 2;
            out.extend_from_slice(&cur[m..m + s]);
        }
        out
    };
    let base = trajectory(&row);
    // Odometer over the free cells, last cell fastest: distant cells change
    // first, which is where sensitive rules disagree soonest.
    let mut examined = 1u64;
    loop {
        let mut i = free.len();
        loop {
            if i == 0 {
                return Some(false);
            }
            i -= 1;
            let slot = free[i];
            row[slot] += 1;
            if row[slot] as u64 == a {
                row[slot] = 0;
            } else {
                break;
            }
        }
        examined += 1;
        if trajectory(&row) != base {
            return Some(true);
        }
        if examined >= budget && total.is_none_or(|t| t > examined) {
            return None;
        }
    }
}

/// Searches words of length `s..=max_len` (shortest first, lexicographic)
/// and every offset. Returns the first confirmed blocking word; failing
/// that, the first undecided candidate; `None` when every candidate was
/// refuted.
pub fn find_blocking_word(
    rule: &RuleTable1D,
    s: usize,
    max_len: usize,
    horizon: u32,
    limits: &Limits,
) -> Option<BlockingReport> {
    assert!(s >= 1 && s <= max_len, "need 1 ≤ s ≤ max_len");
    let a = rule.alphabet().size();
    let mut undecided = None;
    for len in s..=max_len {
        let Some(count) = (a as u64).checked_pow(len as u32).filter(|&c| c <= limits.max_cells) else {
            break;
        };
        let mut word = vec![0; len];
        for code in 0..count as usize {
            crate::ca::decode(code, a, &mut word);
            for offset in 0..=len - s {
                let status = check_blocking(rule, &word, s, offset, horizon, limits);
                let report = BlockingReport {
                    word: word.clone(),
                    s,
                    offset,
                    status,
                };
                match status {
                    BlockingStatus::Blocking => return Some(report),
                    BlockingStatus::UnknownAt(_) if undecided.is_none() => undecided = Some(report),
                    _ => {}
                }
            }
        }
    }
    undecided
}
