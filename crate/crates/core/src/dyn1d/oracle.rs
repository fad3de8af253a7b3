use super::{ClosingWitness, Side};
use crate::ca::{EventuallyPeriodic, RuleTable1D};
use crate::Symbol;

/// Brute-force search for a non-closing witness.
///
/// For `Side::Right` it enumerates pairs `L^∞·h·R^∞`, `L^∞·h'·R'^∞` sharing
/// the left tail `L`, with heads of exactly `head_len` cells and tails of
/// period `1..=period`, and returns the first distinct pair with equal
/// images. Shorter heads are covered because a tail can be unrolled into the
/// head. `Side::Left` searches the mirror image.
pub fn closing_oracle(rule: &RuleTable1D, side: Side, head_len: usize, period: usize) -> Option<ClosingWitness> {
    match side {
        Side::Right => right_oracle(rule, head_len, period),
        Side::Left => right_oracle(&rule.mirrored(), head_len, period).map(|w| ClosingWitness {
            a: w.a.reversed(),
            b: w.b.reversed(),
        }),
    }
}

fn words(a: u32, max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for code in 0..(a as usize).pow(len as u32) {
            let mut w = vec![0; len];
            crate::ca::decode(code, a, &mut w);
            out.push(w);
        }
    }
    out
}

struct Search<'a> {
    rule: &'a RuleTable1D,
    a: u32,
    r: usize,
    head_len: usize,
    tails: Vec<Vec<Symbol>>,
    left: Vec<Symbol>,
    // Left context (`r·2` tail cells) followed by the heads.
    h: Vec<Symbol>,
    g: Vec<Symbol>,
    nbuf: Vec<Symbol>,
}

impl Search<'_> {
    fn image_at(&mut self, which: bool, end: usize) -> Symbol {
        let width = 2 * self.r + 1;
        let src = if which { &self.g } else { &self.h };
        self.nbuf.clear();
        self.nbuf.extend_from_slice(&src[end + 1 - width..=end]);
        self.rule.eval(&self.nbuf)
    }

    fn heads(&mut self, pos: usize) -> Option<ClosingWitness> {
        let ctx = 2 * self.r;
        if pos == self.head_len {
            return self.tails();
        }
        for x in 0..self.a {
            for y in 0..self.a {
                self.h.push(x);
                self.g.push(y);
                let end = ctx + pos;
                if self.image_at(false, end) == self.image_at(true, end) {
                    if let Some(w) = self.heads(pos + 1) {
                        return Some(w);
                    }
                }
                self.h.pop();
                self.g.pop();
            }
        }
        None
    }

    fn tails(&mut self) -> Option<ClosingWitness> {
        let ctx = 2 * self.r;
        let h = self.h[ctx..].to_vec();
        let g = self.g[ctx..].to_vec();
        for rt in &self.tails {
            let a = EventuallyPeriodic::new(self.left.clone(), h.clone(), rt.clone(), 0).ok()?;
            let ia = a.image(self.rule);
            for rt2 in &self.tails {
                let b = EventuallyPeriodic::new(self.left.clone(), g.clone(), rt2.clone(), 0).ok()?;
                if ia.same_sequence(&b.image(self.rule)) && !a.same_sequence(&b) {
                    return Some(ClosingWitness { a, b });
                }
            }
        }
        None
    }
}

fn right_oracle(rule: &RuleTable1D, head_len: usize, period: usize) -> Option<ClosingWitness> {
    let a = rule.alphabet().size();
    let r = rule.radius() as usize;
    let tails = words(a, period);
    for left in &tails {
        let ctx: Vec<Symbol> = (0..2 * r)
            .map(|i| left[(i as i64 - 2 * r as i64).rem_euclid(left.len() as i64) as usize])
            .collect();
        let mut s = Search {
            rule,
            a,
            r,
            head_len,
            tails: tails.clone(),
            left: left.clone(),
            h: ctx.clone(),
            g: ctx,
            nbuf: Vec::with_capacity(2 * r + 1),
        };
        if let Some(w) = s.heads(0) {
            return Some(w);
        }
    }
    None
}
