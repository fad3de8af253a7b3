use std::cmp::Ordering;

use crate::{CaError, Cell, Result};

/// Cells met by the closed segment from `(0,0)` to `segment`, where cell
/// `(i, j)` is the open unit square centered at `(i, j)`.
///
/// A segment through a square corner meets only the two squares it crosses
/// diagonally; [`Rasterization::upper`] and [`Rasterization::lower`] add the
/// upper (resp. lower) of the two corner-sharing squares so that both are
/// edge-connected paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rasterization {
    pub segment: Cell,
    /// In order of entry along the segment.
    pub d_cells: Vec<Cell>,
    pub upper: Vec<Cell>,
    pub lower: Vec<Cell>,
}

/// A rational `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy)]
struct Q(i128, i128);

impl Q {
    fn new(num: i128, den: i128) -> Q {
        if den < 0 {
            Q(-num, -den)
        } else {
            Q(num, den)
        }
    }

    fn cmp(self, o: Q) -> Ordering {
        (self.0 * o.1).cmp(&(o.0 * self.1))
    }
}

/// Open interval of `t` where `t·a` lies strictly within `1/2` of `i`.
fn interval(i: i64, a: i64) -> Option<(Q, Q)> {
    let (i, a) = (i as i128, a as i128);
    match a.cmp(&0) {
        Ordering::Equal => None,
        _ => {
            let lo = Q::new(2 * i - 1, 2 * a);
            let hi = Q::new(2 * i + 1, 2 * a);
            if a > 0 {
                Some((lo, hi))
            } else {
                Some((hi, lo))
            }
        }
    }
}

/// Entry parameter of the segment into cell `(i, j)`, if it meets it.
fn entry(v: Cell, (i, j): Cell) -> Option<Q> {
    let mut lo = Q(-1, 1);
    let mut hi = Q(2, 1);
    for (k, a) in [(i, v.0), (j, v.1)] {
        match interval(k, a) {
            None if k != 0 => return None,
            None => {}
            Some((l, h)) => {
                if l.cmp(lo) == Ordering::Greater {
                    lo = l;
                }
                if h.cmp(hi) == Ordering::Less {
                    hi = h;
                }
            }
        }
    }
    let ok = lo.cmp(hi) == Ordering::Less && lo.cmp(Q(1, 1)) == Ordering::Less && hi.cmp(Q(0, 1)) == Ordering::Greater;
    ok.then(|| if lo.cmp(Q(0, 1)) == Ordering::Less { Q(0, 1) } else { lo })
}

pub fn rasterize(v: Cell) -> Result<Rasterization> {
    if v == (0, 0) {
        return Err(CaError::InvalidArgument("cannot rasterize the zero vector".into()));
    }
    let mut hits: Vec<(Q, Cell)> = Vec::new();
    for i in v.0.min(0)..=v.0.max(0) {
        for j in v.1.min(0)..=v.1.max(0) {
            if let Some(t) = entry(v, (i, j)) {
                hits.push((t, (i, j)));
            }
        }
    }
    hits.sort_by(|a, b| a.0.cmp(b.0));
    let d_cells: Vec<Cell> = hits.into_iter().map(|(_, c)| c).collect();
    let mut upper = vec![d_cells[0]];
    let mut lower = vec![d_cells[0]];
    for w in d_cells.windows(2) {
        let (p, q) = (w[0], w[1]);
        if p.0 != q.0 && p.1 != q.1 {
            let (f1, f2) = ((q.0, p.1), (p.0, q.1));
            let (hi, lo) = if f1.1 > f2.1 { (f1, f2) } else { (f2, f1) };
            upper.push(hi);
            lower.push(lo);
        }
        upper.push(q);
        lower.push(q);
    }
    Ok(Rasterization {
        segment: v,
        d_cells,
        upper,
        lower,
    })
}
