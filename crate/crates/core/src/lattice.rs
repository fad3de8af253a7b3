//! Integer lattice helpers: gcd arithmetic and quotients `Z² / Λ` for
//! full-rank sublattices `Λ`.

use crate::{CaError, Cell, Result};

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

pub fn dot(a: Cell, b: Cell) -> i64 {
    a.0 * b.0 + a.1 * b.1
}

pub fn det(a: Cell, b: Cell) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Extended Euclid: returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// The quotient `Z² / Λ` of a full-rank lattice, stored through the
/// lower-triangular basis `(a, 0), (e, b)` with `a, b > 0` and `0 ≤ e < a`.
///
/// Every coset has exactly one representative in `[0, a) × [0, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeTorus {
    a: i64,
    b: i64,
    e: i64,
}

impl LatticeTorus {
    pub fn new(generators: &[Cell]) -> Result<Self> {
        let mut vs: Vec<Cell> = generators.iter().copied().filter(|v| *v != (0, 0)).collect();
        // Euclid on the second coordinate until a single vector carries it.
        loop {
            let mut nz: Vec<usize> = (0..vs.len()).filter(|&i| vs[i].1 != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&i| vs[i].1.abs());
            let p = nz[0];
            let (px, py) = vs[p];
            for &i in &nz[1..] {
                let q = vs[i].1.div_euclid(py);
                vs[i] = (vs[i].0 - q * px, vs[i].1 - q * py);
            }
            vs.retain(|v| *v != (0, 0));
        }
        let Some(&(ex, b)) = vs.iter().find(|v| v.1 != 0) else {
            return Err(CaError::InvalidArgument(format!(
                "lattice {generators:?} is not full rank"
            )));
        };
        let a = vs.iter().filter(|v| v.1 == 0).fold(0, |g, v| gcd(g, v.0));
        if a == 0 {
            return Err(CaError::InvalidArgument(format!(
                "lattice {generators:?} is not full rank"
            )));
        }
        let (ex, b) = if b < 0 { (-ex, -b) } else { (ex, b) };
        Ok(LatticeTorus {
            a,
            b,
            e: ex.rem_euclid(a),
        })
    }

    /// Number of cosets, `|det Λ|`.
    pub fn cells(&self) -> usize {
        (self.a * self.b) as usize
    }

    pub fn basis(&self) -> [Cell; 2] {
        [(self.a, 0), (self.e, self.b)]
    }

    pub fn reduce(&self, (x, y): Cell) -> Cell {
        let k = y.div_euclid(self.b);
        let y = y.rem_euclid(self.b);
        ((x - k * self.e).rem_euclid(self.a), y)
    }

    pub fn index(&self, x: Cell) -> usize {
        let (x, y) = self.reduce(x);
        (y * self.a + x) as usize
    }

    pub fn cell(&self, index: usize) -> Cell {
        let i = index as i64;
        (i % self.a, i / self.a)
    }

    pub fn contains(&self, v: Cell) -> bool {
        self.reduce(v) == (0, 0)
    }

    /// Smallest `(p, q)` such that `(p, 0)` and `(0, q)` both lie in `Λ`.
    pub fn rectangular_periods(&self) -> (i64, i64) {
        let m = self.a / gcd(self.a, self.e);
        (self.a, self.b * m)
    }
}
