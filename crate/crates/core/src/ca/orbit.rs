use std::collections::HashMap;

use super::{LocalRule2D, TorusConfig2D};
use crate::Result;

/// First `(n, p)` with `F^{n+p}(c) = F^n(c)`, searching at most `bound`
/// steps. The orbit of a torus is finite, so a bound of `|A|^{pq}` always
/// succeeds.
pub fn temporal_period<R: LocalRule2D + ?Sized>(
    rule: &R,
    c: &TorusConfig2D,
    bound: usize,
) -> Result<Option<(usize, usize)>> {
    rule.alphabet().expect(c.alphabet())?;
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut cur = c.clone();
    for step in 0..=bound {
        if let Some(&first) = seen.get(cur.cells()) {
            return Ok(Some((first, step - first)));
        }
        seen.insert(cur.cells().to_vec(), step);
        cur = rule.apply(&cur)?;
    }
    Ok(None)
}
