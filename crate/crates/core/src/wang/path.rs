use std::collections::HashMap;

use super::tile::{TileSet, Tiling};
use crate::{CaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathEnd {
    /// The last cell points outside a rectangular domain.
    Boundary,
    MaxSteps,
    /// After `step` steps the path re-entered the cell visited at `index`.
    Cycle { step: usize, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathTrace {
    pub cells: Vec<(usize, usize)>,
    pub end: PathEnd,
}

/// Follows tile directions from `start` for at most `max_steps` steps.
pub fn follow_path(ts: &TileSet, t: &Tiling, start: (usize, usize), max_steps: usize) -> Result<PathTrace> {
    let (w, h) = t.dims();
    if start.0 >= w || start.1 >= h {
        return Err(CaError::InvalidArgument(format!("start {start:?} outside {w}x{h}")));
    }
    let torus = t.domain().is_torus();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut cells = vec![start];
    seen.insert(start, 0);
    let mut here = start;
    for step in 1..=max_steps {
        let tile = ts.get(t.get(here))?;
        let dir = tile
            .direction
            .ok_or(CaError::Undirected((here.0 as i64, here.1 as i64)))?;
        let (dx, dy) = dir.delta();
        let (nx, ny) = (here.0 as i64 + dx, here.1 as i64 + dy);
        let next = if torus {
            (nx.rem_euclid(w as i64) as usize, ny.rem_euclid(h as i64) as usize)
        } else if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
            return Ok(PathTrace {
                cells,
                end: PathEnd::Boundary,
            });
        } else {
            (nx as usize, ny as usize)
        };
        if let Some(&index) = seen.get(&next) {
            return Ok(PathTrace {
                cells,
                end: PathEnd::Cycle { step, index },
            });
        }
        seen.insert(next, cells.len());
        cells.push(next);
        here = next;
    }
    Ok(PathTrace {
        cells,
        end: PathEnd::MaxSteps,
    })
}
