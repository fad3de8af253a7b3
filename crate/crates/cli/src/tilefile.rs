//! Tile files: one tile per line,
//! `tile <id> N=<c> S=<c> E=<c> W=<c> [dir=<N|S|E|W>]`, with `#` comments.

use std::fmt::Write as _;

use calab::wang::{Color, Compass, Tile, TileSet};

use crate::error::{CliError, CliResult};

pub fn parse_tiles(text: &str) -> CliResult<TileSet> {
    let mut tiles = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        if words.next() != Some("tile") {
            return Err(CliError::format(line_no, "expected `tile <id> N=<c> S=<c> E=<c> W=<c>`"));
        }
        let id: usize = words
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| CliError::format(line_no, "tile id must be a non-negative integer"))?;
        if let Some(prev) = seen.insert(id, line_no) {
            return Err(CliError::format(line_no, format!("tile id {id} already defined on line {prev}")));
        }
        let mut colors: [Option<Color>; 4] = [None; 4];
        let mut dir = None;
        for w in words {
            let (key, value) = w
                .split_once('=')
                .ok_or_else(|| CliError::format(line_no, format!("expected key=value, got `{w}`")))?;
            if key == "dir" {
                let d = value
                    .chars()
                    .next()
                    .filter(|_| value.len() == 1)
                    .and_then(Compass::from_letter)
                    .ok_or_else(|| CliError::format(line_no, format!("direction must be N, S, E or W, got `{value}`")))?;
                if dir.replace(d).is_some() {
                    return Err(CliError::format(line_no, "direction given twice"));
                }
                continue;
            }
            let side = key
                .chars()
                .next()
                .filter(|_| key.len() == 1)
                .and_then(Compass::from_letter)
                .ok_or_else(|| CliError::format(line_no, format!("unknown key `{key}`")))?;
            let c: Color = value
                .parse()
                .map_err(|_| CliError::format(line_no, format!("color must be a non-negative integer, got `{value}`")))?;
            if colors[side as usize].replace(c).is_some() {
                return Err(CliError::format(line_no, format!("side {key} given twice")));
            }
        }
        let [Some(n), Some(e), Some(s), Some(w)] = colors else {
            return Err(CliError::format(line_no, "all four sides N, S, E, W are required"));
        };
        let mut t = Tile::new(id, n, e, s, w);
        t.direction = dir;
        tiles.push(t);
    }
    if tiles.is_empty() {
        return Err(CliError::format(text.lines().count().max(1), "no tiles"));
    }
    Ok(TileSet::new(tiles)?)
}

pub fn emit_tiles(ts: &TileSet) -> String {
    let mut out = String::new();
    for t in ts.tiles() {
        let _ = write!(
            out,
            "tile {} N={} S={} E={} W={}",
            t.id,
            t.color(Compass::N),
            t.color(Compass::S),
            t.color(Compass::E),
            t.color(Compass::W)
        );
        if let Some(d) = t.direction {
            let _ = write!(out, " dir={d}");
        }
        out.push('\n');
    }
    out
}

pub fn load_tiles(path: &str) -> CliResult<TileSet> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    parse_tiles(&text).map_err(|e| match e {
        CliError::Format { line, msg } => CliError::usage(format!("{path}: line {line}: {msg}")),
        e => e,
    })
}
