//! Plain PBM (`P1`) bitmaps. Row 0 of the bitmap is the northmost row.

use crate::error::{CliError, CliResult};

const LINE: usize = 70;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub bits: Vec<bool>,
}

impl Bitmap {
    /// From a grid stored with `y = 0` the southmost row.
    pub fn from_south_up(width: usize, height: usize, bit: impl Fn(usize, usize) -> bool) -> Self {
        let bits = (0..height)
            .rev()
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| bit(x, y))
            .collect();
        Bitmap { width, height, bits }
    }

    /// Each row is written as digits without separators, wrapped at 70
    /// characters.
    pub fn to_pbm(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.width, self.height);
        for row in self.bits.chunks(self.width.max(1)) {
            for chunk in row.chunks(LINE) {
                out.extend(chunk.iter().map(|&b| if b { '1' } else { '0' }));
                out.push('\n');
            }
        }
        out
    }

    pub fn parse(text: &str) -> CliResult<Bitmap> {
        let mut tokens = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            for w in line.split_whitespace() {
                tokens.push((i + 1, w));
            }
        }
        let mut it = tokens.into_iter();
        match it.next() {
            Some((_, "P1")) => {}
            Some((l, _)) => return Err(CliError::format(l, "expected magic number P1")),
            None => return Err(CliError::format(1, "empty bitmap")),
        }
        let mut dim = || -> CliResult<usize> {
            let (l, w) = it.next().ok_or_else(|| CliError::format(1, "missing dimensions"))?;
            w.parse().map_err(|_| CliError::format(l, format!("bad dimension `{w}`")))
        };
        let (width, height) = (dim()?, dim()?);
        let mut bits = Vec::with_capacity(width * height);
        for (l, w) in it {
            for c in w.chars() {
                match c {
                    '0' => bits.push(false),
                    '1' => bits.push(true),
                    _ => return Err(CliError::format(l, format!("bad pixel `{c}`"))),
                }
            }
        }
        if bits.len() != width * height {
            return Err(CliError::format(
                text.lines().count(),
                format!("expected {} pixels, got {}", width * height, bits.len()),
            ));
        }
        Ok(Bitmap { width, height, bits })
    }
}
