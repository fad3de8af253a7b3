//! Rule files.
//!
//! ```text
//! # comments and blank lines are ignored
//! kind 2D
//! alphabet 2
//! radius 1
//! neighborhood moore
//! table 0110…
//! ```
//!
//! The body is either `table` followed by the full table in lexicographic
//! neighborhood order, or `builtin <name>`. Table entries are single
//! base-36 digits when the alphabet has at most 36 symbols (whitespace is
//! ignored), decimal tokens otherwise. `neighborhood` is `moore` or
//! `vonneumann` and only applies to 2D rules.

use std::fmt::Write as _;

use calab::ca::{builtin, Alphabet, Neighborhood, RuleTable1D, RuleTable2D};
use calab::{Cell, Limits, Symbol};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    OneD(RuleTable1D),
    TwoD(RuleTable2D),
}

impl Rule {
    pub fn kind(&self) -> &'static str {
        match self {
            Rule::OneD(_) => "1D",
            Rule::TwoD(_) => "2D",
        }
    }
}

pub const BUILTINS: &[&str] = &["identity", "xor-corners", "and-min", "shift:<dx,dy>", "xor1d", "eca:<n>"];

/// Parser limits: large alphabets appear in sliced rules, so only the
/// table size (bounded by the file) matters.
fn parse_limits() -> Limits {
    Limits {
        max_alphabet: u32::MAX,
        ..Limits::default()
    }
}

#[derive(Default)]
struct Header {
    kind: Option<(usize, String)>,
    alphabet: Option<u32>,
    radius: Option<u32>,
    neighborhood: Option<(usize, String)>,
}

pub fn parse_rule(text: &str) -> CliResult<Rule> {
    let mut h = Header::default();
    let mut body: Option<(usize, String, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((_, kw, rest)) = body.as_mut() {
            if kw == "table" {
                rest.push(' ');
                rest.push_str(line);
                continue;
            }
            return Err(CliError::format(line_no, "nothing may follow a builtin body"));
        }
        let (key, value) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let value = value.trim();
        let number = |what: &str| -> CliResult<u32> {
            value
                .parse()
                .map_err(|_| CliError::format(line_no, format!("{what} must be a non-negative integer")))
        };
        match key {
            "kind" => h.kind = Some((line_no, value.to_string())),
            "alphabet" => h.alphabet = Some(number("alphabet")?),
            "radius" => h.radius = Some(number("radius")?),
            "neighborhood" => h.neighborhood = Some((line_no, value.to_ascii_lowercase())),
            "table" | "builtin" => body = Some((line_no, key.to_string(), value.to_string())),
            other => return Err(CliError::format(line_no, format!("unknown key `{other}`"))),
        }
    }
    let (line_no, kw, value) = body.ok_or_else(|| CliError::format(text.lines().count().max(1), "missing body"))?;
    if kw == "builtin" {
        return builtin_rule(&value, &h).map_err(|e| match e {
            CliError::Usage(msg) => CliError::format(line_no, msg),
            e => e,
        });
    }
    let (kind_line, kind) = h.kind.clone().ok_or_else(|| CliError::format(1, "missing `kind`"))?;
    let a = h.alphabet.ok_or_else(|| CliError::format(1, "missing `alphabet`"))?;
    let r = h.radius.ok_or_else(|| CliError::format(1, "missing `radius`"))?;
    let alphabet = Alphabet::new(a, &parse_limits()).map_err(|e| CliError::format(1, e.to_string()))?;
    let table = parse_table(&value, a).map_err(|msg| CliError::format(line_no, msg))?;
    match kind.as_str() {
        "1D" | "1d" => {
            if let Some((l, _)) = &h.neighborhood {
                return Err(CliError::format(*l, "1D rules take no neighborhood"));
            }
            RuleTable1D::new(alphabet, r, table)
                .map(Rule::OneD)
                .map_err(|e| CliError::format(line_no, e.to_string()))
        }
        "2D" | "2d" => {
            let nb = neighborhood(h.neighborhood.as_ref(), r)?;
            RuleTable2D::new(alphabet, nb, table)
                .map(Rule::TwoD)
                .map_err(|e| CliError::format(line_no, e.to_string()))
        }
        other => Err(CliError::format(kind_line, format!("kind must be 1D or 2D, got `{other}`"))),
    }
}

fn neighborhood(nb: Option<&(usize, String)>, r: u32) -> CliResult<Neighborhood> {
    match nb.map(|(l, s)| (*l, s.as_str())) {
        None | Some((_, "moore")) => Ok(Neighborhood::Moore { radius: r }),
        Some((_, "vonneumann")) => Ok(Neighborhood::VonNeumann { extent: (r, r) }),
        Some((l, other)) => Err(CliError::format(l, format!("unknown neighborhood `{other}`"))),
    }
}

fn parse_table(body: &str, a: u32) -> Result<Vec<Symbol>, String> {
    if a <= 36 {
        body.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c.to_digit(36) {
                Some(d) if d < a => Ok(d),
                _ => Err(format!("`{c}` is not a digit below {a}")),
            })
            .collect()
    } else {
        body.split_whitespace()
            .map(|t| match t.parse::<u32>() {
                Ok(d) if d < a => Ok(d),
                _ => Err(format!("`{t}` is not a symbol below {a}")),
            })
            .collect()
    }
}

fn parse_vector(s: &str) -> Option<Cell> {
    let (x, y) = s.split_once(',')?;
    Some((x.trim().parse().ok()?, y.trim().parse().ok()?))
}

fn builtin_rule(name: &str, h: &Header) -> CliResult<Rule> {
    let limits = Limits::default();
    let a = h.alphabet.unwrap_or(2);
    let alphabet = Alphabet::new(a, &limits)?;
    let want_1d = matches!(h.kind.as_ref().map(|(_, k)| k.as_str()), Some("1D" | "1d"));
    let r = h.radius.unwrap_or(1);
    let rule = match name {
        "identity" if want_1d => Rule::OneD(RuleTable1D::identity(alphabet, r)),
        "identity" => {
            let nb = neighborhood(h.neighborhood.as_ref(), r)?;
            Rule::TwoD(RuleTable2D::from_fn(alphabet, nb, &limits, |n| n.at(0, 0))?)
        }
        "xor-corners" => Rule::TwoD(builtin::xor_corners(alphabet)),
        "and-min" => Rule::TwoD(builtin::and_min(alphabet)),
        "xor1d" => Rule::OneD(RuleTable1D::xor(alphabet)),
        _ => {
            if let Some(v) = name.strip_prefix("shift:").and_then(parse_vector) {
                Rule::TwoD(builtin::shift(alphabet, v, &limits)?)
            } else if let Some(n) = name.strip_prefix("eca:").and_then(|n| n.parse::<u8>().ok()) {
                Rule::OneD(RuleTable1D::elementary(n))
            } else {
                return Err(CliError::usage(format!(
                    "unknown builtin `{name}` (known: {})",
                    BUILTINS.join(", ")
                )));
            }
        }
    };
    if want_1d != matches!(rule, Rule::OneD(_)) && h.kind.is_some() {
        return Err(CliError::usage(format!("builtin `{name}` is not a {} rule", if want_1d { "1D" } else { "2D" })));
    }
    Ok(rule)
}

/// A builtin by bare name with default header (binary, radius 1).
pub fn builtin_by_name(name: &str) -> CliResult<Rule> {
    builtin_rule(name, &Header::default())
}

/// Reads a rule from a file, or from a bare builtin name when no such
/// file exists.
pub fn load_rule(arg: &str) -> CliResult<Rule> {
    match std::fs::read_to_string(arg) {
        Ok(text) => parse_rule(&text).map_err(|e| match e {
            CliError::Format { line, msg } => CliError::usage(format!("{arg}: line {line}: {msg}")),
            e => e,
        }),
        Err(source) if source.kind() == std::io::ErrorKind::NotFound => {
            builtin_by_name(arg).map_err(|_| CliError::Io {
                path: arg.to_string(),
                source,
            })
        }
        Err(source) => Err(CliError::Io {
            path: arg.to_string(),
            source,
        }),
    }
}

fn emit_table(out: &mut String, a: u32, table: &[Symbol]) {
    out.push_str("table ");
    if a <= 36 {
        out.extend(table.iter().map(|&s| char::from_digit(s, 36).expect("digit below 36")));
    } else {
        let toks: Vec<String> = table.iter().map(|s| s.to_string()).collect();
        out.push_str(&toks.join(" "));
    }
    out.push('\n');
}

/// Canonical text of a rule; [`parse_rule`] reads it back to the same table.
pub fn emit_rule(rule: &Rule) -> String {
    let mut out = String::new();
    match rule {
        Rule::OneD(r) => {
            let a = r.alphabet().size();
            let _ = write!(out, "kind 1D\nalphabet {a}\nradius {}\n", r.radius());
            emit_table(&mut out, a, r.table());
        }
        Rule::TwoD(r) => {
            use calab::ca::LocalRule2D;
            let a = r.alphabet().size();
            let (radius, nb) = match r.neighborhood() {
                Neighborhood::Moore { radius } => (radius, "moore"),
                Neighborhood::VonNeumann { extent } => (extent.0, "vonneumann"),
            };
            let _ = write!(out, "kind 2D\nalphabet {a}\nradius {radius}\nneighborhood {nb}\n");
            emit_table(&mut out, a, r.table());
        }
    }
    out
}
