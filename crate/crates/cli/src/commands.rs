use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use calab::dyn1d::{check_closing, closing_oracle, find_blocking_word, BlockingStatus, ClosingAnswer, Side};
use calab::dyn2d::{
    count_rectangles, count_rectangles_1d, is_gamma_permutive, nu_closing_evidence, quasi_expansivity_certificate,
    quasi_sensitivity_check, BlockingBounds, CountMode, EntropyRow, EvidenceOutcome, SensitivityOutcome, CORNERS,
};
use calab::reduction::{
    bounded_closing_probe, build_reduction, build_witness, check_witness_windows, ProbeBounds, WitnessKind,
};
use calab::slicing::{build_family, build_sliced_rule};
use calab::stretch::{build_shape, stretch_tileset, verify_isomorphism};
use calab::wang::{
    attach_space_filling_path, generate_hierarchy, tiles_square, tiles_torus, Anchor, Label, SearchOutcome, Tiling,
};
use calab::{Cell, Limits};

use crate::error::{CliError, CliResult};
use crate::pbm::Bitmap;
use crate::rulefile::{emit_rule, load_rule, Rule};
use crate::tilefile::load_tiles;

/// Exit code for a refutation backed by a witness.
pub const EXIT_REFUTED: i32 = 1;
/// Exit code for usage, format and budget errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ca-lab", version, about = "Exact dynamics of 1D/2D cellular automata and Wang tilings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnchorArg {
    Sw,
    South,
    East,
    Center,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderArg {
    Pbm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessArg {
    Mu,
    Numu,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Permutivity, quasi-expansivity, closing evidence and sensitivity of a 2D rule.
    Analyze2d {
        rulefile: String,
        #[arg(long)]
        gamma_permutivity: bool,
        #[arg(long)]
        quasi_expansive: bool,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_cell)]
        nu: Option<Cell>,
        #[arg(long)]
        closing_evidence: bool,
        /// Periods `v`, separated by `;` (default: d, 2d, 3d).
        #[arg(long, allow_hyphen_values = true, value_delimiter = ';', value_parser = parse_cell)]
        v: Option<Vec<Cell>>,
        #[arg(long)]
        sensitivity: bool,
    },
    /// The 1D CA obtained by slicing a 2D rule along `ν` on `v`-periodic configurations.
    Slice {
        rulefile: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_cell)]
        nu: Cell,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_cell)]
        v: Cell,
        /// Print the sliced rule as a rule file.
        #[arg(long)]
        emit_rulefile: bool,
    },
    /// Counts of space-time rectangles, as TSV `w t count log2(count)/t`.
    Entropy {
        rulefile: String,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        w: Vec<usize>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        t: Vec<usize>,
        #[arg(long, conflicts_with = "sample")]
        exact: bool,
        /// Count over this many random initial blocks (lower bounds).
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decides left or right closingness of a 1D rule.
    Closing1d {
        rulefile: String,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Cross-check with the brute-force oracle (`head,period`).
        #[arg(long, value_parser = parse_pair)]
        oracle: Option<(usize, usize)>,
    },
    /// Searches an `s`-blocking word of a 1D rule.
    Blocking {
        rulefile: String,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        horizon: u32,
    },
    /// Tiles a square or torus, printing tile ids (north row first) or UNSAT.
    Tile {
        tilefile: String,
        #[arg(long, conflicts_with = "torus")]
        square: Option<usize>,
        #[arg(long, value_parser = parse_pair)]
        torus: Option<(usize, usize)>,
    },
    /// The hierarchical cross pattern of a given step.
    Hierarchy {
        #[arg(long)]
        step: u32,
        #[arg(long, value_enum)]
        anchor: AnchorArg,
        /// Also print the plane-filling path directions.
        #[arg(long)]
        path: bool,
        #[arg(long, value_enum)]
        render: Option<RenderArg>,
    },
    /// Stretches a tile set into macro-tiles along `ν` (north) and `μ` (east).
    Stretch {
        tilefile: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_cell)]
        nu: Cell,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_cell)]
        mu: Cell,
        #[arg(long, value_parser = parse_pair)]
        verify: Option<(usize, usize)>,
    },
    /// Builds the tiling reduction CA and its non-closing witness.
    Reduce {
        tilefile: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_cell)]
        nu: Cell,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_cell)]
        mu: Cell,
        #[arg(long, value_enum, default_value = "mu")]
        witness: WitnessArg,
        /// Largest window side for --check.
        #[arg(long, default_value_t = 8)]
        window: usize,
        #[arg(long)]
        check: bool,
        /// Hierarchy step of the directed tile set.
        #[arg(long, default_value_t = 3)]
        step: u32,
        /// Run the bounded search for equal-image pairs.
        #[arg(long)]
        probe: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_cell(s: &str) -> Result<Cell, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let num = |t: &str| t.trim().trim_matches(|c| c == '(' || c == ')').parse::<i64>();
    match (num(x), num(y)) {
        (Ok(a), Ok(b)) => Ok((a, b)),
        _ => Err(format!("expected two integers `a,b`, got `{s}`")),
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    match (a.trim().parse(), b.trim().parse()) {
        (Ok(a), Ok(b)) => Ok((a, b)),
        _ => Err(format!("expected two non-negative integers `a,b`, got `{s}`")),
    }
}

fn fmt_cell(c: Cell) -> String {
    format!("({},{})", c.0, c.1)
}

fn fmt_word(w: &[u32]) -> String {
    w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(if w.iter().any(|&s| s > 9) { "," } else { "" })
}

fn need_2d(rule: Rule) -> CliResult<calab::ca::RuleTable2D> {
    match rule {
        Rule::TwoD(r) => Ok(r),
        Rule::OneD(_) => Err(CliError::usage("this command needs a 2D rule")),
    }
}

fn need_1d(rule: Rule) -> CliResult<calab::ca::RuleTable1D> {
    match rule {
        Rule::OneD(r) => Ok(r),
        Rule::TwoD(_) => Err(CliError::usage("this command needs a 1D rule")),
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

/// Parses `args` (program name first) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, &Limits::from_env(), out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn execute(cmd: Command, limits: &Limits, out: &mut dyn Write) -> CliResult<i32> {
    match cmd {
        Command::Analyze2d {
            rulefile,
            gamma_permutivity,
            quasi_expansive,
            nu,
            closing_evidence,
            v,
            sensitivity,
        } => {
            let rule = need_2d(load_rule(&rulefile)?)?;
            let all = !(gamma_permutivity || quasi_expansive || closing_evidence || sensitivity);
            analyze2d(
                &rule,
                gamma_permutivity || all,
                quasi_expansive || all,
                nu,
                closing_evidence || (all && nu.is_some()),
                v,
                sensitivity || (all && nu.is_some()),
                limits,
                out,
            )
        }
        Command::Slice {
            rulefile,
            nu,
            v,
            emit_rulefile,
        } => {
            let rule = need_2d(load_rule(&rulefile)?)?;
            let sliced = build_sliced_rule(&rule, nu, v, limits)?;
            if emit_rulefile {
                out.write_all(emit_rule(&Rule::OneD(sliced.rule.clone())).as_bytes()).map_err(io)?;
            } else {
                let f = sliced.family;
                writeln!(
                    out,
                    "nu={} d={} normal={} y1={} v={} k={} rstar={} alphabet={}",
                    fmt_cell(f.nu),
                    fmt_cell(f.d),
                    fmt_cell(f.normal),
                    fmt_cell(f.y1),
                    fmt_cell(v),
                    sliced.k,
                    sliced.rstar,
                    sliced.sliced_alphabet().size()
                )
                .map_err(io)?;
            }
            Ok(0)
        }
        Command::Entropy {
            rulefile,
            w,
            t,
            exact: _,
            sample,
            seed,
        } => {
            let rule = load_rule(&rulefile)?;
            let mode = match sample {
                Some(n) => CountMode::Sample { n, seed },
                None => CountMode::Exact,
            };
            if w.is_empty() || t.is_empty() {
                return Err(CliError::usage("--w and --t need at least one value"));
            }
            writeln!(out, "w\tt\tcount\tratio").map_err(io)?;
            for &tt in &t {
                for &ww in &w {
                    let row = match &rule {
                        Rule::TwoD(r) => count_rectangles(r, ww, tt, mode, limits)?,
                        Rule::OneD(r) => count_rectangles_1d(r, ww, tt, mode, limits)?,
                    };
                    writeln!(out, "{}", entropy_line(&row)).map_err(io)?;
                }
            }
            Ok(0)
        }
        Command::Closing1d { rulefile, side, oracle } => {
            let rule = need_1d(load_rule(&rulefile)?)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let verdict = check_closing(&rule, side, limits);
            let mut code = 0;
            match verdict.answer {
                ClosingAnswer::Closing => writeln!(out, "CLOSING").map_err(io)?,
                ClosingAnswer::Unknown => writeln!(out, "UNKNOWN").map_err(io)?,
                ClosingAnswer::NotClosing => {
                    writeln!(out, "NOT-CLOSING").map_err(io)?;
                    if let Some(w) = &verdict.witness {
                        for (name, x) in [("a", &w.a), ("b", &w.b)] {
                            writeln!(
                                out,
                                "witness {name}: left={} middle={} right={} start={}",
                                fmt_word(&x.left),
                                fmt_word(&x.middle),
                                fmt_word(&x.right),
                                x.start
                            )
                            .map_err(io)?;
                        }
                        writeln!(out, "witness verified: {}", w.verify(&rule, side)).map_err(io)?;
                    }
                    code = EXIT_REFUTED;
                }
            }
            if let Some((head, period)) = oracle {
                let found = closing_oracle(&rule, side, head, period);
                let agree = match (&found, verdict.answer) {
                    (Some(_), ClosingAnswer::Closing) => "no",
                    (Some(_), ClosingAnswer::NotClosing) | (None, _) => "yes",
                    (Some(_), ClosingAnswer::Unknown) => "unknown",
                };
                writeln!(
                    out,
                    "oracle head={head} period={period}: {}",
                    if found.is_some() { "witness" } else { "none" }
                )
                .map_err(io)?;
                writeln!(out, "agreement: {agree}").map_err(io)?;
            }
            Ok(code)
        }
        Command::Blocking {
            rulefile,
            s,
            max_len,
            horizon,
        } => {
            let rule = need_1d(load_rule(&rulefile)?)?;
            if s == 0 || s > max_len {
                return Err(CliError::usage("need 1 <= s <= max-len"));
            }
            match find_blocking_word(&rule, s, max_len, horizon, limits) {
                None => writeln!(out, "NONE").map_err(io)?,
                Some(rep) => {
                    let tag = match rep.status {
                        BlockingStatus::Blocking => "BLOCKING".to_string(),
                        BlockingStatus::UnknownAt(h) => format!("UNKNOWN horizon={h}"),
                        BlockingStatus::NotBlockingWithin(h) => format!("NOT-BLOCKING horizon={h}"),
                    };
                    writeln!(out, "{tag} word={} offset={}", fmt_word(&rep.word), rep.offset).map_err(io)?;
                }
            }
            Ok(0)
        }
        Command::Tile { tilefile, square, torus } => {
            let ts = load_tiles(&tilefile)?;
            let outcome = match (square, torus) {
                (Some(n), None) => tiles_square(&ts, n, limits),
                (None, Some((p, q))) => tiles_torus(&ts, p, q, limits),
                _ => return Err(CliError::usage("give exactly one of --square n or --torus p,q")),
            };
            match outcome {
                SearchOutcome::Found(t) => out.write_all(render_tiling(&t).as_bytes()).map_err(io)?,
                SearchOutcome::Exhausted => writeln!(out, "UNSAT").map_err(io)?,
                SearchOutcome::Unknown => writeln!(out, "UNKNOWN").map_err(io)?,
            }
            Ok(0)
        }
        Command::Hierarchy {
            step,
            anchor,
            path,
            render,
        } => {
            let anchor = match anchor {
                AnchorArg::Sw => Anchor::SWCorner,
                AnchorArg::South => Anchor::SouthMid,
                AnchorArg::East => Anchor::EastMid,
                AnchorArg::Center => Anchor::Center,
            };
            let h = generate_hierarchy(step, anchor, limits)?;
            let s = h.side();
            if render == Some(RenderArg::Pbm) {
                let bm = Bitmap::from_south_up(s, s, |x, y| h.label((x, y)).is_cross());
                out.write_all(bm.to_pbm().as_bytes()).map_err(io)?;
                return Ok(0);
            }
            let glyph = |l: Label| match l {
                Label::Blank => '.',
                Label::ArmH => '-',
                Label::ArmV => '|',
                Label::Center => '+',
            };
            let grid = |f: &dyn Fn(usize, usize) -> char| -> String {
                (0..s)
                    .rev()
                    .map(|y| (0..s).map(|x| f(x, y)).collect::<String>() + "\n")
                    .collect()
            };
            out.write_all(grid(&|x, y| glyph(h.label((x, y)))).as_bytes()).map_err(io)?;
            if path {
                let cover = attach_space_filling_path(&h);
                writeln!(out).map_err(io)?;
                out.write_all(grid(&|x, y| cover.dir((x, y)).letter()).as_bytes()).map_err(io)?;
                let lens: Vec<String> = cover.paths().iter().map(|p| p.len().to_string()).collect();
                writeln!(out, "paths: {} lengths: {}", cover.paths().len(), lens.join(",")).map_err(io)?;
            }
            Ok(0)
        }
        Command::Stretch { tilefile, nu, mu, verify } => {
            let ts = load_tiles(&tilefile)?;
            let shape = build_shape(nu, mu)?;
            let sts = stretch_tileset(&ts, &shape, limits)?;
            writeln!(
                out,
                "shape: nu={} mu={} scale={} cells={} neighbors={} overlap-suppressed={}",
                fmt_cell(shape.nu()),
                fmt_cell(shape.mu()),
                shape.scale(),
                shape.len(),
                shape.neighbor_count(),
                shape.overlap_suppressed()
            )
            .map_err(io)?;
            writeln!(out, "tiles: base={} stretched={}", ts.len(), sts.tiles().len()).map_err(io)?;
            let mut code = 0;
            if let Some((p, q)) = verify {
                let rep = verify_isomorphism(&ts, &sts, p, q, false, limits)?;
                writeln!(
                    out,
                    "verify {p}x{q}: base={} stretched-anchored={} decodes={} isomorphic={}",
                    rep.base_tilings,
                    rep.anchored_tilings,
                    rep.decodes,
                    if rep.holds() { "yes" } else { "no" }
                )
                .map_err(io)?;
                if !rep.holds() {
                    code = EXIT_REFUTED;
                }
            }
            Ok(code)
        }
        Command::Reduce {
            tilefile,
            nu,
            mu,
            witness,
            window,
            check,
            step,
            probe,
            seed,
        } => {
            let tau = load_tiles(&tilefile)?;
            let red = build_reduction(&tau, nu, mu, step, limits)?;
            writeln!(
                out,
                "reduction: states={} k-tiles={} macro-cells={} macro-side={} extent={}",
                red.state_count(),
                red.k().tiles().len(),
                red.shape().len(),
                red.macro_side(),
                red.extent()
            )
            .map_err(io)?;
            let kind = match witness {
                WitnessArg::Mu => WitnessKind::MuAsymptotic,
                WitnessArg::Numu => WitnessKind::NuMuAsymptotic,
            };
            let mut code = 0;
            match build_witness(&red, kind, limits) {
                Ok(w) => {
                    writeln!(
                        out,
                        "witness {kind:?}: cells={} differences={} center={}",
                        w.pair.domain().len(),
                        w.pair.difference_cells().len(),
                        fmt_cell(w.center)
                    )
                    .map_err(io)?;
                    if check {
                        match check_witness_windows(&red, &w, window, limits)? {
                            None => writeln!(out, "equal image on all windows up to {window}x{window}: yes"),
                            Some(r) => {
                                code = EXIT_REFUTED;
                                writeln!(out, "images differ on window {}x{} at {}", r.w, r.h, fmt_cell((r.x0, r.y0)))
                            }
                        }
                        .map_err(io)?;
                    }
                }
                Err(calab::CaError::NoTiling(msg)) => writeln!(out, "witness: none ({msg})").map_err(io)?,
                Err(e) => return Err(e.into()),
            }
            if probe {
                let rep = bounded_closing_probe(
                    &red,
                    &ProbeBounds {
                        seed,
                        ..ProbeBounds::default()
                    },
                    limits,
                );
                writeln!(
                    out,
                    "probe: scenes={} pairs={} equal-image={} with-valid-3x3={} structural={}",
                    rep.scenes.len(),
                    rep.pairs_tested,
                    rep.equal_image_pairs,
                    rep.with_valid_block,
                    rep.structural_ok
                )
                .map_err(io)?;
            }
            Ok(code)
        }
    }
}

fn entropy_line(row: &EntropyRow) -> String {
    let mut line = format!("{}\t{}\t{}\t{:?}", row.w, row.t, row.count, row.ratio);
    if row.lower_bound {
        line.push_str("\tlower-bound");
    }
    line
}

/// Tile ids row by row, north row first.
pub fn render_tiling(t: &Tiling) -> String {
    let (w, h) = t.dims();
    (0..h)
        .rev()
        .map(|y| {
            let row: Vec<String> = (0..w).map(|x| t.get((x, y)).to_string()).collect();
            row.join(" ") + "\n"
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn analyze2d(
    rule: &calab::ca::RuleTable2D,
    gamma: bool,
    quasi: bool,
    nu: Option<Cell>,
    closing: bool,
    v: Option<Vec<Cell>>,
    sensitivity: bool,
    limits: &Limits,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let mut code = 0;
    if gamma {
        for g in CORNERS {
            writeln!(out, "gamma-permutive {}: {}", fmt_cell(g), is_gamma_permutive(rule, g, limits)?).map_err(io)?;
        }
    }
    if quasi {
        match quasi_expansivity_certificate(rule, limits)? {
            Some(c) => writeln!(
                out,
                "quasi-expansive: certificate gamma={} sliced nu={} v={}",
                fmt_cell(c.gamma),
                fmt_cell(c.sliced_check.0),
                fmt_cell(c.sliced_check.1)
            ),
            None => writeln!(out, "quasi-expansive: no certificate"),
        }
        .map_err(io)?;
    }
    if !(closing || sensitivity) {
        return Ok(code);
    }
    let nu = nu.ok_or_else(|| CliError::usage("--closing-evidence and --sensitivity need --nu"))?;
    let d = build_family(nu)?.d;
    let v_list = v.unwrap_or_else(|| (1..=3).map(|k| (k * d.0, k * d.1)).collect());
    if v_list.is_empty() {
        return Err(CliError::usage("--v needs at least one vector"));
    }
    if closing {
        let rep = nu_closing_evidence(rule, nu, &v_list, limits)?;
        for s in &rep.per_v {
            writeln!(
                out,
                "slice v={} k={}: left={:?} right={:?}",
                fmt_cell(s.v),
                s.k,
                s.left.answer,
                s.right.answer
            )
            .map_err(io)?;
        }
        match &rep.outcome {
            EvidenceOutcome::Refuted { v, witness } => {
                let normal = (-nu.0, -nu.1);
                writeln!(
                    out,
                    "closing-evidence nu={}: REFUTED v={} witness verified={}",
                    fmt_cell(nu),
                    fmt_cell(*v),
                    witness.verify(rule, &[normal])
                )
                .map_err(io)?;
                for (name, x) in [("a", &witness.a), ("b", &witness.b)] {
                    writeln!(
                        out,
                        "witness {name} lines: left={} middle={} right={} start={}",
                        fmt_word(&x.left),
                        fmt_word(&x.middle),
                        fmt_word(&x.right),
                        x.start
                    )
                    .map_err(io)?;
                }
                code = EXIT_REFUTED;
            }
            EvidenceOutcome::Supporting => writeln!(out, "closing-evidence nu={}: SUPPORTING", fmt_cell(nu)).map_err(io)?,
            EvidenceOutcome::Inconclusive => {
                writeln!(out, "closing-evidence nu={}: INCONCLUSIVE", fmt_cell(nu)).map_err(io)?
            }
        }
    }
    if sensitivity {
        let v = v_list[0];
        let rep = quasi_sensitivity_check(rule, nu, v, BlockingBounds::default(), limits)?;
        let tag = match &rep.outcome {
            SensitivityOutcome::SensitiveEvidence => "SENSITIVE-EVIDENCE".to_string(),
            SensitivityOutcome::NotSensitiveEvidence(b) => {
                format!("NOT-SENSITIVE-EVIDENCE word={} offset={}", fmt_word(&b.word), b.offset)
            }
            SensitivityOutcome::Unknown(_) => "UNKNOWN".to_string(),
        };
        writeln!(out, "sensitivity nu={} v={} s={}: {tag}", fmt_cell(nu), fmt_cell(v), rep.s).map_err(io)?;
    }
    Ok(code)
}
