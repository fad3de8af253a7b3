//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use calab::ca::{builtin, Alphabet, LocalRule2D, PeriodicConfig1D, RuleTable1D, RuleTable2D, TorusConfig2D};
use calab::dyn1d::{check_closing, closing_oracle, is_leftmost_permutive, is_rightmost_permutive, ClosingAnswer, Side};
use calab::dyn2d::{
    count_rectangles, is_gamma_permutive, nu_closing_evidence, quasi_expansivity_certificate, quasi_sensitivity_check,
    BlockingBounds, CountMode, EvidenceOutcome, SensitivityOutcome,
};
use calab::lattice::{det, LatticeTorus};
use calab::reduction::{bounded_closing_probe, build_reduction, build_witness, check_witness_windows, ProbeBounds, WitnessKind};
use calab::slicing::{build_family, build_sliced_rule, periodic_members, psi};
use calab::stretch::{build_shape, stretch_tileset, verify_isomorphism};
use calab::wang::{
    attach_space_filling_path, generate_hierarchy, side_for_step, tiles_square, Anchor, SearchOutcome, Tile, TileSet,
};
use calab::{Cell, Limits};
use calab_cli::pbm::Bitmap;
use calab_cli::rulefile::{builtin_by_name, emit_rule, parse_rule, Rule};
use calab_cli::tilefile::{emit_tiles, parse_tiles};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn limits() -> Limits {
    Limits::default()
}

fn random_rule(rng: &mut ChaCha8Rng) -> RuleTable2D {
    RuleTable2D::moore(Alphabet::BINARY, 1, |_| rng.gen_range(0..2)).unwrap()
}

/// `Ψ(F c) = F*(Ψ c)` on every `v`-periodic configuration of the 6×6 torus.
fn conjugacy_holds(rule: &RuleTable2D, nu: Cell, v: Cell) -> Result<usize, String> {
    let sliced = ok(build_sliced_rule(rule, nu, v, &limits()))?;
    let mut n = 0;
    for c in ok(periodic_members(Alphabet::BINARY, v, 6, 6, &limits()))? {
        let lhs = ok(psi(&ok(rule.apply(&c))?, &sliced))?;
        let rhs = ok(sliced.rule.apply(&ok(psi(&c, &sliced))?))?;
        ensure(lhs == rhs, || format!("Ψ∘F ≠ F*∘Ψ for nu={nu:?} v={v:?} at {:?}", c.cells()))?;
        n += 1;
    }
    Ok(n)
}

fn c1_conjugacy() -> Outcome {
    let xc = builtin::xor_corners(Alphabet::BINARY);
    let mut configs = conjugacy_holds(&xc, (1, 1), (3, -3))?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let nus = [(1, 1), (1, 0), (0, 1), (1, -1), (2, 1)];
    for i in 0..20 {
        let rule = random_rule(&mut rng);
        let nu = nus[i % nus.len()];
        let d = ok(build_family(nu))?.d;
        for k in 1..=2 {
            configs += conjugacy_holds(&rule, nu, (k * d.0, k * d.1))?;
        }
    }
    Ok(format!("xor-corners k=3 and 20 random rules with k=1,2; {configs} configurations"))
}

fn c2_example() -> Outcome {
    let rule = builtin::xor_corners(Alphabet::BINARY);
    let lim = limits();
    for (g, want) in [((1, 1), true), ((-1, -1), true), ((1, -1), false)] {
        let got = ok(is_gamma_permutive(&rule, g, &lim))?;
        ensure(got == want, || format!("gamma {g:?}: {got}"))?;
    }
    ensure(ok(quasi_expansivity_certificate(&rule, &lim))?.is_some(), || "no quasi-expansivity certificate".into())?;
    let nu = (1, -1);
    let d = ok(build_family(nu))?.d;
    let v_list: Vec<Cell> = (1..=3).map(|k| (k * d.0, k * d.1)).collect();
    match ok(nu_closing_evidence(&rule, nu, &v_list, &lim))?.outcome {
        EvidenceOutcome::Refuted { witness, .. } => {
            ensure(witness.verify(&rule, &[(-nu.0, -nu.1)]), || "refuting witness does not verify".into())?
        }
        other => return Err(format!("closing evidence at (1,-1): {other:?}")),
    }
    let sens = |nu: Cell, v: Cell| -> Result<SensitivityOutcome, String> {
        Ok(ok(quasi_sensitivity_check(&rule, nu, v, BlockingBounds::default(), &lim))?.outcome)
    };
    let a = sens((1, 1), (1, -1))?;
    ensure(a == SensitivityOutcome::SensitiveEvidence, || format!("nu=(1,1): {a:?}"))?;
    let b = sens((1, -1), (1, 1))?;
    ensure(matches!(b, SensitivityOutcome::NotSensitiveEvidence(_)), || format!("nu=(1,-1): {b:?}"))?;
    Ok("permutivity, certificate, refutation at (1,-1), sensitivity at (1,1) and (1,-1)".into())
}

fn c3_closing_oracle() -> Outcome {
    let (mut not_closing, mut oracle_witnesses) = (0, 0);
    for n in 0..=255u8 {
        let rule = RuleTable1D::elementary(n);
        for side in [Side::Left, Side::Right] {
            let v = check_closing(&rule, side, &limits());
            if v.answer == ClosingAnswer::NotClosing {
                not_closing += 1;
                let w = v.witness.as_ref().ok_or_else(|| format!("rule {n} {side:?}: no witness"))?;
                ensure(w.verify(&rule, side), || format!("rule {n} {side:?}: witness fails"))?;
            }
            if let Some(w) = closing_oracle(&rule, side, 6, 4) {
                oracle_witnesses += 1;
                ensure(w.verify(&rule, side), || format!("rule {n} {side:?}: oracle witness fails"))?;
                ensure(v.answer == ClosingAnswer::NotClosing, || {
                    format!("rule {n} {side:?}: decider says {:?}, oracle has a witness", v.answer)
                })?;
            }
            ensure(v.answer != ClosingAnswer::Unknown, || format!("rule {n} {side:?}: unknown"))?;
        }
    }
    Ok(format!("512 verdicts, {not_closing} not closing, {oracle_witnesses} oracle witnesses, 0 disagreements"))
}

fn c4_bipermutive() -> Outcome {
    let mut rules = 0;
    let configs: Vec<PeriodicConfig1D> = (0..64u32)
        .map(|c| PeriodicConfig1D::new(Alphabet::BINARY, (0..6).map(|i| (c >> i) & 1).collect()).unwrap())
        .collect();
    for n in 0..=255u8 {
        let rule = RuleTable1D::elementary(n);
        if !(is_leftmost_permutive(&rule) && is_rightmost_permutive(&rule)) {
            continue;
        }
        rules += 1;
        let orbits: Vec<Vec<PeriodicConfig1D>> = configs
            .iter()
            .map(|c| {
                std::iter::successors(Some(c.clone()), |x| Some(rule.apply(x).unwrap()))
                    .take(7)
                    .collect()
            })
            .collect();
        for i in 0..64 {
            for j in i + 1..64 {
                let differs = (0..7).any(|t| (-1..=1).any(|p| orbits[i][t].get(p) != orbits[j][t].get(p)));
                ensure(differs, || format!("rule {n}: configs {i} and {j} agree on [-1,1] for 6 steps"))?;
            }
        }
    }
    ensure(rules > 0, || "no bipermutive rules".into())?;
    Ok(format!("{rules} bipermutive rules, 2016 pairs each"))
}

fn c5_entropy() -> Outcome {
    let lim = limits();
    let xc = builtin::xor_corners(Alphabet::BINARY);
    let r1 = ok(count_rectangles(&xc, 1, 2, CountMode::Exact, &lim))?;
    let r2 = ok(count_rectangles(&xc, 2, 2, CountMode::Exact, &lim))?;
    ensure(r2.ratio > r1.ratio, || format!("xor-corners t=2: {} then {}", r1.ratio, r2.ratio))?;
    let id = builtin::identity(Alphabet::BINARY, 1);
    let mut ratios = Vec::new();
    for w in 1..=2 {
        let r: Vec<f64> = (1..=2)
            .map(|t| ok(count_rectangles(&id, w, t, CountMode::Exact, &lim)).map(|r| r.ratio))
            .collect::<Result<_, _>>()?;
        ensure(r[1] < r[0], || format!("identity w={w}: {r:?}"))?;
        ratios.push(r);
    }
    Ok(format!(
        "xor-corners N(1,2)={} N(2,2)={}; identity ratios by w then t {ratios:?}",
        r1.count, r2.count
    ))
}

fn c6_hierarchy() -> Outcome {
    let lim = limits();
    for n in 1..=5u32 {
        let h = ok(generate_hierarchy(n, Anchor::SWCorner, &lim))?;
        let want = if n == 1 { 3 } else { 2 * side_for_step(n - 1) + 1 };
        ensure(h.side() == want, || format!("step {n}: side {}", h.side()))?;
        for (anchor, paths) in [(Anchor::SWCorner, 1), (Anchor::SouthMid, 2), (Anchor::Center, 4)] {
            let h = ok(generate_hierarchy(n, anchor, &lim))?;
            let cover = attach_space_filling_path(&h);
            ensure(cover.paths().len() == paths, || format!("step {n} {anchor:?}: {} paths", cover.paths().len()))?;
            let mut seen = HashSet::new();
            for p in cover.paths() {
                for &c in p {
                    ensure(seen.insert(c), || format!("step {n} {anchor:?}: {c:?} visited twice"))?;
                }
            }
            ensure(seen.len() == h.side() * h.side(), || format!("step {n} {anchor:?}: coverage {}", seen.len()))?;
        }
    }
    Ok("sides 3,7,15,31,63; 1/2/4 disjoint covering paths".into())
}

fn c7_stretch() -> Outcome {
    let shape = ok(build_shape((1, 3), (4, 3)))?;
    ensure(shape.neighbor_count() == 6 && shape.overlap_suppressed(), || {
        format!("neighbors {} suppressed {}", shape.neighbor_count(), shape.overlap_suppressed())
    })?;
    ensure(shape.len() as i64 == det(shape.nu(), shape.mu()).abs(), || format!("|cells| = {}", shape.len()))?;
    let (p, q) = (2, 3);
    let torus = ok(LatticeTorus::new(&[shape.translate((p, 0)), shape.translate((0, q))]))?;
    let mut hits = vec![0u32; torus.cells()];
    for e in 0..p {
        for n in 0..q {
            let off = shape.translate((e, n));
            for &c in shape.cells() {
                hits[torus.index((c.0 + off.0, c.1 + off.1))] += 1;
            }
        }
    }
    ensure(hits.iter().all(|&h| h == 1), || "macro-tiles do not partition the torus".into())?;

    let cb = ok(TileSet::new(vec![Tile::new(0, 0, 1, 0, 1), Tile::new(1, 1, 0, 1, 0)]))?;
    let sts = ok(stretch_tileset(&cb, &shape, &limits()))?;
    let rep = ok(verify_isomorphism(&cb, &sts, 2, 2, false, &limits()))?;
    ensure(rep.holds() && rep.base_tilings > 0, || format!("{rep:?}"))?;
    Ok(format!(
        "6 neighbors, {} cells, checkerboard 2x2 torus: {} = {} tilings",
        shape.len(),
        rep.base_tilings,
        rep.anchored_tilings
    ))
}

fn c8_reduction() -> Outcome {
    let lim = limits();
    let one = ok(TileSet::new(vec![Tile::new(0, 0, 0, 0, 0)]))?;
    let red = ok(build_reduction(&one, (0, 1), (1, 0), 3, &lim))?;
    for kind in [WitnessKind::MuAsymptotic, WitnessKind::NuMuAsymptotic] {
        let w = ok(build_witness(&red, kind, &lim))?;
        let bad = ok(check_witness_windows(&red, &w, 8, &lim))?;
        ensure(bad.is_none(), || format!("{kind:?}: images differ on {bad:?}"))?;
    }
    let stripe = ok(TileSet::new(vec![Tile::new(0, 0, 1, 0, 0), Tile::new(1, 0, 2, 0, 1)]))?;
    ensure(matches!(tiles_square(&stripe, 3, &lim), SearchOutcome::Exhausted), || "stripe tiles 3x3".into())?;
    let red = ok(build_reduction(&stripe, (0, 1), (1, 0), 3, &lim))?;
    let rep = bounded_closing_probe(&red, &ProbeBounds::default(), &lim);
    ensure(rep.with_valid_block == 0, || format!("{} witnesses carry valid 3x3 blocks", rep.with_valid_block))?;
    Ok(format!(
        "uniform tau: both witnesses equal on windows up to 8x8; refuted tau: {} pairs, {} equal-image, 0 with valid blocks",
        rep.pairs_tested, rep.equal_image_pairs
    ))
}

fn c9_infrastructure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..50 {
        let rule = random_rule(&mut rng);
        let (p, q) = (rng.gen_range(1..=7), rng.gen_range(1..=7));
        let c = ok(TorusConfig2D::from_fn(Alphabet::BINARY, p, q, |_| rng.gen_range(0..2)))?;
        let v = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let lhs = ok(rule.apply(&c.shift(v)))?;
        let rhs = ok(rule.apply(&c))?.shift(v);
        ensure(lhs == rhs, || format!("rule {i}: F∘σ ≠ σ∘F on {p}x{q} torus, v={v:?}"))?;
    }

    let mut rules: Vec<Rule> = ["identity", "xor-corners", "and-min", "shift:1,-1", "xor1d", "eca:110"]
        .iter()
        .map(|n| builtin_by_name(n).unwrap())
        .collect();
    rules.push(Rule::TwoD(random_rule(&mut rng)));
    rules.push(Rule::OneD(ok(RuleTable1D::new(
        ok(Alphabet::new(40, &Limits { max_alphabet: 64, ..limits() }))?,
        0,
        (0..40).rev().collect(),
    ))?));
    for r in &rules {
        let text = emit_rule(r);
        let again = emit_rule(&ok(parse_rule(&text))?);
        ensure(again == text, || format!("rule file round trip differs:\n{text}"))?;
    }
    let tiles = "tile 0 N=0 S=1 E=2 W=3\ntile 1 N=1 S=0 E=3 W=2 dir=E\ntile 7 N=12 S=12 E=0 W=0 dir=S\n";
    let t = emit_tiles(&ok(parse_tiles(tiles))?);
    ensure(t == tiles, || format!("tile file round trip differs:\n{t}"))?;
    let bm = Bitmap::from_south_up(73, 5, |x, y| (x * y + x) % 3 == 0).to_pbm();
    ensure(ok(Bitmap::parse(&bm))?.to_pbm() == bm, || "PBM round trip differs".into())?;
    Ok(format!("50 shift-commutation checks; {} rule files, tile file and PBM round trips", rules.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 conjugacy", c1_conjugacy, Duration::from_secs(60)),
        ("2 example rule", c2_example, Duration::from_secs(30)),
        ("3 1D closing vs oracle", c3_closing_oracle, Duration::from_secs(300)),
        ("4 bipermutive divergence", c4_bipermutive, Duration::from_secs(120)),
        ("5 entropy surrogate", c5_entropy, Duration::from_secs(120)),
        ("6 hierarchy and paths", c6_hierarchy, Duration::from_secs(30)),
        ("7 stretch", c7_stretch, Duration::from_secs(120)),
        ("8 reduction", c8_reduction, Duration::from_secs(300)),
        ("9 infrastructure", c9_infrastructure, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let took = start.elapsed();
        let result = match result {
            Ok(d) if took > budget => Err(format!("{d}; over time budget {budget:?}")),
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {name} ({:.2}s): {detail}", took.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({:.2}s): {detail}", took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
