use std::path::{Path, PathBuf};
use std::process::Command;

use calab_cli::rulefile::{emit_rule, parse_rule};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ca_lab(args: &[&str]) -> Out {
    let o = Command::new(env!("CARGO_BIN_EXE_ca-lab"))
        .args(args)
        .env_remove("CA_LAB_MAX_CELLS")
        .output()
        .expect("spawn ca-lab");
    Out {
        code: o.status.code().unwrap_or(-1),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn entropy_xor_corners_row() {
    let o = ca_lab(&["entropy", "xor-corners", "--w", "1", "--t", "2", "--exact"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let rows: Vec<&str> = o.stdout.lines().skip(1).collect();
    assert_eq!(rows, ["1\t2\t4\t1.0"]);
}

#[test]
fn entropy_sampling_is_seeded() {
    let args = ["entropy", "and-min", "--w", "1,2", "--t", "1,2", "--sample", "40", "--seed", "9"];
    let a = ca_lab(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, ca_lab(&args).stdout);
    assert!(a.stdout.lines().skip(1).all(|l| l.ends_with("\tlower-bound")));
}

#[test]
fn hierarchy_step_one() {
    let o = ca_lab(&["hierarchy", "--step", "1", "--anchor", "sw"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, ".|.\n-+-\n.|.\n");
}

#[test]
fn hierarchy_pbm_marks_cross_cells() {
    let o = ca_lab(&["hierarchy", "--step", "2", "--anchor", "center", "--render", "pbm"]);
    assert_eq!(o.code, 0);
    let bm = calab_cli::pbm::Bitmap::parse(&o.stdout).unwrap();
    assert_eq!((bm.width, bm.height), (7, 7));
    assert_eq!(bm.to_pbm(), o.stdout);
    // middle row and column are the step-2 cross
    assert!((0..7).all(|i| bm.bits[3 * 7 + i] && bm.bits[i * 7 + 3]));
    assert_eq!(ca_lab(&["hierarchy", "--step", "2", "--anchor", "center", "--render", "pbm"]).stdout, o.stdout);
}

#[test]
fn hierarchy_path_counts() {
    for (anchor, n) in [("sw", 1), ("south", 2), ("center", 4)] {
        let o = ca_lab(&["hierarchy", "--step", "2", "--anchor", anchor, "--path"]);
        let last = o.stdout.lines().last().unwrap();
        assert!(last.starts_with(&format!("paths: {n} ")), "{anchor}: {last}");
    }
}

#[test]
fn closing1d_verdicts() {
    let o = ca_lab(&["closing1d", "xor1d", "--side", "right"]);
    assert_eq!((o.code, o.stdout.lines().next()), (0, Some("CLOSING")));

    let o = ca_lab(&["closing1d", "eca:128", "--side", "left", "--oracle", "4,2"]);
    assert_eq!(o.code, 1);
    assert_eq!(o.stdout.lines().next(), Some("NOT-CLOSING"));
    assert!(o.stdout.contains("witness verified: true"));
    assert!(o.stdout.contains("agreement: yes"));
}

#[test]
fn analyze2d_refutes_with_exit_one() {
    let o = ca_lab(&["analyze2d", "xor-corners", "--nu", "1,-1", "--closing-evidence"]);
    assert_eq!(o.code, 1, "{}", o.stdout);
    assert!(o.stdout.contains("REFUTED"));
    assert!(o.stdout.contains("witness verified=true"));

    let o = ca_lab(&["analyze2d", "xor-corners", "--gamma-permutivity"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("gamma-permutive (1,1): true"));
    assert!(o.stdout.contains("gamma-permutive (1,-1): false"));
}

#[test]
fn emitted_sliced_rule_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let o = ca_lab(&["slice", "xor-corners", "--nu", "1,1", "--v", "2,-2", "--emit-rulefile"]);
    assert_eq!(o.code, 0);
    let rule = parse_rule(&o.stdout).unwrap();
    assert_eq!(emit_rule(&rule), o.stdout);
    // the emitted file drives other commands
    let p = write(dir.path(), "sliced.rule", &o.stdout);
    let c = ca_lab(&["closing1d", p.to_str().unwrap(), "--side", "left"]);
    assert_eq!(c.stdout.lines().next(), Some("CLOSING"));
}

#[test]
fn tile_square_and_unsat() {
    let dir = tempfile::tempdir().unwrap();
    let cb = write(dir.path(), "cb.tiles", "tile 0 N=0 S=0 E=1 W=1\ntile 1 N=1 S=1 E=0 W=0\n");
    let o = ca_lab(&["tile", cb.to_str().unwrap(), "--torus", "2,2"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().count(), 2);
    let stripe = write(dir.path(), "s.tiles", "tile 0 N=0 S=0 E=1 W=0\ntile 1 N=0 S=0 E=2 W=1\n");
    assert_eq!(ca_lab(&["tile", stripe.to_str().unwrap(), "--square", "3"]).stdout, "UNSAT\n");
}

#[test]
fn stretch_and_reduce() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "one.tiles", "tile 0 N=0 S=0 E=0 W=0\n");
    let one = one.to_str().unwrap();
    let o = ca_lab(&["stretch", one, "--nu", "1,3", "--mu", "4,3", "--verify", "1,1"]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("neighbors=6 overlap-suppressed=true"));
    assert!(o.stdout.contains("isomorphic=yes"));

    let o = ca_lab(&["reduce", one, "--nu", "0,1", "--mu", "1,0", "--witness", "mu", "--window", "6", "--check"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("equal image on all windows up to 6x6: yes"));
}

#[test]
fn usage_and_format_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.tiles", "tile 0 N=0 S=0 E=0 W=0\ntile 1 N=0 S=0\n");
    let o = ca_lab(&["tile", bad.to_str().unwrap(), "--square", "2"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 2"), "{}", o.stderr);

    assert_eq!(ca_lab(&["entropy", "no-such-rule", "--w", "1", "--t", "1"]).code, 2);
    assert_eq!(ca_lab(&["tile", bad.to_str().unwrap()]).code, 2);
    assert_eq!(ca_lab(&["closing1d", "xor-corners", "--side", "left"]).code, 2);
    assert_eq!(ca_lab(&["frobnicate"]).code, 2);
}

#[test]
fn cell_budget_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_ca-lab"))
        .args(["entropy", "xor-corners", "--w", "3", "--t", "3", "--exact"])
        .env("CA_LAB_MAX_CELLS", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
