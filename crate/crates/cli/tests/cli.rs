use std::fs;
use std::path::Path;
use std::process::{Command, Output};

/// Runs `percolab` with whitespace-separated arguments and expects success.
fn percolab(dir: &Path, args: &str) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_percolab"))
        .args(args.split_whitespace())
        .current_dir(dir)
        .env("RUST_BACKTRACE", "0")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "percolab {args} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout(dir: &Path, args: &str) -> String {
    String::from_utf8(percolab(dir, args).stdout).unwrap()
}

#[test]
fn coloring_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    percolab(d, "gen planted3col --n 8 --seed 5 --out g.edge");
    percolab(d, "reduce blowup g.edge --R 3 --out b.edge --cloudmap b.cm");
    let b = fs::read_to_string(d.join("b.edge")).unwrap();
    assert!(b.starts_with("p edge 24 "));
    percolab(d, "percolate b.edge --mode edge --p 0.5 --seed 9 --out pb.edge");
    assert_eq!(stdout(d, "solve colorable pb.edge --out w.txt"), "true\n");
    let dec = stdout(d, "decode majority --witness w.txt --cloudmap b.cm --original g.edge");
    assert!(dec.starts_with("p witness majority 8\n"));
}

#[test]
fn percolation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    percolab(d, "gen graph --n 10 --seed 1 --out g.edge");
    let run = |name: &str| {
        percolab(
            d,
            &format!("percolate g.edge --mode vertex --p 0.6 --seed 4 --trial 2 --out {name}"),
        );
        fs::read_to_string(d.join(name)).unwrap()
    };
    assert_eq!(run("a.edge"), run("b.edge"));
}

#[test]
fn hamiltonian_projection() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("c.edge"), "p arc 4 4\na 1 2\na 2 3\na 3 4\na 4 1\n").unwrap();
    percolab(d, "reduce ham c.edge --R 2 --out h.edge --cloudmap h.cm");
    assert_eq!(stdout(d, "solve ham h.edge --out w.txt"), "true\n");
    let dec = stdout(
        d,
        "decode ham-project --witness w.txt --cloudmap h.cm --original c.edge",
    );
    assert_eq!(dec, "p witness ham-project 4\n1 2 3 4\n");
}

#[test]
fn csp_value_survives_blowup() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    percolab(d, "gen kcsp --n 4 --m 6 --k 2 --seed 3 --out f.csp");
    let val = stdout(d, "solve maxcsp f.csp");
    percolab(d, "reduce csp f.csp --R 2 --out fb.csp --cloudmap fb.cm");
    assert_eq!(stdout(d, "solve maxcsp fb.csp --out w.txt"), val);
    let out = percolab(
        d,
        "decode csp-expected --witness w.txt --cloudmap fb.cm --original f.csp",
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains(&format!("expectation: {}", val.trim())));
}

#[test]
fn subset_sum_gadget_and_lift() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("s.ss"), "p ss 2\nt 8\ni 3\ni 5\n").unwrap();
    percolab(d, "solve ss s.ss --out w.txt");
    percolab(d, "reduce ss s.ss --R 1 --out g.ss --cloudmap g.cm");
    assert_eq!(stdout(d, "solve ss g.ss"), "true\n");
    let lifted = stdout(d, "decode ss-lift --witness w.txt --cloudmap g.cm --original s.ss");
    assert!(lifted.starts_with("p witness ss-lift "));
}

#[test]
fn experiment_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("s.ss"), "p ss 1\nt 1\ni 1\n").unwrap();
    fs::write(
        d.join("coin.exp"),
        "name=coin\noriginal=s.ss\nmode=item\np=0.5\nseed=3\nproperty=ss_feasible\ntrials=20\n",
    )
    .unwrap();
    let run = |threads: &str, out: &str| {
        percolab(d, &format!("--threads {threads} experiment coin.exp --out {out}"));
        fs::read_to_string(d.join(out)).unwrap()
    };
    let a = run("1", "a.csv");
    assert!(a.starts_with("trial,seed,survivors,verdict,detail\n"));
    assert_eq!(a.lines().count(), 22);
    assert_eq!(a, run("3", "b.csv"));
}

#[test]
fn plan_reports_r() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(dir.path(), "plan csp_clause --n 4 --p 0.5 --k 2 --delta 1");
    assert!(out.starts_with("R = 16\n"));
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.edge"), "p edge 2 1\ne 1 3\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_percolab"))
        .args(["solve", "mis", "x.edge"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
