use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conjwidth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn reduce_elementary_input() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.txt", "3 Z\n1 2 0\n0 1 0\n0 0 1\n");
    let out = path(&dir, "t.txt");
    let o = run(&[
        "reduce", "--ring", "Z", "--ideal", "2", "--in", &m, "--target", "1,2", "--out", &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let trace = fs::read_to_string(&out).unwrap();
    assert!(trace.contains("# seed=0"));
    let steps = trace.lines().filter(|l| l.starts_with("step ")).count();
    assert!(steps <= 3);
    let o = run(&["replay", &out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("OK"));
}

#[test]
fn reduce_then_replay_round_trips() {
    let dir = TempDir::new().unwrap();
    for (ring, ideal, target, seed) in [
        ("Z", "2", "1,3", "1"),
        ("Z", "4", "3,2", "2"),
        ("Z/7", "1", "2,1", "3"),
        ("F3[x]", "1,1", "1,2", "4"),
    ] {
        let out = path(&dir, "t.txt");
        let o = run(&[
            "reduce", "--ring", ring, "--ideal", ideal, "--target", target, "--seed", seed, "--out", &out,
        ]);
        assert_eq!(o.status.code(), Some(0), "{ring}: {}", stderr(&o));
        let o = run(&["replay", &out]);
        assert_eq!(o.status.code(), Some(0), "{ring}: {}", stderr(&o));
    }
}

#[test]
fn corrupted_trace_is_rejected() {
    let dir = TempDir::new().unwrap();
    let good = path(&dir, "t.txt");
    let o = run(&[
        "reduce", "--ring", "Z", "--ideal", "2", "--target", "2,3", "--seed", "5", "--out", &good,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut lines: Vec<String> = fs::read_to_string(&good).unwrap().lines().map(String::from).collect();
    let at = lines.iter().position(|l| l == "matrix M2").expect("at least one step");
    let mut row: Vec<i64> = lines[at + 2].split(' ').map(|t| t.parse().unwrap()).collect();
    row[0] += 2;
    lines[at + 2] = row.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
    let bad = write(&dir, "bad.txt", &(lines.join("\n") + "\n"));
    let o = run(&["replay", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("replay mismatch at step 1"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1);
}

#[test]
fn identical_runs_give_identical_files() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.txt"), path(&dir, "b.txt"));
    for out in [&a, &b] {
        let o = run(&[
            "reduce", "--ring", "Z", "--ideal", "2", "--target", "3,1", "--seed", "11", "--out", out,
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let (c, d) = (path(&dir, "c.csv"), path(&dir, "d.csv"));
    assert_eq!(
        run(&["census", "--group", "SL3,F2", "--out", &c]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["--sequential", "census", "--group", "SL3,F2", "--out", &d])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(fs::read(&c).unwrap(), fs::read(&d).unwrap());
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["reduce", "--ring", "Z/0", "--ideal", "2", "--target", "1,2"][..],
        &["reduce", "--ring", "Z", "--ideal", "2", "--target", "1-2"],
        &["reduce", "--ring", "Z", "--ideal", "x", "--target", "1,2"],
        &["census", "--group", "SL3,F4"],
        &["census", "--group", "SL3,Z"],
        &["sumid", "--count", "0"],
        &["sumset", "--modulus", "9", "--level", "2"],
        &["census", "--group", "SL3,F2", "--unknown"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn domain_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let central = write(&dir, "c.txt", "4 Z\n-1 0 0 0\n0 -1 0 0\n0 0 -1 0\n0 0 0 -1\n");
    let o = run(&[
        "reduce", "--ring", "Z", "--ideal", "2", "--in", &central, "--target", "1,2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("central"));
    let o = run(&["replay", &path(&dir, "missing.txt")]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["census", "--group", "SL3,F5", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn census_reports_the_budget() {
    let o = run(&["census", "--group", "SL3,F2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# group=SL3(Z/2) ideal=(1) seed=0\nsigma_index,min_ops,min_len,target\n"));
    assert!(text.contains("\"rows\": 1002,"));
    assert!(text.contains("\"unreachable\": 0,"));
    let o = run(&["census", "--group", "SL2,F3", "--kind", "factors"]);
    assert!(stdout(&o).contains("order=24"));
}

#[test]
fn sumid_random_and_single() {
    let o = run(&["sumid", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("OK"));
    let o = run(&["sumid", "--tuple", "-3,1,-2,0,7", "--symbolic"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("OK\n"));
}

#[test]
fn sumset_single_summand_is_the_group() {
    let o = run(&["sumset", "--modulus", "3", "--level", "3", "--max-sums", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("group_order=24"));
    assert!(text.contains("\n1,24,24,"));
}

#[test]
fn decompose_and_norm() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.txt", "3 Z\n1 2 3\n0 1 4\n0 0 1\n");
    let o = run(&["decompose", "--in", &m]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# ring=Z n=3 factors="));
    let cfg = write(
        &dir,
        "n.toml",
        "norm = \"word\"\nring = \"Z/3\"\nn = 2\nsamples = 100\n",
    );
    let o = run(&["norm", "--config", &cfg, "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("seed=4"));
    assert!(stdout(&o).contains("axiom=triangle samples=100 violations=0"));
    let cfg = write(&dir, "z.toml", "norm = \"zero\"\nring = \"Z\"\nn = 3\nsamples = 50\n");
    let o = run(&["norm", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("definiteness"));
}

#[test]
fn help_lists_every_subcommand() {
    let o = run(&["--help"]);
    let text = stdout(&o);
    for sub in ["reduce", "replay", "decompose", "norm", "census", "sumid", "sumset"] {
        assert!(text.contains(sub), "{sub}");
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_conjwidth")).exists());
}
