use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use cubeknot::render::parse_grid_ascii;
use cubeknot::GridDiagram;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubeknot"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_kmin5(dir: &Path) -> String {
    let out = run(&["construct", "kmin-grid", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let path = dir.join("kmin5.grid");
    fs::write(&path, &out.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn kmax_cube_pipes_into_validate() {
    let cube = run(&["construct", "kmax-cube", "--p", "5"]);
    assert_eq!(cube.status.code(), Some(0));
    assert!(stdout(&cube).starts_with("cube 7\n"));
    let v = run_stdin(&["validate", "-"], &cube.stdout);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn kmin_invariants_and_no_lift() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_kmin5(dir.path());
    let inv = run(&["invariants", &grid, "--hand", "left"]);
    assert_eq!(inv.status.code(), Some(0));
    assert!(stdout(&inv).contains("tb=-10 rot=-3"), "{}", stdout(&inv));

    let lift = run(&["lift", &grid]);
    assert_eq!(lift.status.code(), Some(1));
    assert!(stdout(&lift).contains("no lift"));

    let count = run(&["lift", &grid, "--count"]);
    assert_eq!(stdout(&count).trim(), "0");

    let detect = run(&["detect", &grid]);
    assert_eq!(detect.status.code(), Some(1));
    assert!(stdout(&detect).contains("type 1"));
}

#[test]
fn stabilized_lift_validates() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_kmin5(dir.path());
    let cube = dir.path().join("kmin5.cube");
    let out = run(&["lift", &grid, "--stabilize", "--out", cube.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["validate", cube.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn jones_of_trefoil() {
    let g = run(&["construct", "kmin-grid", "--p", "3"]);
    let j = run_stdin(&["jones", "-"], &g.stdout);
    assert_eq!(stdout(&j).trim(), "-1*q^-8 + 1*q^-6 + 1*q^-2");
}

#[test]
fn exit_codes() {
    let bad = run_stdin(&["validate", "-"], b"grid 2\nX 0 0\nO 1 0\n");
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("X row not a permutation"));

    let broken_cube = run_stdin(&["validate", "-"], b"cube 2\nX 0 0 0\nX 1 1 1\nY 0 1 0\n");
    assert_eq!(broken_cube.status.code(), Some(1));

    assert_eq!(run(&["validate", "/nonexistent/file.grid"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "kmax-grid", "--p", "4"]).status.code(), Some(2));
}

#[test]
fn ascii_render_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_kmin5(dir.path());
    let art = dir.path().join("kmin5.txt");
    let out = run(&["render", &grid, "--format", "ascii", "--out", art.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let original: GridDiagram = fs::read_to_string(&grid).unwrap().parse().unwrap();
    assert_eq!(parse_grid_ascii(&fs::read_to_string(&art).unwrap()).unwrap(), original);

    let svg = dir.path().join("kmin5.svg");
    run(&["render", &grid, "--format", "svg", "--out", svg.to_str().unwrap()]);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn experiment_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let ck = dir.path().join("b.ckpt");
    let base = ["experiment", "--p", "3", "--rot", "-1", "--size", "5"];
    let ra = run(&[&base[..], &["--out", a.to_str().unwrap(), "--jobs", "1"]].concat());
    let rb = run(&[
        &base[..],
        &["--out", b.to_str().unwrap(), "--jobs", "3", "--resume", ck.to_str().unwrap()],
    ]
    .concat());
    assert_eq!(ra.status.code(), Some(0));
    assert_eq!(rb.status.code(), Some(0));
    assert!(stdout(&ra).contains("c_ℓ ≤ 5"));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
