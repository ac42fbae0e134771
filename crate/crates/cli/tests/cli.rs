use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn wpda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wpda"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Writes a fixture and its parenthesis file into `dir`.
fn fixture(dir: &Path, name: &str) -> (PathBuf, PathBuf) {
    let fst = dir.join(format!("{name}.fst"));
    let par = dir.join(format!("{name}.par"));
    fs::write(&fst, stdout(&wpda(&["fixture", name]))).unwrap();
    fs::write(&par, stdout(&wpda(&["fixture", name, "--parens"]))).unwrap();
    (fst, par)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn two_best_of_the_trap_with_every_algorithm() {
    let dir = TempDir::new().unwrap();
    let (fst, par) = fixture(dir.path(), "h2trap");
    for algo in ["lazy", "astar-h1", "astar-h2", "expand"] {
        let o = wpda(&[
            "kshortest",
            "-a",
            s(&fst),
            "-p",
            s(&par),
            "-k",
            "2",
            "--algo",
            algo,
        ]);
        assert_eq!(code(&o), 0, "{algo}");
        assert_eq!(stdout(&o), "3\ta a a\n4\tb b b b\n", "{algo}");
    }
    let o = wpda(&[
        "kshortest",
        "-a",
        s(&fst),
        "-p",
        s(&par),
        "-k",
        "1",
        "--keep-parens",
    ]);
    assert_eq!(stdout(&o), "3\t( a a ) a\n");
}

#[test]
fn fewer_lines_when_paths_run_out() {
    let dir = TempDir::new().unwrap();
    let (fst, par) = fixture(dir.path(), "h2trap");
    let o = wpda(&["kshortest", "-a", s(&fst), "-p", s(&par), "-k", "10"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn arcs_and_stats() {
    let dir = TempDir::new().unwrap();
    let (fst, par) = fixture(dir.path(), "h2trap");
    let stats = dir.path().join("stats.txt");
    let o = wpda(&[
        "kshortest",
        "-a",
        s(&fst),
        "-p",
        s(&par),
        "--arcs",
        "--stats",
        "--stats-out",
        s(&stats),
    ]);
    assert_eq!(stdout(&o), "3\t0:(:0 1:a:1 2:a:1 4:):0 6:a:1\n");
    let report = fs::read_to_string(&stats).unwrap();
    assert!(report.contains("pops=") && report.contains("precompute_ms="));
}

#[test]
fn intersect_then_search() {
    let dir = TempDir::new().unwrap();
    let (fst, par) = fixture(dir.path(), "anbn");
    let fsa = dir.path().join("aabb.fsa");
    fs::write(&fsa, "0\t1\ta\n1\t2\ta\n2\t3\tb\n3\t4\tb\n4\n").unwrap();
    let product = dir.path().join("product.fst");
    let o = wpda(&[
        "intersect",
        "-a",
        s(&fst),
        "-p",
        s(&par),
        "--fsa",
        s(&fsa),
        "-o",
        s(&product),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(&product).unwrap().lines().count(), 9);
    let o = wpda(&["kshortest", "-a", s(&product), "-p", s(&par), "-k", "1"]);
    assert_eq!(stdout(&o), "0\ta a b b\n");
}

#[test]
fn distances() {
    let dir = TempDir::new().unwrap();
    let (fst, par) = fixture(dir.path(), "h2trap");
    assert_eq!(
        stdout(&wpda(&["distance", "-a", s(&fst), "-p", s(&par)])),
        "3\n"
    );
    let (fst, par) = fixture(dir.path(), "anbn");
    let o = wpda(&[
        "distance",
        "-a",
        s(&fst),
        "-p",
        s(&par),
        "--string",
        "a a b",
    ]);
    assert_eq!(stdout(&o), "none\n");
    let o = wpda(&["distance", "-a", s(&fst), "-p", s(&par), "--string", "a b"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn unbounded_input_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (fst, par) = fixture(dir.path(), "anbn");
    let o = wpda(&["validate", "-a", s(&fst), "-p", s(&par)]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("stack=limit-exceeded"));
    let o = wpda(&["kshortest", "-a", s(&fst), "-p", s(&par)]);
    assert_eq!(code(&o), 2);
    let (fst, par) = fixture(dir.path(), "nested");
    let o = wpda(&["validate", "-a", s(&fst), "-p", s(&par)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("stack=bounded depth=2"));
}

#[test]
fn exit_heuristic_refuses_negative_weights() {
    let dir = TempDir::new().unwrap();
    let fst = dir.path().join("neg.fst");
    fs::write(&fst, "0\t1\ta\t-1\n1\n").unwrap();
    let o = wpda(&["kshortest", "-a", s(&fst), "--algo", "astar-h2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("heuristic"));
    let o = wpda(&["kshortest", "-a", s(&fst), "--algo", "astar-h1"]);
    assert_eq!(stdout(&o), "-1\ta\n");
}

#[test]
fn malformed_files() {
    let dir = TempDir::new().unwrap();
    let fst = dir.path().join("bad.fst");
    fs::write(&fst, "0\t1\ta\tnot-a-weight\n1\n").unwrap();
    let o = wpda(&["distance", "-a", s(&fst)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    let (fst, _) = fixture(dir.path(), "anbn");
    let par = dir.path().join("dup.par");
    fs::write(&par, "(\t)\n(\t]\n").unwrap();
    assert_eq!(code(&wpda(&["validate", "-a", s(&fst), "-p", s(&par)])), 2);
    assert_eq!(code(&wpda(&["distance", "-a", "/nonexistent/file"])), 1);
    assert_eq!(
        code(&wpda(&["kshortest", "--algo", "dijkstra", "-a", s(&fst)])),
        1
    );
}

#[test]
fn expansion_hits_its_limit() {
    let dir = TempDir::new().unwrap();
    let (fst, par) = fixture(dir.path(), "anbn");
    let o = wpda(&[
        "expand",
        "-a",
        s(&fst),
        "-p",
        s(&par),
        "--config-limit",
        "100",
    ]);
    assert_eq!(code(&o), 3);
    let (fst, par) = fixture(dir.path(), "nested");
    let o = wpda(&["expand", "-a", s(&fst), "-p", s(&par)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("<eps>"));
}

#[test]
fn bench_is_reproducible_without_timing() {
    let args = [
        "bench",
        "--sizes",
        "400",
        "--k-values",
        "1,50",
        "--algos",
        "lazy,astar-h1",
        "--seed",
        "4",
        "--no-timing",
    ];
    let a = wpda(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let table = stdout(&a);
    assert_eq!(table.lines().count(), 5);
    assert_eq!(table, stdout(&wpda(&args)));
    let timed = wpda(&[
        "bench",
        "--sizes",
        "400",
        "--k-values",
        "1",
        "--algos",
        "lazy",
    ]);
    let header = stdout(&timed).lines().next().unwrap().to_string();
    assert!(header.ends_with("total_ms"));
}
