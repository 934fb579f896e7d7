use g3_core::graph::Graph;
use std::path::Path;
use std::process::{Command, Output};

fn g3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g3")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_graph(dir: &Path, name: &str, g: &Graph) -> String {
    let path = dir.join(name);
    std::fs::write(&path, g.to_text()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let pet = write_graph(dir.path(), "petersen.txt", &Graph::petersen());
    let ok = g3(&["verify", "--graph", &pet, "--s", "-1", "--p", "-2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("theta 3 1 -2\nmultiplicities 1 5 4\n"));
    let bad = g3(&["verify", "--graph", &pet, "--s", "0", "--p", "0"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).starts_with("violation at ("));
    let full = Graph::petersen().to_text();
    let truncated = dir.path().join("trunc.txt");
    std::fs::write(&truncated, &full[..full.len() / 2 - 1]).unwrap();
    let t = g3(&["verify", "--graph", truncated.to_str().unwrap(), "--s", "-1", "--p", "-2"]);
    assert_eq!(t.status.code(), Some(2));
    let missing = g3(&["verify", "--graph", "/nonexistent/graph", "--s", "0", "--p", "0"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn rank_reports() {
    let dir = tempfile::tempdir().unwrap();
    let pet = write_graph(dir.path(), "p.txt", &Graph::petersen());
    assert_eq!(stdout(&g3(&["rank", "--graph", &pet])), "rank 3\n10\n3\n");
    let k23 = write_graph(dir.path(), "k23.txt", &Graph::complete_bipartite(2, 3));
    let out = stdout(&g3(&["rank", "--graph", &k23]));
    assert!(out.starts_with("rank 6\n"));
    assert!(out.ends_with("2 1\n1 2\n"));
    assert_eq!(stdout(&g3(&["rank", "--m", "7", "--n", "16", "--no-type-matrix"])).lines().next(), Some("rank 2048"));
}

#[test]
fn constructions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r8.txt");
    let r = g3(&["construct", "rank8", "--lambda", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(stdout(&r), "G3(8,1,-2)\nvertices 14 edges 49\n");
    let g = Graph::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(g.order(), 14);

    let w = g3(&["construct", "whole", "--design", "builtin:all-6-of-8", "--x", "5"]);
    assert_eq!(stdout(&w).lines().next(), Some("G3(21,5,-2)"));
    let gf = g3(&["construct", "g-family", "--m", "12", "--n", "25"]);
    assert!(stdout(&gf).starts_with("G3(313,13,-12)\nvertices 625 "));
    assert_eq!(g3(&["construct", "rank8", "--lambda", "3"]).status.code(), Some(1));
    assert_eq!(g3(&["construct", "g-family", "--m", "3", "--n", "10"]).status.code(), Some(1));
    let oa = g3(&["construct", "oa-block", "--m", "2", "--n", "3"]);
    assert_eq!(stdout(&oa).lines().next(), Some("G3(4,1,-2)"));
}

#[test]
fn construct_output_reingests() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.txt");
    let o = out.to_str().unwrap();
    g3(&["construct", "total", "--design", "builtin:sqs8", "--x", "2", "--out", o]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(Graph::parse(&text).unwrap().to_text(), text);
    let cone = dir.path().join("c.txt");
    let c = g3(&["construct", "cone", "--graph", o, "--out", cone.to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(Graph::parse(&std::fs::read_to_string(&cone).unwrap()).unwrap().order(), 23);
}

#[test]
fn tables_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let t = g3(&["tables", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(t.status.code(), Some(0));
    let t2 = std::fs::read_to_string(dir.path().join("table2.csv")).unwrap();
    assert_eq!(t2.lines().nth(1), Some("225,36,10,400,64,0,6,384,9,-6,?,"));
    for i in 2..=5 {
        assert!(dir.path().join(format!("table{i}.csv")).exists());
    }
    let s = stdout(&g3(&["search", "--class", "3a", "--theta1-max", "10"]));
    assert!(s.contains("8,6,15,28,21,4,5,21,5,-2,Y,builtin:all-6-of-8"));
    assert_eq!(g3(&["search", "--class", "5"]).status.code(), Some(1));
    let blocked = dir.path().join("file");
    std::fs::write(&blocked, "").unwrap();
    let io = g3(&["tables", "--out", blocked.join("sub").to_str().unwrap()]);
    assert_eq!(io.status.code(), Some(2));
}

#[test]
fn unknown_input_is_rejected() {
    assert_ne!(g3(&["frobnicate"]).status.code(), Some(0));
    assert_ne!(g3(&["rank", "--bogus"]).status.code(), Some(0));
}

#[test]
fn acceptance_fast_tier() {
    let a = g3(&["acceptance", "--tier", "fast"]);
    let text = stdout(&a);
    assert_eq!(a.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().all(|l| l.starts_with("PASS") || l.starts_with("SKIP")));
}
