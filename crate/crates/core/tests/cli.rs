use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ulam4")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_small_m() {
    let o = run(&["verify", "--m", "4"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("result: ok"), "{s}");
    assert!(s.contains("budget: 13"));
    assert_eq!(run(&["verify", "--m", "8", "--mode", "printed"]).status.code(), Some(1));
}

#[test]
fn character_and_table() {
    let s = stdout(&run(&["character", "(1,8,28,56)", "--m", "12"]));
    assert!(s.contains("n_min\t23"), "{s}");
    assert!(s.contains("character\t10"), "{s}");
    let t = stdout(&run(&["table", "--max-ch", "13"]));
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines[0], "ch\tt0\tt1\tt2\tt3_min\tt3_max");
    assert_eq!(lines.len(), 34);
    assert!(lines.contains(&"6\t0\t2\t1\t6\t13"));
}

#[test]
fn synth_prints_children() {
    let o = run(&["synth", "--arcs", "0:2,1:1,2:3,3:4", "--target", "[1,0,1,2]"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("question\t")));
    assert!(s.contains("well-shaped"));
}

#[test]
fn trace_is_deterministic() {
    let a = stdout(&run(&["trace", "--m", "6", "--answers", "yyyyyynnnyynnyyy"]));
    let b = stdout(&run(&["trace", "--m", "6", "--answers", "yyyyyynnnyynnyyy"]));
    assert_eq!(a, b);
    let plies = a.lines().filter(|l| !l.starts_with("final")).count();
    assert!(plies <= 16, "{a}");
    assert!(a.lines().last().unwrap().starts_with("final\t"), "{a}");
    let first: Vec<&str> = a.lines().next().unwrap().split('\t').collect();
    assert_eq!(first.len(), 5);
    assert_eq!(first[0], "0");
}

#[test]
fn play_finds_the_secret() {
    for seed in 0..5 {
        let o = run(&["play", "--m", "6", "--seed", &seed.to_string()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("secret\t"));
    }
}

#[test]
fn play_reads_answers_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ulam4"))
        .args(["play", "--m", "1"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"y\ny\ny\ny\ny\ny\ny\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    // consistent answers pin down label 0 early
    assert!(stdout(&o).contains("secret\t0\tquestions\t"), "{}", stdout(&o));
}

#[test]
fn bad_input_is_a_usage_error() {
    assert_eq!(run(&["trace", "--m", "4", "--answers", "yx"]).status.code(), Some(2));
    assert_eq!(run(&["character", "(1,2,3)"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--m", "40"]).status.code(), Some(2));
}
