use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sp-arrange"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "--seed", "9", "--leaves", "12"]);
    let b = run(&["gen", "--seed", "9", "--leaves", "12"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).trim().starts_with(['L', 'S', 'P']));
}

#[test]
fn decompose_diamond() {
    let f = temp("# terminals s t\ns a\na t\ns b\nb t\n");
    let o = run(&["decompose", "--edges", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("P(L(2),L(2))"));
}

#[test]
fn decompose_rejects_k4() {
    let f = temp("a b\na c\na d\nb c\nb d\nc d\n");
    let o = run(&["decompose", "--edges", f.path().to_str().unwrap(), "--source", "a", "--sink", "b"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("not series-parallel"));
}

#[test]
fn arrange_tree_and_edges() {
    let t = temp("P(L(2),L(2))\n");
    let o = run(&["arrange", "--tree", t.path().to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("s 1"));
    assert_eq!(out.lines().last(), Some("# cost 8"));

    let e = temp("# terminals s t\ns a\na t\ns b\nb t\n");
    let o = run(&["arrange", "--edges", e.path().to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().take(2).collect::<Vec<_>>(), ["s 1", "t 2"]);
    assert_eq!(out.lines().last(), Some("# cost 8"));
}

#[test]
fn exact_triangle() {
    let e = temp("s a\na t\ns t\n");
    let o = run(&["exact", "--edges", e.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last(), Some("# cost 4"));
    let o = run(&["exact", "--edges", e.path().to_str().unwrap(), "--limit", "2"]);
    assert!(!o.status.success());
}

#[test]
fn verify_tree_reports_families() {
    let t = temp("P(L(2),L(2))");
    let o = run(&["verify", "--tree", t.path().to_str().unwrap(), "--opt"]);
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    assert!(out.lines().any(|l| l == "theorem PASS 8 336"));
    assert!(out.lines().any(|l| l == "opttotal PASS 42 9"));

    // without --opt only the algorithm side is evaluated
    let o = run(&["verify", "--tree", t.path().to_str().unwrap()]);
    assert!(!stdout(&o).contains("theorem"));
}

#[test]
fn verify_exits_nonzero_on_failure() {
    // the series level stretches the leaf beyond 2(|L|-1)
    let t = temp("S(L(7),P(L(1),L(3),L(1),L(3),L(3)))");
    let o = run(&["verify", "--tree", t.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("algsns FAIL")));
}

#[test]
fn verify_sweep_summary() {
    let o = run(&["verify", "--sweep", "30", "--max-nodes", "8", "--seed", "4"]);
    let out = stdout(&o);
    assert!(out.contains("# instances 30"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("theorem PASS")));
    let seq = run(&["verify", "--sweep", "30", "--max-nodes", "8", "--seed", "4", "--sequential"]);
    assert_eq!(o.stdout, seq.stdout);
}

#[test]
fn bench_table() {
    let o = run(&["bench", "--sizes", "1000,2000", "--seed", "1", "--runs", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 2);
    assert!(out.contains("# ratio"));
}

#[test]
fn bad_input_is_an_error() {
    let t = temp("S(L(1),L(1))");
    let o = run(&["arrange", "--tree", t.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["arrange", "--tree", "/nonexistent/tree"]);
    assert_eq!(o.status.code(), Some(2));
}
