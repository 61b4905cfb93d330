use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn wheelix(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wheelix"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run wheelix")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

/// Acyclic DFA with no Wheeler order: the `a`-edge into 4 sits between the
/// two `b`-edges into 6.
const TYPE1: &str = "wnfa v1
alphabet a b
states 7
source 0
accepting 5 6
edge 0 1 a
edge 0 2 b
edge 1 3 a
edge 2 4 a
edge 3 5 b
edge 1 6 b
edge 4 6 b
";

const BPLUS_A: &str = "wnfa v1
alphabet a b
states 3
source 0
accepting 2
edge 0 1 b
edge 1 1 b
edge 1 2 a
";

#[test]
fn gen_worst_case_file() {
    let dir = TempDir::new().unwrap();
    let o = wheelix(dir.path(), &["gen", "worst-case", "3", "-o", "w3.wnfa"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("w3.wnfa")).unwrap();
    assert!(text.contains("states 17\n"));
}

#[test]
fn sort_reports_type1() {
    let dir = TempDir::new().unwrap();
    put(&dir, "t.wnfa", TYPE1);
    for args in [&["sort", "t.wnfa"][..], &["sort", "--online", "t.wnfa"]] {
        let o = wheelix(dir.path(), args);
        assert_eq!(code(&o), 1);
        assert!(stderr(&o).contains("NOT-WHEELER(type1)"), "{}", stderr(&o));
        assert!(stdout(&o).is_empty());
    }
    let o = wheelix(dir.path(), &["check", "t.wnfa"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "NOT-WHEELER(type1)\n");
}

#[test]
fn sort_and_check_bplus_a() {
    let dir = TempDir::new().unwrap();
    put(&dir, "b.wnfa", BPLUS_A);
    let o = wheelix(dir.path(), &["sort", "b.wnfa"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "order 0 2 1\n");
    let o = wheelix(dir.path(), &["check", "b.wnfa"]);
    assert_eq!(stdout(&o), "WHEELER\norder 0 2 1\n");
    // The online sorter needs an acyclic input.
    let o = wheelix(dir.path(), &["sort", "--online", "b.wnfa"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("NOT-WHEELER(cycle)"));
    put(&dir, "bad.order", "order 0 1 2\n");
    let o = wheelix(dir.path(), &["check", "b.wnfa", "--order", "bad.order"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn check_two_nfa_and_unsupported() {
    let dir = TempDir::new().unwrap();
    put(&dir, "n2.wnfa", "wnfa v1\nalphabet a b\nstates 5\nsource 0\naccepting 3 4\nedge 0 1 a\nedge 0 2 a\nedge 1 3 b\nedge 2 3 b\nedge 2 4 b\n");
    let o = wheelix(dir.path(), &["check", "n2.wnfa", "-o", "n2.order"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "WHEELER\n");
    let o = wheelix(dir.path(), &["determinize", "n2.wnfa", "n2.order", "-o", "d.wnfa"]);
    assert_eq!(code(&o), 0);
    let o = wheelix(dir.path(), &["check", "d.wnfa", "--order", "d.order"]);
    assert_eq!(code(&o), 0);
    put(&dir, "n3.wnfa", "wnfa v1\nalphabet a\nstates 4\nsource 0\naccepting 1\nedge 0 1 a\nedge 0 2 a\nedge 0 3 a\n");
    let o = wheelix(dir.path(), &["check", "n3.wnfa"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("UNSUPPORTED d=3"));
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    put(&dir, "bad.wnfa", "wnfa v1\nalphabet a\nstates two\n");
    let o = wheelix(dir.path(), &["sort", "bad.wnfa"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert_eq!(code(&wheelix(dir.path(), &["sort", "missing.wnfa"])), 2);
    assert_eq!(code(&wheelix(dir.path(), &["sort", "--bogus", "bad.wnfa"])), 2);
    assert_eq!(code(&wheelix(dir.path(), &["frobnicate"])), 2);
}

#[test]
fn pipeline_gen_convert_index_query() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&wheelix(dir.path(), &["gen", "worst-case", "2", "-o", "w.wnfa"])), 0);
    assert_eq!(code(&wheelix(dir.path(), &["dfa2wdfa", "w.wnfa", "-o", "m.wnfa"])), 0);
    let m = fs::read_to_string(dir.path().join("m.wnfa")).unwrap();
    assert!(m.contains("states 17\n"));
    assert_eq!(code(&wheelix(dir.path(), &["equiv", "w.wnfa", "m.wnfa"])), 0);
    assert_eq!(code(&wheelix(dir.path(), &["index", "build", "m.wnfa", "m.order", "-o", "m.idx"])), 0);
    let w = wheelix::format::parse_automaton(&fs::read_to_string(dir.path().join("w.wnfa")).unwrap()).unwrap();
    for word in ["acef", "adbe", "ace", "", "e", "bdf", "aacf"] {
        let o = wheelix(dir.path(), &["index", "query", "m.idx", "--mode", "membership", word]);
        let want = w.naive_accepts(&w.alphabet().parse_word(word).unwrap());
        assert_eq!(code(&o), if want { 0 } else { 1 }, "{word}");
        assert_eq!(stdout(&o), if want { "ACCEPT\n" } else { "REJECT\n" });
    }
    let o = wheelix(dir.path(), &["index", "query", "m.idx", "--mode", "substr", "e"]);
    assert_eq!(code(&o), 0);
    let o = wheelix(dir.path(), &["index", "query", "m.idx", "--mode", "membership", "xyz"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn output_limit() {
    let dir = TempDir::new().unwrap();
    wheelix(dir.path(), &["gen", "worst-case", "4", "-o", "w.wnfa"]);
    let o = wheelix(dir.path(), &["dfa2wdfa", "--max-states", "10", "w.wnfa"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn equiv_negative() {
    let dir = TempDir::new().unwrap();
    put(&dir, "b.wnfa", BPLUS_A);
    put(&dir, "t.wnfa", TYPE1);
    let o = wheelix(dir.path(), &["equiv", "b.wnfa", "t.wnfa"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "NOT-EQUIVALENT\n");
}

#[test]
fn minimize_and_hopcroft() {
    let dir = TempDir::new().unwrap();
    put(&dir, "words.txt", "ab\nbb\nabb\n");
    assert_eq!(code(&wheelix(dir.path(), &["gen", "trie", "words.txt", "-o", "t.wnfa"])), 0);
    assert_eq!(code(&wheelix(dir.path(), &["sort", "t.wnfa", "-o", "t.order"])), 0);
    assert_eq!(code(&wheelix(dir.path(), &["minimize", "t.wnfa", "t.order", "-o", "m.wnfa"])), 0);
    assert_eq!(code(&wheelix(dir.path(), &["check", "m.wnfa", "--order", "m.order"])), 0);
    assert_eq!(code(&wheelix(dir.path(), &["equiv", "t.wnfa", "m.wnfa"])), 0);
    let o = wheelix(dir.path(), &["hopcroft", "t.wnfa"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("states 5\n"), "{}", stdout(&o));
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let runs: Vec<Vec<String>> = (0..2)
        .map(|i| {
            let f = format!("r{i}.wnfa");
            wheelix(dir.path(), &["gen", "random-dfa", "--states", "30", "--sigma", "3", "--seed", "7", "-o", &f]);
            let a = stdout(&wheelix(dir.path(), &["dfa2wdfa", &f]));
            let b = stdout(&wheelix(dir.path(), &["hopcroft", &f]));
            let n = stdout(&wheelix(dir.path(), &["gen", "random-nfa", "--states", "20", "--sigma", "2", "--seed", "3"]));
            vec![fs::read_to_string(dir.path().join(&f)).unwrap(), a, b, n]
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert!(!runs[0][1].is_empty());
}
