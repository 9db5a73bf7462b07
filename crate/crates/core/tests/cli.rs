mod common;

use std::process::Command;

use common::{corpus, documented_invocations, MODELS};

fn modint(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_modint")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn every_subcommand_is_deterministic() {
    for args in documented_invocations() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = modint(&args);
        let second = modint(&args);
        assert_eq!(first, second, "{args:?}");
        assert_eq!(first.0, 0, "{args:?}: {}", first.2);
        assert!(!first.1.is_empty(), "{args:?}");
    }
}

#[test]
fn in_process_runs_match_the_binary() {
    for args in documented_invocations() {
        let out = modint::cli::run(std::iter::once("modint".to_string()).chain(args.iter().cloned()));
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, stdout, stderr) = modint(&args);
        assert_eq!((out.code, out.stdout, out.stderr), (code, stdout, stderr), "{args:?}");
    }
}

#[test]
fn verify_theorem_passes_on_every_bundled_model() {
    for m in MODELS {
        let (code, stdout, _) = modint(&["verify-theorem", &corpus(m)]);
        assert_eq!(code, 0, "{m}");
        assert!(stdout.trim_end().ends_with("checks"), "{m}");
        assert!(stdout.lines().last().unwrap().starts_with("0 mismatches"), "{m}");
    }
}

#[test]
fn sentence_values() {
    let (code, out, _) = modint(&["sentence", &corpus("extensional.model"), "--text", "the student read the book"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("1"));
    for (index, expected) in [("w0", "1"), ("w1", "0")] {
        let (_, out, _) = modint(&[
            "sentence",
            &corpus("modal.model"),
            "--text",
            "the student might read the book",
            "--index",
            index,
        ]);
        assert_eq!(out.lines().next(), Some(expected), "{index}");
    }
}

#[test]
fn exit_codes() {
    let missing = modint(&["validate", "/nonexistent/model.json"]);
    assert_eq!(missing.0, 2);
    assert_eq!(missing.2.lines().count(), 1);

    let usage = modint(&["frobnicate"]);
    assert_eq!(usage.0, 2);

    let unparsable = modint(&["parse", "--text", "book the read"]);
    assert_eq!(unparsable.0, 2);

    // an intensional model needs an index
    let no_index = modint(&["sentence", &corpus("modal.model"), "--text", "the student read the book"]);
    assert_eq!(no_index.0, 1);
    assert_eq!(no_index.2.lines().count(), 1);

    let modal_ext = modint(&["eval", &corpus("modal.model"), "--term", "(pred student x)", "--assign", "x=s1"]);
    assert_eq!(modal_ext.0, 1);

    let failure = modint(&[
        "eval",
        &corpus("extensional.model"),
        "--term",
        "(iota x (eq x x))",
    ]);
    assert_eq!(failure.0, 1);
    assert!(failure.2.contains("presupposition"), "{}", failure.2);
}

#[test]
fn square_reports_both_paths() {
    let (code, out, _) = modint(&["square", &corpus("location.model"), "--frames", "W,L"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.ends_with(": agrees")).count(), 2);
    assert_eq!(out.lines().last(), Some("commutes: true"));
}

#[test]
fn trivialized_output_is_a_loadable_model() {
    let dir = std::env::temp_dir().join(format!("modint-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("w.model");
    let (code, _, err) = modint(&[
        "trivialize",
        &corpus("modal_tense.model"),
        "--frame",
        "W",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, stdout, _) = modint(&["validate", out.to_str().unwrap()]);
    assert_eq!((code, stdout.trim()), (0, "valid"));
    let (code, _, _) = modint(&["trivialize", out.to_str().unwrap(), "--frame", "W"]);
    assert_eq!(code, 1);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn diagram_has_cube_shape() {
    let (_, out, _) = modint(&["diagram", &corpus("location.model")]);
    assert_eq!(out.lines().filter(|l| l.starts_with("node ")).count(), 8);
    assert_eq!(out.lines().filter(|l| l.starts_with("edge ")).count(), 12);
}
