use std::path::Path;
use std::process::{Command, Output};

fn absolim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_absolim")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn emitted_biproduct_passes_its_squares() {
    let dir = tempfile::tempdir().unwrap();
    let o = absolim(&["example", "biproduct", "--emit", "bp.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let o = absolim(&["check-squares", "--input", "bp.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o), "check-squares biproduct: holds\n");
}

#[test]
fn perturbed_file_fails_with_a_named_square() {
    let dir = tempfile::tempdir().unwrap();
    absolim(&["example", "biproduct", "--perturbed", "--emit", "bad.json"], dir.path());
    let o = absolim(&["check-squares", "--input", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("right square fails at (b1, b1)"), "{}", stdout(&o));
}

#[test]
fn missing_reference_is_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    absolim(&["example", "idempotent", "--emit", "e.json"], dir.path());
    let text = std::fs::read_to_string(dir.path().join("e.json")).unwrap();
    std::fs::write(dir.path().join("e.json"), text.replace("\"cocone\":\"a\"", "\"cocone\":\"absent\"")).unwrap();
    let o = absolim(&["check-colimit", "--input", "e.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("reference error: tasks[0].cocone"), "{err}");
}

#[test]
fn emitted_documents_are_canonical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["idempotent", "zero-object", "suplat-coproduct", "burnside-s3"] {
        let first = stdout(&absolim(&["example", name, "--emit"], dir.path()));
        let again = stdout(&absolim(&["example", name], dir.path()));
        assert_eq!(first, again);
        let doc = absolim::cli::format::parse(&first).unwrap();
        assert_eq!(absolim::cli::format::emit(&doc.document), first, "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    absolim(&["example", "idempotent-unsplit", "--emit", "u.json"], dir.path());
    for cmd in ["check-colimit", "check-squares", "audit", "oracle-colimit"] {
        let a = absolim(&[cmd, "--input", "u.json"], dir.path());
        let b = absolim(&[cmd, "--input", "u.json"], dir.path());
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn derive_emits_a_fragment_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    absolim(&["example", "burnside-c2", "--emit", "g.json"], dir.path());
    let o = absolim(&["derive", "a-from-b", "--input", "g.json", "--emit", "frag.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "derive a-from-b burnside-c2: holds\n");
    let frag: absolim::cli::format::Fragment =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("frag.json")).unwrap()).unwrap();
    assert_eq!(frag.maps[0].name, "burnside-c2-cocone");
}

#[test]
fn derivation_from_a_non_colimit_fails() {
    let dir = tempfile::tempdir().unwrap();
    absolim(&["example", "idempotent-unsplit", "--emit", "u.json"], dir.path());
    let o = absolim(&["derive", "b-from-a", "--input", "u.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("precondition"));
}

#[test]
fn audit_respects_the_size_bound() {
    let dir = tempfile::tempdir().unwrap();
    absolim(&["example", "idempotent", "--emit", "s.json"], dir.path());
    let small = absolim(&["audit", "--input", "s.json", "--max-size", "1"], dir.path());
    assert_eq!(small.status.code(), Some(2));
    assert!(stdout(&small).contains("above 1"), "{}", stdout(&small));
    let big = absolim(&["audit", "--input", "s.json", "--max-size", "4"], dir.path());
    assert_eq!(big.status.code(), Some(0), "{}", stdout(&big));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(absolim(&["no-such-command"], dir.path()).status.code(), Some(2));
    assert_eq!(absolim(&["example", "no-such-fixture"], dir.path()).status.code(), Some(2));
    assert_eq!(absolim(&["check-colimit", "--input", "missing.json"], dir.path()).status.code(), Some(2));
}
