use std::io::Cursor;
use std::path::Path;
use std::process::Command;

use pregroup_lab_cli::{run, EXIT_ERROR, EXIT_NONE};

fn invoke(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut argv = vec!["pregroup-lab"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut Cursor::new(stdin.as_bytes().to_vec()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["parse", "She sleeps."], "").0, 0);
    assert_eq!(invoke(&["parse", "She sleep."], "").0, EXIT_NONE);
    let (code, _, err) = invoke(&["parse", "She xyzzy."], "");
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("xyzzy"), "{err}");
    assert_eq!(invoke(&["audit", "2", "3"], "").0, EXIT_ERROR);
    assert_eq!(invoke(&["--model", "/nonexistent/words.model", "meaning", "lumberjacks drink ."], "").0, EXIT_ERROR);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["parse", "She may see him in the university."][..],
        &["meaning", "may lumberjacks drink ?"],
        &["--format", "svg", "parse", "Who may eat pork?"],
        &["demo"],
    ] {
        let a = invoke(args, "");
        let b = invoke(args, "");
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn batch_mode_reads_stdin() {
    let (code, out, _) = invoke(&["parse"], "she sleeps .\nshe may sleep .\n");
    assert_eq!(code, 0);
    assert_eq!(out.matches("parse 1 : s1").count(), 2, "{out}");
    let (code, _, _) = invoke(&["parse"], "she sleeps .\nshe sleep .\n");
    assert_eq!(code, EXIT_NONE);
}

#[test]
fn tsv_and_svg_formats() {
    let (_, tsv, _) = invoke(&["--format", "tsv", "parse", "She sees him."], "");
    assert_eq!(tsv.trim_end(), "1\tShe:pi3 sees:pi3^r s1 o^l him:o\t1-2 4-5\t3\ts1");
    let (_, svg, _) = invoke(&["--format", "svg", "parse", "She sleeps."], "");
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"), "{svg}");
}

#[test]
fn meanings_and_similarity() {
    let (code, out, _) = invoke(&["meaning", "lumberjacks drink ."], "");
    assert_eq!((code, out.as_str()), (0, "shape 2\n0.8 0.2\n"));
    let (_, out, _) = invoke(&["meaning", "lumberjacks"], "");
    assert_eq!(out, "shape 3\n0 91 6\n");
    let (_, out, _) = invoke(&["similarity", "red lumberjacks", "red lumberjacks"], "");
    assert_eq!(out.trim(), "1");
}

#[test]
fn exported_model_loads_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out");
    let (code, _, err) = invoke(&["demo", "--export", target.to_str().unwrap()], "");
    assert_eq!(code, 0, "{err}");
    let manifest = target.join("graded").join("words.model");
    assert!(manifest.exists());
    let (code, out, _) = invoke(&["--model", manifest.to_str().unwrap(), "meaning", "lumberjacks may drink ."], "");
    assert_eq!((code, out.as_str()), (0, "shape 2\n0.75 0.35\n"));
}

#[test]
fn demo_reports_missing_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nothing");
    assert_eq!(invoke(&["demo", "--fixtures", missing.to_str().unwrap()], "").0, EXIT_ERROR);
}

#[test]
fn binary_matches_library() {
    let bin = env!("CARGO_BIN_EXE_pregroup-lab");
    let grammar = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/english_fragment.grammar");
    let o = Command::new(bin)
        .args(["--grammar", grammar.to_str().unwrap(), "parse", "May she see him?"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let (_, lib_out, _) = invoke(&["parse", "May she see him?"], "");
    assert_eq!(String::from_utf8(o.stdout).unwrap(), lib_out);
}
