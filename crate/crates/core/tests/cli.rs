//! Golden transcripts for the command-line tool. Each file under
//! `docs/examples/` holds the command line, its stdout and its exit code.
//! Set `NHCURV_BLESS=1` to rewrite them from the current binary.

use std::path::{Path, PathBuf};
use std::process::Command;

const CASES: &[(&str, &[&str])] = &[
    ("symbol_engel_pfaff", &["symbol", "--pfaff", "dx4 - x3*dx1; dx3 - x2*dx1"]),
    ("symbol_martinet", &["symbol", "--job", "docs/examples/martinet.job.json"]),
    ("prolong_heis1", &["prolong", "--builtin", "heis:1", "--cap", "4"]),
    ("prolong_cartan235", &["prolong", "--algebra", "docs/examples/cartan235.algebra.json", "--cap", "6"]),
    ("cohomology_riemann3", &["cohomology", "--builtin", "abelian:3", "--g0", "o", "--orders", "1..2"]),
    (
        "cohomology_sl2",
        &["cohomology", "--builtin", "abelian:2", "--g0", "docs/examples/sl2.derivations.json", "--orders", "0..3"],
    ),
    ("cohomology_cartan235", &["cohomology", "--algebra", "docs/examples/cartan235.algebra.json", "--orders", "-1..4"]),
    ("cohomology_cap_error", &["cohomology", "--builtin", "engel", "--orders", "-1..6", "--cap", "2"]),
    ("flat_check_engel", &["flat-check", "--builtin", "engel"]),
    ("flat_check_cartan235", &["flat-check", "--algebra", "docs/examples/cartan235.algebra.json", "--orders", "-1..4"]),
    ("verify_contact", &["verify-contact"]),
    ("verify_contact_r2", &["verify-contact", "--r", "2"]),
    ("verify_engel", &["verify-engel"]),
];

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn quote(arg: &str) -> String {
    if arg.chars().all(|c| c.is_ascii_alphanumeric() || "-_./:".contains(c)) {
        arg.to_string()
    } else {
        format!("'{arg}'")
    }
}

fn transcript(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_nhcurv")).args(args).current_dir(root()).output().unwrap();
    let line: Vec<String> = args.iter().map(|a| quote(a)).collect();
    format!(
        "$ nhcurv {}\n{}[exit {}]\n",
        line.join(" "),
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap()
    )
}

#[test]
fn transcripts_match_golden_files() {
    let bless = std::env::var_os("NHCURV_BLESS").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in CASES {
        let path = root().join("docs/examples").join(format!("{name}.txt"));
        let got = transcript(args);
        if bless {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_default();
        if got != want {
            eprintln!("--- {name} expected\n{want}--- {name} got\n{got}");
            mismatched.push(*name);
        }
    }
    assert!(mismatched.is_empty(), "transcripts differ: {mismatched:?}");
}

#[test]
fn reports_are_byte_stable() {
    for (_, args) in CASES.iter().filter(|(n, _)| n.starts_with("cohomology") || n.starts_with("prolong")) {
        assert_eq!(transcript(args), transcript(args));
    }
}

#[test]
fn json_reports_are_byte_stable_and_parse() {
    let dir = std::env::temp_dir().join(format!("nhcurv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let runs = [
        ("tower", vec!["prolong", "--builtin", "engel", "--cap", "3"]),
        ("cohomology", vec!["cohomology", "--builtin", "heis:1", "--orders", "0..3"]),
        ("symbol", vec!["symbol", "--pfaff", "dx3 - x2*dx1"]),
        ("flat", vec!["flat-check", "--builtin", "heis:1", "--orders", "0..2"]),
        ("suite", vec!["verify-contact", "--orders", "0..2"]),
    ];
    for (name, args) in runs {
        let mut texts = Vec::new();
        for round in 0..2 {
            let path = dir.join(format!("{name}{round}.json"));
            let mut full = args.clone();
            full.extend(["--json", path.to_str().unwrap()]);
            let status = Command::new(env!("CARGO_BIN_EXE_nhcurv")).args(&full).status().unwrap();
            assert_eq!(status.code(), Some(0), "{name}");
            texts.push(std::fs::read_to_string(&path).unwrap());
        }
        assert_eq!(texts[0], texts[1], "{name}");
        let _: serde_json::Value = serde_json::from_str(&texts[0]).unwrap();
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_input_is_a_diagnostic_not_a_panic() {
    let cases: &[&[&str]] = &[
        &["symbol", "--pfaff", "dx4 - x3*"],
        &["symbol", "--fields", "d1; d1"],
        &["prolong", "--builtin", "nope"],
        &["prolong", "--builtin", "abelian:2", "--g0", "missing.json"],
        &["cohomology", "--builtin", "heis:1", "--orders", "5..1"],
        &["symbol", "--builtin", "engel", "--pfaff", "dx1"],
        &["symbol", "--pfaff", "dx3 - x2*dx1", "--points", "(0,0)"],
    ];
    for args in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_nhcurv")).args(*args).current_dir(root()).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.lines().last().unwrap().starts_with("error: "), "{args:?}: {text}");
    }
}
