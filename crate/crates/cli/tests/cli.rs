use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbring"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Runs the command, checks its exit code and compares standard output with
/// the named golden file.
fn golden(name: &str, code: i32, args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(code),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    let expected = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name))
        .unwrap_or_else(|e| panic!("{name}: {e}"));
    let out = stdout(&o);
    assert_eq!(out, expected, "output of {args:?} differs from {name}");
    out
}

#[test]
fn check_passes_on_bg_s3() {
    golden("check_bg_s3.txt", 0, &["check", "corpus/bg_s3.json", "--suite", "all"]);
}

#[test]
fn check_kummer_associativity() {
    let out = golden(
        "check_kummer_assoc.txt",
        0,
        &["check", "corpus/kummer.json", "--suite", "assoc"],
    );
    assert!(out.contains("associativity [all basis triples] x32768"));
}

#[test]
fn check_selected_suites_in_one_theory() {
    golden(
        "check_c2_z3_k.txt",
        0,
        &["check", "corpus/c2_z3.json", "--theory", "k", "--suite", "eq6,eq1,rank"],
    );
}

#[test]
fn every_corpus_file_checks_clean() {
    for f in [
        "bg_z2", "bg_s3", "c2_z2", "c2_z3", "p2_z2", "p2_z3", "kummer", "sign_z2",
    ] {
        let o = run(&["check", &format!("corpus/{f}.json")]);
        assert_eq!(o.status.code(), Some(0), "{f}\n{}", stdout(&o));
    }
}

#[test]
fn perturbed_datum_fails_with_a_witness() {
    let text = std::fs::read_to_string(root().join("corpus/c2_z3.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    // One eigenline of g too many.
    v["eigen"][0]["entries"][0]["lines"][0]["mult"] = serde_json::Value::String("2".into());
    let file = Path::new(env!("CARGO_TARGET_TMPDIR")).join("c2_z3_perturbed.json");
    std::fs::write(&file, v.to_string()).unwrap();
    let o = run(&["check", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(
        out.contains("FAIL eq6 Im_g + sigma^* Im_g^-1 = N [(g)#0]: (0, 7/3) != (0, 2)\n"),
        "{out}"
    );
    assert!(out.ends_with("c2_z3: 2 passed, 33 failed\n"), "{out}");
}

#[test]
fn load_errors_exit_with_two() {
    let o = run(&["check", "corpus/missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));

    let file = Path::new(env!("CARGO_TARGET_TMPDIR")).join("not_a_datum.json");
    std::fs::write(&file, "{\"group\": 3}").unwrap();
    for cmd in ["check", "table", "ages", "compare"] {
        let o = run(&[cmd, file.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
    }
    // A datum without a resolution block needs --resolution.
    assert_eq!(run(&["compare", "corpus/kummer.json"]).status.code(), Some(2));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(
        run(&["check", "corpus/bg_z2.json", "--suite", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["table", "corpus/bg_z2.json", "--theory", "hodge"]).status.code(),
        Some(2)
    );
}

#[test]
fn group_algebra_table_of_z2() {
    let out = golden("table_bg_z2.txt", 0, &["table", "corpus/bg_z2.json"]);
    assert!(out.contains("dimension 2"));
    assert!(out.contains("g#0:1  *  g#0:1  =  e#0:1"));
}

#[test]
fn class_algebra_of_s3() {
    let out = golden(
        "table_bg_s3_invariant.txt",
        0,
        &["table", "corpus/bg_s3.json", "--theory", "k", "--invariant-only"],
    );
    // Class sums: T^2 = 3 + 3 C, T C = 2 T, C^2 = 2 + C.
    assert!(out.contains("[(23)#0:1]   *  [(23)#0:1]   =  3*e#0:1 + 3*[(123)#0:1]"));
    assert!(out.contains("[(23)#0:1]   *  [(123)#0:1]  =  2*[(23)#0:1]"));
    assert!(out.contains("[(123)#0:1]  *  [(123)#0:1]  =  2*e#0:1 + [(123)#0:1]"));
}

#[test]
fn kummer_invariant_table_is_24_dimensional() {
    let out = golden(
        "table_kummer_invariant.txt",
        0,
        &["table", "corpus/kummer.json", "--invariant-only"],
    );
    assert!(out.starts_with("# chow orbifold ring of kummer, dimension 24\n"));
}

#[test]
fn untwisted_datum_prints_its_own_algebra() {
    golden("table_p1.txt", 0, &["table", "crates/cli/tests/fixtures/p1.json"]);
}

#[test]
fn signed_table_marks_odd_classes() {
    let out = golden("table_sign_z2.txt", 0, &["table", "corpus/sign_z2.json"]);
    assert!(out.contains("e#0:b   *  e#0:a   =  -e#0:ab"));
}

#[test]
fn table_json_lists_nonzero_products() {
    golden("table_bg_z2.json", 0, &["table", "corpus/bg_z2.json", "--json"]);
    let o = run(&["table", "corpus/bg_z2.json", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dimension"], 2);
    assert_eq!(v["products"].as_array().unwrap().len(), 4);
}

#[test]
fn ages() {
    let bg = golden("ages_bg_z2.txt", 0, &["ages", "corpus/bg_z2.json"]);
    assert!(bg.lines().skip(1).all(|l| l.ends_with(" 0")));

    let a2 = golden("ages_c2_z3.txt", 0, &["ages", "corpus/c2_z3.json"]);
    assert!(a2.contains("(g)#0   0    1\n"));
    assert!(a2.contains("(g2)#0  0    1\n"));

    let k = golden("ages_kummer.txt", 0, &["ages", "corpus/kummer.json"]);
    assert!(k.contains("(e)#0   2    0\n"));
    assert_eq!(
        k.lines().filter(|l| l.starts_with("(g)#") && l.ends_with(" 1")).count(),
        16
    );

    golden("ages_c2_z3.json", 0, &["ages", "corpus/c2_z3.json", "--json"]);
}

const KUMMER: [&str; 5] = [
    "compare",
    "corpus/kummer.json",
    "--resolution",
    "corpus/kummer_resolution.json",
    "--map",
];

#[test]
fn kummer_comparison_is_an_isomorphism() {
    let mut args = KUMMER.to_vec();
    args.push("corpus/kummer_skeleton.json");
    let out = golden("compare_kummer.txt", 0, &args);
    assert!(out.contains("verdict: iso with s² = -1/2\n"));

    args.push("--json");
    golden("compare_kummer.json", 0, &args);
}

#[test]
fn degree_matching_finds_the_same_map() {
    let o = run(&[
        "compare",
        "corpus/kummer.json",
        "--resolution",
        "corpus/kummer_resolution.json",
        "--auto",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: iso with s² = -1/2\n"));
}

#[test]
fn comparison_without_skeleton_reports_dimensions() {
    golden(
        "compare_kummer_dims.txt",
        0,
        &[
            "compare",
            "corpus/kummer.json",
            "--resolution",
            "corpus/kummer_resolution.json",
        ],
    );
}

#[test]
fn mismatched_dimensions() {
    let out = golden(
        "compare_mismatch.txt",
        1,
        &[
            "compare",
            "corpus/c2_z3.json",
            "--resolution",
            "corpus/kummer_resolution.json",
        ],
    );
    assert!(out.contains("verdict: dimension mismatch at degree 1\n"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["table", "corpus/bg_s3.json", "--theory", "k"][..],
        &["check", "corpus/p2_z3.json", "--json"],
        &["ages", "corpus/kummer.json", "--json"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}
