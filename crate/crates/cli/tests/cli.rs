use std::path::PathBuf;
use std::process::{Command, Output};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hironaka"))
        .current_dir(dir())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn stderr_of_failure(args: &[&str]) -> String {
    let out = run(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

const GOLDEN: &[(&str, &[&str])] = &[
    (
        "nf_geometric",
        &[
            "--vars",
            "2",
            "--prec",
            "5",
            "--rules",
            "data/geometric.rules",
            "nf",
            "x2",
        ],
    ),
    (
        "nf_pair_seeded",
        &[
            "--vars",
            "2",
            "--prec",
            "6",
            "--seed",
            "11",
            "--rules",
            "data/pair.rules",
            "nf",
            "x1 + x2 + 1/3*x1^2",
        ],
    ),
    ("delta", &["--vars", "1", "delta", "x1", "0"]),
    (
        "delta_upper_bound",
        &[
            "--vars",
            "3",
            "delta",
            "x1 + x2^2 + O(3)",
            "x1 + x2^2 - x3^4",
        ],
    ),
    (
        "check_sb_pair",
        &[
            "--vars",
            "2",
            "--prec",
            "4",
            "--seed",
            "7",
            "--rules",
            "data/pair.rules",
            "check-sb",
        ],
    ),
    (
        "check_sb_geometric",
        &[
            "--vars",
            "2",
            "--prec",
            "6",
            "--seed",
            "7",
            "--rules",
            "data/geometric.rules",
            "check-sb",
            "--trials",
            "50",
        ],
    ),
];

#[test]
fn kv_reports_match_golden_files() {
    for (name, args) in GOLDEN {
        let mut full = vec!["--report", "kv"];
        full.extend_from_slice(args);
        let expected =
            std::fs::read_to_string(dir().join("golden").join(format!("{name}.kv"))).unwrap();
        let first = stdout(&full);
        let second = stdout(&full);
        assert_eq!(first, second, "{name} is not reproducible");
        assert_eq!(first, expected, "{name} differs from its golden file");
    }
}

#[test]
fn plain_report() {
    let out = stdout(&["--vars", "1", "delta", "x1", "0"]);
    assert!(out.contains("delta: 1/2\n"), "{out}");
}

#[test]
fn membership_commands() {
    let base = [
        "--report",
        "kv",
        "--vars",
        "2",
        "--prec",
        "10",
        "--rules",
        "data/geometric.rules",
    ];
    let member = |extra: &[&str]| stdout(&[&base[..], extra].concat());

    let out = member(&["member", "x2"]);
    assert!(out.contains("verdict=member\n"));
    assert!(out.contains("q.1=1 + x2 + x2^2 + x2^3 + x2^4 + x2^5 + x2^6 + x2^7 + x2^8\n"));

    assert!(member(&["member", "1", "--assume-sb"]).contains("verdict=not-member\nnormal_form=1\n"));
    assert!(member(&["member", "1"]).contains("verdict=unknown\nresidual=1\n"));
    assert!(member(&["congruent", "x2^2", "x2^3"]).contains("verdict=member\n"));

    let out = member(&["cofactors", "x2"]);
    assert!(out.contains("normal_form=O(10)\n"));
    assert!(out.contains("q.1=1 + x2 + x2^2 + x2^3 + x2^4 + x2^5 + x2^6 + x2^7 + x2^8\n"));
}

#[test]
fn probe_reports_divergence() {
    let args = [
        "--report",
        "kv",
        "--vars",
        "2",
        "--prec",
        "4",
        "--seed",
        "0",
        "--rules",
        "data/pair.rules",
        "probe",
        "x1 + x2",
        "--strategies",
        "8",
    ];
    let out = stdout(&args);
    assert!(out.contains("max_delta=1/2\n"), "{out}");
    assert!(!out.contains("divergence=none"));
    assert_eq!(out, stdout(&args));

    let out = stdout(&[
        "--report",
        "kv",
        "--vars",
        "2",
        "--prec",
        "5",
        "--seed",
        "3",
        "--rules",
        "data/geometric.rules",
        "probe",
        "x2",
    ]);
    assert!(out.contains("divergence=none\n"), "{out}");
}

#[test]
fn ars_commands() {
    let out = stdout(&["--report", "kv", "ars", "check", "data/peak.ars"]);
    assert!(out.contains("normal_forms=1 2\n"));
    assert!(out.contains("normalising=true\n"));
    assert!(out.contains("unique_nf_reached=false\n"));
    assert!(out.contains("confluent=false\n"));

    let out = stdout(&[
        "--report",
        "kv",
        "ars",
        "valleys",
        "data/valley.ars",
        "0 <- 1 -> 2 <- 3 -> 0",
    ]);
    assert!(out.contains("valleys=1\n"));
    assert!(out.ends_with("output=0 <- 1 -> 2 -> 0\n"), "{out}");

    let err = stderr_of_failure(&["ars", "valleys", "data/peak.ars", "1 <- 0 -> 2"]);
    assert!(err.contains("precondition"), "{err}");
}

#[test]
fn errors_exit_nonzero_with_diagnostic() {
    let err = stderr_of_failure(&["--vars", "2", "delta", "x1 + x3", "0"]);
    assert!(err.contains("column 6") && err.contains("x3"), "{err}");
    assert!(stderr_of_failure(&["--vars", "1", "delta", "1/0*x1", "0"]).contains("error"));
    assert!(stderr_of_failure(&["delta", "x1", "0"]).contains("--vars"));
    assert!(stderr_of_failure(&["--vars", "0", "delta", "1", "0"]).contains("--vars"));
    assert!(stderr_of_failure(&[
        "--vars",
        "2",
        "--prec",
        "0",
        "--rules",
        "data/pair.rules",
        "nf",
        "x1"
    ])
    .contains("--prec"));
    assert!(
        stderr_of_failure(&["--vars", "1", "--order", "lex", "delta", "1", "0"])
            .contains("unknown order")
    );
    let err = stderr_of_failure(&[
        "--vars",
        "2",
        "--prec",
        "4",
        "--rules",
        "data/pair.rules",
        "check-sb",
    ]);
    assert!(err.contains("--seed"), "{err}");
    assert!(stderr_of_failure(&[
        "--vars",
        "2",
        "--prec",
        "4",
        "--rules",
        "missing.rules",
        "nf",
        "x1"
    ])
    .contains("missing.rules"));
}
