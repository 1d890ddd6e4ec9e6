//! Golden-file and exit-code harness for the `qtwin` binary.

use std::path::PathBuf;
use std::process::Command;

use super::bundled_model_path;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn qtwin(args: &[String]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qtwin"))
        .args(args)
        .output()
        .expect("qtwin runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn args(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| s.to_string()).collect()
}

pub const MODELS: [&str; 6] = [
    "series-2",
    "parallel-2",
    "bridge-5",
    "gens-2of3",
    "gens-capacity-3",
    "radial-feeder-10",
];

/// `(golden file name, arguments)` for every pinned invocation.
pub fn golden_cases() -> Vec<(String, Vec<String>)> {
    let mut cases = Vec::new();
    for m in MODELS {
        let path = bundled_model_path(m);
        let base = |method: &str| args(&["assess", "--model", &path, "--method", method, "--no-timestamp"]);
        cases.push((format!("{m}.exact.json"), base("exact")));
        let mut mc = base("mc");
        mc.extend(args(&["--shots", "10000", "--seed", "7"]));
        cases.push((format!("{m}.mc.json"), mc));
        cases.push((format!("{m}.twin.json"), base("twin")));
        let mut ts = base("twin-sample");
        ts.extend(args(&["--shots", "10000", "--seed", "7"]));
        cases.push((format!("{m}.twin-sample.json"), ts));
        let mut q = base("qae");
        q.extend(args(&["--phase-qubits", "6"]));
        cases.push((format!("{m}.qae.json"), q));
    }
    let bridge = bundled_model_path("bridge-5");
    let assess = |extra: &[&str]| {
        let mut a = args(&["assess", "--model", &bridge, "--no-timestamp"]);
        a.extend(args(extra));
        a
    };
    cases.push((
        "bridge-5.twin.tree.json".into(),
        assess(&["--method", "twin", "--oracle", "tree"]),
    ));
    cases.push((
        "bridge-5.twin.minterm.json".into(),
        assess(&["--method", "twin", "--oracle", "minterm"]),
    ));
    cases.push((
        "bridge-5.qae.tree-sampled.json".into(),
        assess(&[
            "--method",
            "qae",
            "--oracle",
            "tree",
            "--phase-qubits",
            "4",
            "--shots",
            "500",
            "--seed",
            "3",
        ]),
    ));
    cases.push((
        "bridge-5.twin.noisy.json".into(),
        assess(&[
            "--method",
            "twin",
            "--noise",
            "0.01",
            "--trajectories",
            "200",
            "--seed",
            "3",
        ]),
    ));
    for (m, oracle) in [
        ("bridge-5", "tree"),
        ("gens-capacity-3", "minterm"),
        ("radial-feeder-10", "semantic"),
    ] {
        cases.push((
            format!("{m}.dump.{oracle}.txt"),
            args(&["dump-circuit", "--model", &bundled_model_path(m), "--oracle", oracle]),
        ));
    }
    cases.push((
        "bridge-5.compare.csv".into(),
        args(&[
            "compare",
            "--model",
            &bridge,
            "--target-error",
            "0.05",
            "--target-error",
            "0.02",
            "--seed",
            "1",
            "--no-timestamp",
        ]),
    ));
    cases
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs every golden case; with `UPDATE_GOLDEN=1` rewrites the files instead
/// of comparing. Returns one message per mismatch.
pub fn check_goldens() -> Vec<String> {
    let bless = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    let mut failures = Vec::new();
    for (name, a) in golden_cases() {
        let run = qtwin(&a);
        if run.code != 0 {
            failures.push(format!("{name}: exit {} ({})", run.code, run.stderr.trim()));
            continue;
        }
        let path = golden_dir().join(&name);
        if bless {
            std::fs::write(&path, &run.stdout).expect("write golden");
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(want) if want == run.stdout => {}
            Ok(_) => failures.push(format!("{name}: output differs from golden file")),
            Err(e) => failures.push(format!("{name}: {e} (set UPDATE_GOLDEN=1 to create)")),
        }
    }
    failures
}

pub struct FailureCase {
    pub label: &'static str,
    pub args: Vec<String>,
    pub code: i32,
    /// Substring the diagnostic must contain.
    pub mentions: &'static str,
}

fn write_model(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn wide_model(n: usize, structure: &str) -> String {
    let comps: Vec<String> = (0..n)
        .map(|i| format!(r#"{{"id":"c{i}","availability":0.9}}"#))
        .collect();
    format!(r#"{{"components":[{}],"structure":{structure}}}"#, comps.join(","))
}

/// The documented failure matrix (plus the success baselines it is
/// contrasted with). Model files are written into `dir`.
pub fn failure_matrix(dir: &tempfile::TempDir) -> Vec<FailureCase> {
    let bridge = bundled_model_path("bridge-5");
    let radial = bundled_model_path("radial-feeder-10");
    let bad_avail = write_model(
        dir,
        "bad-avail.json",
        r#"{"components":[{"id":"g1","availability":1.2}],"structure":"g1"}"#,
    );
    let unknown = write_model(
        dir,
        "unknown.json",
        r#"{"components":[{"id":"a","availability":0.5}],"structure":{"type":"and","of":["a","g9"]}}"#,
    );
    let malformed = write_model(dir, "malformed.json", r#"{"components":[{"id":"a","#);
    let too_many = write_model(
        dir,
        "too-many.json",
        &wide_model(25, r#"{"type":"and","of":["c0","c1"]}"#),
    );
    let fifteen = write_model(
        dir,
        "fifteen.json",
        &wide_model(15, r#"{"type":"or","of":["c0","c14"]}"#),
    );
    let pairs: Vec<String> = (0..12)
        .map(|i| format!(r#"{{"type":"and","of":["c{}","c{}"]}}"#, 2 * i, 2 * i + 1))
        .collect();
    let wide_tree = write_model(
        dir,
        "wide-tree.json",
        &wide_model(24, &format!(r#"{{"type":"or","of":[{}]}}"#, pairs.join(","))),
    );
    let s = |v: &[&str]| args(v);
    vec![
        FailureCase {
            label: "valid bundled model",
            args: s(&["validate", "--model", &bridge]),
            code: 0,
            mentions: "valid",
        },
        FailureCase {
            label: "help",
            args: s(&["--help"]),
            code: 0,
            mentions: "",
        },
        FailureCase {
            label: "missing file",
            args: s(&["validate", "--model", "/nonexistent/model.json"]),
            code: 2,
            mentions: "cannot read",
        },
        FailureCase {
            label: "availability 1.2",
            args: s(&["validate", "--model", &bad_avail]),
            code: 2,
            mentions: "g1",
        },
        FailureCase {
            label: "unknown component",
            args: s(&["validate", "--model", &unknown]),
            code: 2,
            mentions: "g9",
        },
        FailureCase {
            label: "malformed JSON",
            args: s(&["validate", "--model", &malformed]),
            code: 2,
            mentions: "error",
        },
        FailureCase {
            label: "no subcommand",
            args: s(&[]),
            code: 2,
            mentions: "Usage",
        },
        FailureCase {
            label: "unknown method",
            args: s(&["assess", "--model", &bridge, "--method", "magic"]),
            code: 2,
            mentions: "magic",
        },
        FailureCase {
            label: "noise outside [0, 1]",
            args: s(&[
                "assess", "--model", &bridge, "--method", "twin", "--noise", "1.5", "--seed", "1",
            ]),
            code: 2,
            mentions: "1.5",
        },
        FailureCase {
            label: "noise with a classical method",
            args: s(&["assess", "--model", &bridge, "--method", "exact", "--noise", "0.1"]),
            code: 2,
            mentions: "--noise",
        },
        FailureCase {
            label: "assess as CSV",
            args: s(&["assess", "--model", &bridge, "--method", "exact", "--format", "csv"]),
            code: 2,
            mentions: "csv",
        },
        FailureCase {
            label: "empty target error set",
            args: s(&["compare", "--model", &bridge, "--seed", "1"]),
            code: 2,
            mentions: "target-error",
        },
        FailureCase {
            label: "target error 0",
            args: s(&["compare", "--model", &bridge, "--target-error", "0", "--seed", "1"]),
            code: 2,
            mentions: "(0, 1)",
        },
        FailureCase {
            label: "capacity model with tree oracle",
            args: s(&[
                "dump-circuit",
                "--model",
                &bundled_model_path("gens-capacity-3"),
                "--oracle",
                "tree",
            ]),
            code: 2,
            mentions: "semantic",
        },
        FailureCase {
            label: "kofn model with tree oracle",
            args: s(&[
                "assess",
                "--model",
                &bundled_model_path("gens-2of3"),
                "--method",
                "twin",
                "--oracle",
                "tree",
            ]),
            code: 2,
            mentions: "minterm",
        },
        FailureCase {
            label: "minterm beyond 14 components",
            args: s(&["assess", "--model", &fifteen, "--method", "twin", "--oracle", "minterm"]),
            code: 2,
            mentions: "14",
        },
        FailureCase {
            label: "qae with 30 phase qubits",
            args: s(&["assess", "--model", &bridge, "--method", "qae", "--phase-qubits", "30"]),
            code: 3,
            mentions: "36 qubits",
        },
        FailureCase {
            label: "more than 24 components",
            args: s(&["validate", "--model", &too_many]),
            code: 3,
            mentions: "25",
        },
        FailureCase {
            label: "tree twin beyond the qubit cap",
            args: s(&["assess", "--model", &wide_tree, "--method", "twin", "--oracle", "tree"]),
            code: 3,
            mentions: "38 qubits",
        },
        FailureCase {
            label: "compare needing too many phase qubits",
            args: s(&[
                "compare",
                "--model",
                &radial,
                "--target-error",
                "0.000001",
                "--seed",
                "1",
            ]),
            code: 3,
            mentions: "permitted",
        },
    ]
}

/// Runs the matrix; returns one message per violated expectation.
pub fn check_failure_matrix() -> Vec<String> {
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    for case in failure_matrix(&dir) {
        let run = qtwin(&case.args);
        let text = format!("{}{}", run.stdout, run.stderr);
        if run.code != case.code {
            failures.push(format!(
                "{}: exit {} (expected {}): {}",
                case.label,
                run.code,
                case.code,
                text.trim()
            ));
        } else if !text.contains(case.mentions) {
            failures.push(format!(
                "{}: diagnostic lacks {:?}: {}",
                case.label,
                case.mentions,
                text.trim()
            ));
        }
    }
    failures
}
