//! Golden files and exit codes for the command-line tool.
//!
//! Set `ULTRADYN_BLESS=1` to rewrite the files under `tests/golden/`.

use std::path::PathBuf;
use std::process::{Command, Output};

const RIVERA_LETELIER: &str = "-45*(3*z+5)/(z^2*(z-9))";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ultradyn"));
    c.env_remove("ULTRADYN_DEGREE_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

const FIXTURES: &[(&str, &[&str])] = &[
    ("analyze_z2_minus_3_4", &["analyze", "z^2-3/4", "--prime", "3", "--prime", "5"]),
    ("analyze_rivera_letelier", &["analyze", RIVERA_LETELIER, "--prime", "5"]),
    ("copolygon_rivera_letelier", &["copolygon", RIVERA_LETELIER, "--prime", "5", "--center", "0"]),
    ("newton_fixed_quartic", &["newton", "z^4-9*z^3+135*z+225", "--prime", "5"]),
    ("attract_z2_plus_3z", &["attract", "z^2+3*z", "--prime", "3", "--gamma", "0"]),
    ("attract_two_cycle", &["attract", "z^2+1/4", "--prime", "5", "--period", "2", "--residue", "0"]),
    ("attract_disk_check", &["attract", "z^2+3*z", "--prime", "3", "--disk-check", "0"]),
    ("pcf_rivera_letelier", &["pcf", RIVERA_LETELIER]),
    ("pcf_basilica", &["pcf", "z^2-1"]),
    ("pcf_chebyshev_cubic", &["pcf", "4*z^3-3*z"]),
    ("reduction_escaping", &["reduction", "z^2+1/3", "--prime", "3"]),
    ("reduction_scaled", &["reduction", "3*z^2", "--prime", "5"]),
    ("heights_z2_minus_2", &["heights", "z^2-2"]),
    ("heights_period_two", &["heights", "z^2+1/4", "--period", "2"]),
    ("cycles_z2_plus_1_4", &["cycles", "z^2+1/4", "--prime", "5", "--max-period", "2"]),
    ("search_poly_slice_b3", &["search", "--family", "poly_slice", "--height-bound", "3"]),
    ("epsilon_quadratic", &["epsilon", "--degree", "2", "--primes", "2,3,5"]),
    ("epsilon_polynomial", &["epsilon", "--degree", "4", "--primes", "2,3,5", "--kind", "polynomial"]),
];

#[test]
fn golden_outputs_are_stable() {
    let bless = std::env::var_os("ULTRADYN_BLESS").is_some();
    let dir = golden_dir();
    let mut failures = Vec::new();
    for (name, args) in FIXTURES {
        let first = run(args);
        assert_eq!(first.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&first.stderr));
        let second = run(args);
        assert_eq!(first.stdout, second.stdout, "{name}: output differs between runs");
        let path = dir.join(format!("{name}.json"));
        if bless {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &first.stdout).unwrap();
            continue;
        }
        match std::fs::read(&path) {
            Ok(want) if want == first.stdout => {}
            Ok(_) => failures.push(format!("{name}: differs from {}", path.display())),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn outputs_are_json() {
    for (name, args) in FIXTURES {
        let out = run(args);
        let text = String::from_utf8(out.stdout).unwrap();
        if args[0] == "search" {
            // hits as JSON lines, then the pretty-printed summary
            let at = text.find("\n{\n").map_or(0, |i| i + 1);
            for line in text[..at].lines() {
                serde_json::from_str::<serde_json::Value>(line).unwrap_or_else(|e| panic!("{name}: {e}"));
            }
            let v: serde_json::Value = serde_json::from_str(&text[at..]).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(v["summary"]["schema"], "ultradyn/1");
            continue;
        }
        let v: serde_json::Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        if let Some(s) = v.get("schema") {
            assert_eq!(s, "ultradyn/1", "{name}");
        }
    }
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["--help"], 0),
        (&["--version"], 0),
        (&["analyze", "z^^2", "--prime", "3"], 2),
        (&["analyze", "z^2", "--prime", "4"], 2),
        (&["analyze", "z", "--prime", "3"], 2),
        (&["analyze", "(z^2-1)/(z-1)", "--prime", "3"], 2),
        (&["frobnicate"], 2),
        (&["newton", "0", "--prime", "3"], 2),
        (&["reduction", "1/z^2+z", "--prime", "3"], 2),
        (&["attract", "z^2+z", "--prime", "5", "--gamma", "0"], 2),
        (&["attract", "z^2+1/4", "--prime", "2", "--period", "2", "--residue", "0"], 2),
        (&["attract", "(z+1)^3-1", "--prime", "3", "--gamma", "0"], 3),
        (&["pcf", "z^2+1", "--max-steps", "3"], 3),
        (&["epsilon", "--degree", "1", "--primes", "2"], 2),
    ];
    for (args, code) in cases {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(*code),
            "{args:?}: stderr {}",
            String::from_utf8_lossy(&out.stderr)
        );
        if *code == 2 && args[0] != "frobnicate" {
            assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "), "{args:?}");
        }
    }
}

#[test]
fn degree_cap_is_a_resource_error() {
    let out = bin()
        .args(["cycles", "z^2+1/4", "--prime", "5", "--max-period", "3"])
        .env("ULTRADYN_DEGREE_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn search_output_file_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let hits = dir.path().join("hits.jsonl");
    let resume = dir.path().join("resume");
    let args = |extra: &[&str]| {
        let mut v: Vec<String> = ["search", "--family", "poly_slice", "--height-bound", "6", "--cell-size", "8"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        v.extend(["--output".to_string(), hits.display().to_string()]);
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    let out = bin().args(args(&["--resume", &resume.display().to_string()])).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lines = std::fs::read_to_string(&hits).unwrap();
    let cs: Vec<String> = lines
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["parameters"][0].as_str().unwrap().to_string())
        .collect();
    assert_eq!(cs, ["-2", "-1", "0"]);
    // a finished run leaves nothing to do on resume
    let out = bin().args(args(&["--resume", &resume.display().to_string()])).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["summary"]["candidates"], 0);
}
