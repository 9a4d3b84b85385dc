//! Helpers shared by the CLI and acceptance test targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub const BIN: &str = env!("CARGO_BIN_EXE_fattails");

/// One fixed invocation per subcommand.
pub const CASES: &[(&str, &[&str])] = &[
    (
        "crossovers",
        &[
            "crossovers",
            "--family",
            "gaussian",
            "--params",
            "0,1",
            "--numeric",
        ],
    ),
    (
        "crossovers_student",
        &["crossovers", "--family", "student", "--params", "3,1"],
    ),
    (
        "tunnel_check",
        &[
            "tunnel-check",
            "--family",
            "student",
            "--params",
            "3,1",
            "--exact",
        ],
    ),
    (
        "density",
        &[
            "density", "--family", "gaussian", "--params", "0,1", "--delta", "0.75",
        ],
    ),
    ("quiz", &["quiz", "--sigma", "0.2", "--delta", "0.5"]),
    (
        "price",
        &[
            "price", "--kind", "put", "--strike", "0.9", "--rate", "0.01",
        ],
    ),
    ("multiplier", &["multiplier"]),
    ("jensen", &["jensen", "--n-step", "1"]),
    (
        "straddle_check",
        &[
            "straddle-check",
            "--strike",
            "0.9,1,1.1",
            "--sigma",
            "0.1,0.2,0.4",
        ],
    ),
    ("backspread", &["backspread"]),
    ("calendar", &["calendar", "--long", "1.0"]),
    ("strip", &["strip"]),
    (
        "vix_demo",
        &["vix-demo", "--entry", "10", "--episodes", "4,15"],
    ),
    ("barbell", &["barbell"]),
];

pub fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

pub fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&run_ok(&full)).unwrap()
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Equal up to 1e-9 relative on numbers, so libm differences between
/// platforms do not break the goldens.
pub fn close(a: &Value, b: &Value, path: &str) -> Result<(), String> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            if (x - y).abs() <= 1e-9 * x.abs().max(y.abs()) + 1e-300 {
                Ok(())
            } else {
                Err(format!("{path}: {x} vs {y}"))
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => x
            .iter()
            .zip(y)
            .enumerate()
            .try_for_each(|(i, (p, q))| close(p, q, &format!("{path}[{i}]"))),
        (Value::Object(x), Value::Object(y)) if x.len() == y.len() => {
            x.iter().try_for_each(|(k, v)| {
                let w = y.get(k).ok_or_else(|| format!("{path}.{k} missing"))?;
                close(v, w, &format!("{path}.{k}"))
            })
        }
        _ if a == b => Ok(()),
        _ => Err(format!("{path}: {a} vs {b}")),
    }
}
