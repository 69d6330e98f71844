//! Golden files: every `golden/*.toml` is run with `wildram run --json` and
//! compared with the neighbouring `.expected` (exit status, stdout, stderr).
//! Set `WILDRAM_BLESS=1` to rewrite the expectations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(dir: &Path, name: &str, args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_wildram"))
        .current_dir(dir)
        .args(args)
        .arg(name)
        .output()
        .expect("binary runs");
    format!(
        "exit: {}\n{}{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

#[test]
fn golden_files() {
    let dir = golden_dir();
    let bless = std::env::var_os("WILDRAM_BLESS").is_some();
    let mut jobs: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    jobs.sort();
    assert!(jobs.len() >= 10);
    let mut failed = Vec::new();
    for job in &jobs {
        let name = job.file_name().unwrap().to_str().unwrap();
        let got = run(&dir, name, &["run", "--json"]);
        let expected_path = job.with_extension("expected");
        if bless {
            fs::write(&expected_path, &got).unwrap();
            continue;
        }
        let want = fs::read_to_string(&expected_path).unwrap_or_default();
        if got != want {
            failed.push(format!("{name}:\n--- expected\n{want}\n--- got\n{got}"));
        }
    }
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}

#[test]
fn reports_are_deterministic() {
    let dir = golden_dir();
    for name in [
        "witt_p3_1_5_verify.toml",
        "compositum_distinct.toml",
        "cover_p3_drop_flagged.toml",
    ] {
        assert_eq!(
            run(&dir, name, &["run", "--json"]),
            run(&dir, name, &["run", "--json"])
        );
    }
}

#[test]
fn exit_codes() {
    let dir = golden_dir();
    let code = |name: &str, args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_wildram"))
            .current_dir(&dir)
            .args(args)
            .arg(name)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(code("witt_p3_1_2.toml", &["jumps"]), Some(0));
    assert_eq!(code("witt_pair_undetermined.toml", &["jumps"]), Some(2));
    assert_eq!(code("cover_p3_drop_flagged.toml", &["genus"]), Some(3));
    assert_eq!(code("error_p_not_prime.toml", &["jumps"]), Some(1));
    assert_eq!(code("missing.toml", &["jumps"]), Some(1));
    assert_eq!(code("witt_p3_1_2.toml", &["jumps", "--bogus"]), Some(1));
}

#[test]
fn subcommand_overrides_job_command() {
    let dir = golden_dir();
    let out = run(&dir, "cover_p2_cyclic_1_1.toml", &["jumps", "--json"]);
    let body = out.split_once('\n').unwrap().1;
    let v: serde_json::Value = serde_json::from_str(body).unwrap();
    assert_eq!(v["genus"], serde_json::Value::Null);
    assert_eq!(v["lower_jumps"], serde_json::json!([1, 3]));
}

#[test]
fn text_report() {
    let out = run(&golden_dir(), "witt_p3_1_2.toml", &["jumps"]);
    assert!(out.contains("lower jumps:      1, 7"), "{out}");
    assert!(out.contains("upper jumps:      1, 3"), "{out}");
}

#[test]
fn json_reports_parse_back() {
    let dir = golden_dir();
    for name in [
        "witt_p3_1_2.toml",
        "witt_pair_undetermined.toml",
        "cover_p3_drop_flagged.toml",
        "as_trivial.toml",
    ] {
        let out = run(&dir, name, &["run", "--json"]);
        let body = out.split_once('\n').unwrap().1;
        let report = wildram::report::RamReport::from_json(body).unwrap();
        assert_eq!(report.to_json().trim_end(), body.trim_end());
    }
}
