//! Acceptance run: one PASS/FAIL line per criterion, with timings.
//!
//! Runs under `cargo test` as a plain binary (no libtest harness) and exits
//! non-zero when any criterion fails.

use std::path::Path;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use wildram::oracle::PrecPolicy;
use wildram::report::{RamReport, Status};
use wildram::suite::{self, Outcome};
use wildram_cli::{parse_job, run, Command, EXIT_UNDETERMINED};

const SEED: u64 = 20240917;

struct Verdict {
    ok: bool,
    detail: String,
}

fn summarize(outcomes: &[Outcome]) -> (bool, usize, Vec<String>) {
    let cases = outcomes.iter().map(|o| o.cases).sum();
    let bad = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| {
            format!(
                "{}: {}/{} failed, first: {:?}",
                o.name,
                o.failed,
                o.cases,
                o.failures.first()
            )
        })
        .collect::<Vec<_>>();
    (bad.is_empty(), cases, bad)
}

fn outcomes_verdict(outcomes: Vec<Outcome>, min_cases: usize, extra: &str) -> Verdict {
    let (ok, cases, bad) = summarize(&outcomes);
    let enough = cases >= min_cases;
    let mut detail = format!("{cases} cases{extra}");
    if !enough {
        detail += &format!(", need at least {min_cases}");
    }
    if !bad.is_empty() {
        detail += &format!("; {}", bad.join("; "));
    }
    Verdict {
        ok: ok && enough,
        detail,
    }
}

fn job(text: &str, command: Command) -> Result<RamReport, String> {
    let j = parse_job(text).map_err(|e| e.to_string())?;
    run(&j, command, PrecPolicy::Default).map_err(|e| e.to_string())
}

fn witt_ring() -> Verdict {
    let mut out = Vec::new();
    for p in [2, 3, 5, 7] {
        match suite::witt_vs_ghost(p, 1000, SEED) {
            Ok(o) => {
                if o.cases < 1000 {
                    return Verdict {
                        ok: false,
                        detail: format!("p={p}: only {} cases", o.cases),
                    };
                }
                out.push(o)
            }
            Err(e) => return err(e),
        }
    }
    outcomes_verdict(out, 4000, " (1000 per p in 2, 3, 5, 7)")
}

fn err(e: impl std::fmt::Display) -> Verdict {
    Verdict {
        ok: false,
        detail: format!("error: {e}"),
    }
}

fn p2_formula() -> Verdict {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        match suite::p2_oracle_grid(p, 12, SEED, PrecPolicy::Default) {
            Ok(o) => out.push(o),
            Err(e) => return err(e),
        }
    }
    outcomes_verdict(out, 150, ", every reduced (n0, n1) with n0, n1 <= 12")
}

fn p_cyclic_oracle() -> Verdict {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        match suite::p_cyclic_oracle(p, 70, SEED, PrecPolicy::Default) {
            Ok(o) => out.push(o),
            Err(e) => return err(e),
        }
    }
    outcomes_verdict(out, 200, " randomized over p in 2, 3, 5")
}

fn genus_routes() -> Verdict {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        match suite::genus_routes(p, 15) {
            Ok(o) => out.extend(o),
            Err(e) => return err(e),
        }
    }
    let flagged: usize = out
        .iter()
        .filter(|o| o.name.contains("flagged"))
        .map(|o| o.cases)
        .sum();
    let mut v = outcomes_verdict(out, 1, "");
    if flagged == 0 {
        v.ok = false;
        v.detail += ", no flagged drop cases ran";
    } else {
        v.detail += &format!(", {flagged} drop cases flagged with the Riemann-Hurwitz value");
    }
    v
}

fn anchored() -> Verdict {
    let cover = |p: u32, group: &str, a: &str, b: &str| {
        format!("[field]\np = {p}\n\n[[extension]]\ntype = \"cover\"\ngroup = \"{group}\"\npolynomials = [\"{a}\", \"{b}\"]\n")
    };
    let witt = |a: i64, b: i64| {
        format!("[field]\np = 3\n\n[[extension]]\ntype = \"witt2\"\nvector = \"W2( t^-{a} + O(t^30) ; t^-{b} + O(t^30) )\"\n")
    };
    let mut bad = Vec::new();
    let mut check = |label: &str,
                     got: Result<RamReport, String>,
                     want: &dyn Fn(&RamReport) -> bool| match got {
        Ok(r) if want(&r) => {}
        Ok(r) => bad.push(format!(
            "{label}: genus {:?}, lower {:?}",
            r.genus, r.lower_jumps
        )),
        Err(e) => bad.push(format!("{label}: {e}")),
    };
    check(
        "p=2 cyclic (1,1)",
        job(&cover(2, "Z/p^2", "x", "x"), Command::Genus),
        &|r| r.genus == Some(1),
    );
    check(
        "p=2 noncyclic (1,3)",
        job(&cover(2, "(Z/p)^2", "x", "x^3"), Command::Genus),
        &|r| r.genus == Some(2),
    );
    check("p=3 witt (1,2)", job(&witt(1, 2), Command::Jumps), &|r| {
        r.lower_jumps == [1, 7]
    });
    check("p=3 witt (1,5)", job(&witt(1, 5), Command::Jumps), &|r| {
        r.lower_jumps == [1, 13]
    });
    Verdict {
        ok: bad.is_empty(),
        detail: if bad.is_empty() {
            "genus 1, genus 2, lower (1, 7), lower (1, 13)".into()
        } else {
            bad.join("; ")
        },
    }
}

fn herbrand() -> Verdict {
    outcomes_verdict(
        vec![suite::herbrand_round_trip(500, SEED)],
        500,
        " (up to 4 jumps, divisor-chain orders)",
    )
}

fn golden(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn composita() -> Verdict {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        match suite::p_cyclic_composita(p, 20, SEED) {
            Ok(o) => out.extend(o),
            Err(e) => return err(e),
        }
        match suite::p2_undetermined(p) {
            Ok(o) => out.push(o),
            Err(e) => return err(e),
        }
    }
    let thin: Vec<String> = out
        .iter()
        .filter(|o| o.name.starts_with("compositum") && o.cases < 20)
        .map(|o| o.name.clone())
        .collect();
    let mut v = outcomes_verdict(out, 1, "");
    if !thin.is_empty() {
        v.ok = false;
        v.detail += &format!(", fewer than 20 instances: {thin:?}");
    }
    let code = Process::new(env!("CARGO_BIN_EXE_wildram"))
        .arg("jumps")
        .arg(golden("witt_pair_undetermined.toml"))
        .output()
        .map(|o| o.status.code());
    match code {
        Ok(Some(EXIT_UNDETERMINED)) => {
            v.detail += ", CLI exit code 2 on a hypothesis-violating input"
        }
        other => {
            v.ok = false;
            v.detail += &format!(", CLI exit status {other:?} instead of 2");
        }
    }
    v
}

type Criterion = (&'static str, fn() -> Verdict, Option<Duration>);

type Key = (Vec<Rational64>, Vec<i64>, Option<i64>, Option<i64>);

fn key(r: &RamReport) -> Key {
    (
        r.upper_jumps.clone(),
        r.lower_jumps.clone(),
        r.different_degree,
        r.genus,
    )
}

fn cli_json(args: &[&str]) -> Result<RamReport, String> {
    let out = Process::new(env!("CARGO_BIN_EXE_wildram"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    RamReport::from_json(&String::from_utf8_lossy(&out.stdout))
        .map_err(|e| format!("{args:?}: {e}"))
}

fn precision_stability() -> Verdict {
    let mut bad = Vec::new();
    let mut compared = 0;

    // both oracle suites recompute every value at twice the precision
    for p in [2, 3, 5] {
        for o in [
            suite::p_cyclic_oracle(p, 70, SEED, PrecPolicy::Scaled(2)),
            suite::p2_oracle_grid(p, 12, SEED, PrecPolicy::Scaled(2)),
        ] {
            match o {
                Ok(o) if o.passed() => compared += o.cases,
                Ok(o) => bad.push(format!("{}: {:?}", o.name, o.failures.first())),
                Err(e) => bad.push(e.to_string()),
            }
        }
    }

    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut jobs: Vec<_> = std::fs::read_dir(&dir)
        .map(|d| d.filter_map(|e| e.ok().map(|e| e.path())).collect())
        .unwrap_or_default();
    jobs.retain(|p| p.extension().is_some_and(|x| x == "toml"));
    jobs.sort();
    for path in &jobs {
        let Ok(text) = std::fs::read_to_string(path) else {
            continue;
        };
        let Ok(j) = parse_job(&text) else { continue };
        for command in [Command::Jumps, Command::Genus, Command::Verify] {
            let a = run(&j, command, PrecPolicy::Default);
            let b = run(&j, command, PrecPolicy::Scaled(2));
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    compared += 1;
                    if key(&a) != key(&b) {
                        bad.push(format!(
                            "{}: {:?} vs {:?}",
                            path.display(),
                            key(&a),
                            key(&b)
                        ));
                    }
                }
                (Err(a), Err(b)) if a.to_string() == b.to_string() => {}
                (a, b) => bad.push(format!(
                    "{} {}: {:?} vs {:?}",
                    path.display(),
                    command.name(),
                    a.err(),
                    b.err()
                )),
            }
        }
    }

    for name in [
        "witt_p3_1_5_verify.toml",
        "cover_p2_cyclic_1_1_verify.toml",
        "compositum_distinct.toml",
    ] {
        let file = golden(name);
        let file = file.to_str().unwrap();
        match (
            cli_json(&["verify", "--json", "--prec", "120", file]),
            cli_json(&["verify", "--json", "--prec", "240", file]),
        ) {
            (Ok(a), Ok(b)) if key(&a) == key(&b) && a.status == Status::OracleConfirmed => {
                compared += 1
            }
            (a, b) => bad.push(format!("{name} --prec 120 vs 240: {a:?} vs {b:?}")),
        }
    }

    Verdict {
        ok: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{compared} results unchanged at doubled precision")
        } else {
            bad.join("; ")
        },
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "1 Witt addition and subtraction match the ghost oracle",
            witt_ring,
            Some(Duration::from_secs(10)),
        ),
        (
            "2 second jump of Z/p^2 by oracle matches the formula",
            p2_formula,
            Some(Duration::from_secs(60)),
        ),
        (
            "3 p-cyclic oracle matches the reduced pole order",
            p_cyclic_oracle,
            None,
        ),
        (
            "4 genus closed forms agree with Riemann-Hurwitz",
            genus_routes,
            None,
        ),
        ("5 anchored genus and jump values", anchored, None),
        ("6 Herbrand round trip", herbrand, None),
        (
            "7 compositum cases and undetermined inputs",
            composita,
            None,
        ),
        (
            "8 results stable under doubled precision",
            precision_stability,
            None,
        ),
    ];
    let mut failures = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let mut v = check();
        let took = start.elapsed();
        if let Some(limit) = limit {
            if took > limit {
                v.ok = false;
                v.detail += &format!(", over the {} s limit", limit.as_secs());
            }
        }
        if !v.ok {
            failures += 1;
        }
        println!(
            "[{}] {name}: {} ({:.2} s)",
            if v.ok { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64()
        );
    }
    println!("{} of 8 criteria passed", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
