use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wildram::oracle::PrecPolicy;
use wildram::suite::Outcome;
use wildram_cli::{
    exit_code, parse_job, run, run_suite, Command, EXIT_DISCREPANCY, EXIT_ERROR, EXIT_OK,
};

/// Ramification filtrations, different degrees and genera for Artin-Schreier
/// and length-2 Witt extensions of k((t)).
///
/// Exit status: 0 success, 1 error, 2 undetermined, 3 discrepancy flagged.
#[derive(Parser)]
#[command(name = "wildram", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the command named in the job's [options] (default: jumps)
    Run(JobArgs),
    /// Reduced forms and the certificates relating them to the input
    Reduce(JobArgs),
    /// Lower and upper jumps, segment orders and different degree
    Jumps(JobArgs),
    /// Genus of a cover of the projective line branched at infinity
    Genus(JobArgs),
    /// Cross-check a job against the series oracle, or run the randomized suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Emit the JSON report
    #[arg(long)]
    json: bool,
    /// Series precision for the oracle (default: derived from the pole orders)
    #[arg(long, value_name = "N")]
    prec: Option<i64>,
}

#[derive(Args)]
struct JobArgs {
    /// Job file (TOML)
    job: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// Job file (TOML); omit to run the randomized suite
    job: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
    /// Run the randomized suite with N cases per family
    #[arg(long, value_name = "N")]
    trials: Option<usize>,
    #[arg(long, value_name = "S", default_value_t = 1)]
    seed: u64,
}

fn policy(prec: Option<i64>) -> PrecPolicy {
    prec.map_or(PrecPolicy::Default, PrecPolicy::Fixed)
}

fn run_job(path: &PathBuf, command: Option<Command>, common: &Common) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_ERROR;
        }
    };
    let job = match parse_job(&text) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_ERROR;
        }
    };
    let command = command.or(job.options.command).unwrap_or(Command::Jumps);
    let prec = policy(common.prec.or(job.options.prec));
    match run(&job, command, prec) {
        Ok(report) => {
            if common.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            exit_code(&report)
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn print_suite(outcomes: &[Outcome], json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(outcomes).expect("outcomes serialize")
        );
        return;
    }
    for o in outcomes {
        if o.passed() {
            println!("ok    {} ({} cases)", o.name, o.cases);
        } else {
            println!("FAIL  {} ({}/{} failed)", o.name, o.failed, o.cases);
            for f in &o.failures {
                println!("        {f}");
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_ERROR as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    let code = match &cli.command {
        Cmd::Run(a) => run_job(&a.job, None, &a.common),
        Cmd::Reduce(a) => run_job(&a.job, Some(Command::Reduce), &a.common),
        Cmd::Jumps(a) => run_job(&a.job, Some(Command::Jumps), &a.common),
        Cmd::Genus(a) => run_job(&a.job, Some(Command::Genus), &a.common),
        Cmd::Verify(v) => match (&v.job, v.trials) {
            (Some(job), None) => run_job(job, Some(Command::Verify), &v.common),
            (None, trials) => {
                match run_suite(trials.unwrap_or(20), v.seed, policy(v.common.prec)) {
                    Ok(outcomes) => {
                        print_suite(&outcomes, v.common.json);
                        if outcomes.iter().all(|o| o.passed()) {
                            EXIT_OK
                        } else {
                            EXIT_DISCREPANCY
                        }
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        EXIT_ERROR
                    }
                }
            }
            (Some(_), Some(_)) => {
                eprintln!("error: pass either a job file or --trials, not both");
                EXIT_ERROR
            }
        },
    };
    ExitCode::from(code as u8)
}
