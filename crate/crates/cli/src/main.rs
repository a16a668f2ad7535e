//! `ciwb`: run scenario files or single operations from the command line.

mod commands;
mod engine;
mod error;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ciwb_core::sample::DEFAULT_SEED;
use ciwb_core::{Budget, Execution};
use clap::{Args, Parser};

use crate::commands::{Action, Command};
use crate::engine::{Options, Outcome};
use crate::error::CliError;
use crate::scenario::Scenario;

#[derive(Parser, Debug)]
#[command(name = "ciwb", version, about = "Exact ideal, row-completion, patching and K0 workbench")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Run batch loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[arg(long, global = true, value_name = "N")]
    max_basis: Option<usize>,
    #[arg(long, global = true, value_name = "D")]
    max_degree: Option<u32>,
    #[arg(long, global = true, value_name = "N")]
    max_reductions: Option<usize>,
}

impl Global {
    fn options(&self) -> Options {
        let d = Budget::default();
        Options {
            seed: self.seed,
            budget: Budget {
                max_basis: self.max_basis.unwrap_or(d.max_basis),
                max_degree: self.max_degree.unwrap_or(d.max_degree),
                max_reductions: self.max_reductions.unwrap_or(d.max_reductions),
            },
            exec: if self.sequential { Execution::Sequential } else { Execution::default() },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = cli.global.options();
    let code = match commands::lower(cli.command) {
        Ok(Action::Run(files)) => run_files(&files, opts, cli.global.json),
        Ok(Action::Text(text)) => {
            print!("{text}");
            0
        }
        Ok(Action::Scenario(sc)) => print_single(&engine::run(&sc, opts, PathBuf::from(".")), cli.global.json),
        Err(e) => fail(&e),
    };
    ExitCode::from(code)
}

fn fail(e: &CliError) -> u8 {
    eprintln!("error: {e}");
    e.exit_code()
}

fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Scenario::parse(&text).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        e => e,
    })
}

/// Runs each file; the exit code is the worst one seen.
fn run_files(files: &[PathBuf], opts: Options, json: bool) -> u8 {
    let mut worst = 0;
    let mut reports = Vec::new();
    for path in files {
        let sc = match load(path) {
            Ok(sc) => sc,
            Err(e) => {
                worst = worst.max(fail(&e));
                continue;
            }
        };
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let out = engine::run(&sc, opts, base);
        worst = worst.max(out.exit_code());
        if json {
            reports.push(out.report);
        } else {
            print_steps(path, &out);
        }
    }
    if json {
        let text = if reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])
        } else {
            serde_json::to_string_pretty(&reports)
        };
        println!("{}", text.expect("report serialises"));
    }
    worst
}

fn print_steps(path: &Path, out: &Outcome) {
    let r = &out.report;
    println!("== {}", path.display());
    if let Some(d) = &r.scenario.description {
        println!("   {d}");
    }
    for s in &r.results {
        let label = s.name.as_deref().map(|n| format!(" {n}")).unwrap_or_default();
        let status = match (s.passed, &s.error) {
            (_, Some(_)) => "ERROR",
            (Some(true), _) => "ok",
            (Some(false), _) => "FAIL",
            (None, _) => "--",
        };
        println!("[{status}] step {}{label}: {}", s.index, s.op);
        if let Some(e) = &s.error {
            println!("    {e}");
            continue;
        }
        if s.passed == Some(false) {
            let expect = s.expect.as_ref().map(|e| e.as_str().map_or_else(|| e.to_string(), str::to_string));
            println!("    expected: {}", expect.unwrap_or_default());
            println!("    actual:   {}", s.display.replace('\n', "\n              "));
        } else {
            for line in s.display.lines() {
                println!("    {line}");
            }
        }
    }
    if let Some(e) = &out.error {
        if r.results.is_empty() {
            println!("error: {e}");
        }
    }
    let passed = r.results.iter().filter(|s| s.passed == Some(true)).count();
    let failed = r.results.iter().filter(|s| s.passed == Some(false)).count();
    println!("{} steps, {passed} passed, {failed} failed", r.results.len());
}

fn print_single(out: &Outcome, json: bool) -> u8 {
    if json {
        println!("{}", serde_json::to_string_pretty(&out.report).expect("report serialises"));
    } else {
        for s in out.report.results.iter().filter(|s| s.error.is_none()) {
            println!("{}", s.display);
        }
    }
    if let Some(e) = &out.error {
        eprintln!("error: {e}");
    }
    out.exit_code()
}
