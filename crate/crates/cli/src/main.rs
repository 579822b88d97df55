use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relstab::battery::{run_suite, SUITE_SEED};
use relstab::run::{run, status_of, RunOutput, Status};
use relstab::scenario::{parse_scenario, TaskKind};

#[derive(Parser)]
#[command(name = "relstab", version, about = "Localization triangles from precovering families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the task named in the scenario
    Run(ScenarioArgs),
    /// Localize and verify the scenario object
    Verify(ScenarioArgs),
    /// Cross-check the solvers on the scenario object
    Oracle(ScenarioArgs),
    /// Run the shipped acceptance battery
    Suite(OutputArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    file: PathBuf,
    /// Override the scenario cap
    #[arg(long)]
    cap: Option<usize>,
    /// Override the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the JSON report here
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the text report here
    #[arg(long)]
    text: Option<PathBuf>,
    /// Print nothing to stdout
    #[arg(long)]
    quiet: bool,
}

fn write(path: &Path, body: &str) -> Result<(), ExitCode> {
    std::fs::write(path, body).map_err(|e| {
        eprintln!("relstab: cannot write {}: {e}", path.display());
        ExitCode::from(Status::InputError.code() as u8)
    })
}

fn emit(out: &OutputArgs, text: &str, json: &str) -> Result<(), ExitCode> {
    if let Some(p) = &out.json {
        write(p, json)?;
    }
    if let Some(p) = &out.text {
        write(p, text)?;
    }
    if !out.quiet {
        print!("{text}");
    }
    Ok(())
}

fn scenario_command(args: &ScenarioArgs, force: Option<TaskKind>) -> ExitCode {
    let fail = |e: relstab_core::Error| {
        eprintln!("relstab: {e}");
        ExitCode::from(status_of(&e).code() as u8)
    };
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("relstab: cannot read {}: {e}", args.file.display());
            return ExitCode::from(Status::InputError.code() as u8);
        }
    };
    let mut sc = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    if let Some(kind) = force {
        sc.task.kind = kind;
    }
    if let Some(cap) = args.cap {
        sc.task.cap = cap;
    }
    if let Some(seed) = args.seed {
        sc.task.seed = seed;
    }
    let out: RunOutput = match run(&sc) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    if let Err(code) = emit(&args.out, &out.text, &out.json_string()) {
        return code;
    }
    ExitCode::from(out.status.code() as u8)
}

fn suite_command(out: &OutputArgs) -> ExitCode {
    let report = run_suite(SUITE_SEED);
    let mut json = serde_json::to_string_pretty(&report).expect("suite report serializes");
    json.push('\n');
    let mut text = String::new();
    for c in &report.criteria {
        let _ = writeln!(
            text,
            "criterion {:>2} {:<45} {} ({} checks)",
            c.id,
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.checked
        );
        for n in &c.notes {
            let _ = writeln!(text, "    {n}");
        }
        for f in &c.failures {
            let _ = writeln!(text, "    failure: {f}");
        }
    }
    let _ = writeln!(text, "suite {}", if report.verdict { "PASS" } else { "FAIL" });
    if let Err(code) = emit(out, &text, &json) {
        return code;
    }
    ExitCode::from(if report.verdict { Status::Ok } else { Status::Failed }.code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(a) => scenario_command(a, None),
        Command::Verify(a) => scenario_command(a, Some(TaskKind::Verify)),
        Command::Oracle(a) => scenario_command(a, Some(TaskKind::Oracle)),
        Command::Suite(o) => suite_command(o),
    }
}
