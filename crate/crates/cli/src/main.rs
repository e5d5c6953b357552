use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latesched_cli::report::{to_csv_string, ReportRow, Status};
use latesched_cli::run::{format_frontier, format_schedule, oracle, Answer, OracleAnswer};
use latesched_cli::{
    compare_corpus, exit, gen_random, parse_instance, resolve, solve, CliError, GenParams,
    ParsedInstance, Scenario, Settings,
};
use latesched_core::oracle::DEFAULT_BRUTE_FORCE_CAP;
use latesched_core::time::{display, ParsedRational};
use latesched_core::GuessBudget;

#[derive(Parser)]
#[command(
    name = "latesched",
    version,
    about = "Approximate maximum-lateness scheduling with heads and tails"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded random instance files.
    Gen(GenArgs),
    /// Run the approximation scheme for one instance.
    Solve(SolveArgs),
    /// Approximate lateness/makespan frontier of one instance.
    Pareto(ParetoArgs),
    /// Exact optimum of one small instance.
    Oracle(OracleArgs),
    /// Audit a directory of instances against the oracle.
    Compare(CompareArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Scenario::P0)]
    scenario: Scenario,
    #[arg(long, default_value_t = 10)]
    p_max: i64,
    #[arg(long, default_value_t = 20)]
    r_max: i64,
    #[arg(long, default_value_t = 15)]
    q_max: i64,
    /// Number of files; seeds run from --seed upward. Needs --out as a directory when > 1.
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Output file, or directory when --count > 1. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Defaults to what the file describes.
    #[arg(long, value_enum)]
    scenario: Option<Scenario>,
    /// Accuracy, e.g. 1/2. Window scenarios require 1/f.
    #[arg(long, default_value = "1/2")]
    epsilon: ParsedRational,
    #[arg(long)]
    deadline: Option<i64>,
    #[arg(long)]
    t1: Option<i64>,
    #[arg(long)]
    t2: Option<i64>,
    #[arg(long, default_value_t = GuessBudget::DEFAULT.0)]
    guess_budget: u64,
}

impl ScenarioArgs {
    fn settings(&self) -> Settings {
        Settings {
            scenario: self.scenario,
            epsilon: self.epsilon,
            deadline: self.deadline,
            t1: self.t1,
            t2: self.t2,
            budget: GuessBudget(self.guess_budget),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Write the CSV row here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParetoArgs {
    file: PathBuf,
    #[arg(long, default_value = "1/2")]
    epsilon: ParsedRational,
    #[arg(long, default_value_t = GuessBudget::DEFAULT.0)]
    guess_budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    file: PathBuf,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    oracle_cap: usize,
}

#[derive(Args)]
struct CompareArgs {
    dir: PathBuf,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    oracle_cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the wall_ms column empty so reports are byte-identical across runs.
    #[arg(long)]
    omit_timing: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::FAILURE
            } else {
                exit::SUCCESS
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Pareto(args) => cmd_pareto(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("latesched: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load(path: &Path) -> Result<ParsedInstance, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    parse_instance(&text).map_err(|source| CliError::Schema {
        path: path.into(),
        source,
    })
}

fn instance_name(path: &Path, parsed: &ParsedInstance) -> String {
    parsed
        .name()
        .map(str::to_owned)
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_default()
}

fn write_out(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

/// Prints `dump` and the CSV report; the report goes to `out` when given.
fn emit(dump: &str, csv: &str, out: Option<&Path>) -> Result<(), CliError> {
    if let Some(path) = out {
        write_out(path, csv)?;
    }
    let mut stdout = std::io::stdout().lock();
    let text = if out.is_some() {
        dump.to_string()
    } else {
        format!("{dump}\n{csv}")
    };
    stdout
        .write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn cmd_gen(args: GenArgs) -> Result<i32, CliError> {
    if args.count > 1 && args.out.is_none() {
        return Err(CliError::Usage("--count above 1 needs --out DIR".into()));
    }
    let params = |seed| GenParams {
        n: args.n,
        seed,
        p_max: args.p_max,
        r_max: args.r_max,
        q_max: args.q_max,
        scenario: args.scenario,
    };
    if args.count <= 1 {
        let json = gen_random(&params(args.seed))?.to_json() + "\n";
        match &args.out {
            Some(path) => write_out(path, &json)?,
            None => print!("{json}"),
        }
        return Ok(exit::SUCCESS);
    }
    let dir = args.out.expect("checked above");
    fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let width = (args.count - 1).to_string().len();
    for i in 0..args.count {
        let file = gen_random(&params(args.seed + i))?;
        write_out(
            &dir.join(format!("{}-{i:0width$}.json", args.scenario)),
            &(file.to_json() + "\n"),
        )?;
    }
    Ok(exit::SUCCESS)
}

fn cmd_solve(args: SolveArgs) -> Result<i32, CliError> {
    let parsed = load(&args.file)?;
    let settings = args.scenario.settings();
    let resolved = resolve(&parsed, &settings)?;
    let out = solve(&parsed.instance, &resolved, settings.budget)?;
    let name = instance_name(&args.file, &parsed);
    let header = format!(
        "scenario: {}\nepsilon: {}\n",
        resolved.scenario,
        display(resolved.epsilon)
    );
    let (dump, status) = match &out.answer {
        Answer::Schedule(s) => (header + &format_schedule(s), Status::Ok),
        Answer::Frontier(set) => (header + &format_frontier(set), Status::Ok),
        Answer::Infeasible => (header + "infeasible\n", Status::Infeasible),
    };
    let mut row = ReportRow::new(name, resolved.scenario, resolved.epsilon, status);
    row.algorithm_lmax = out.lmax();
    row.guesses = Some(out.guesses);
    row.wall = Some(out.wall);
    emit(&dump, &to_csv_string(&[row]), args.out.as_deref())?;
    Ok(if status == Status::Infeasible {
        exit::INFEASIBLE
    } else {
        exit::SUCCESS
    })
}

fn cmd_pareto(args: ParetoArgs) -> Result<i32, CliError> {
    cmd_solve(SolveArgs {
        file: args.file,
        scenario: ScenarioArgs {
            scenario: Some(Scenario::Pareto),
            epsilon: args.epsilon,
            deadline: None,
            t1: None,
            t2: None,
            guess_budget: args.guess_budget,
        },
        out: args.out,
    })
}

fn cmd_oracle(args: OracleArgs) -> Result<i32, CliError> {
    let parsed = load(&args.file)?;
    let resolved = resolve(&parsed, &args.scenario.settings())?;
    let header = format!("scenario: {}\n", resolved.scenario);
    match oracle(&parsed.instance, &resolved, args.oracle_cap)? {
        OracleAnswer::Frontier(set) => print!("{header}{}", format_frontier(&set)),
        OracleAnswer::Lmax(Some(opt)) => print!("{header}{}", format_schedule(&opt.witness)),
        OracleAnswer::Lmax(None) => return Err(CliError::Infeasible),
    }
    Ok(exit::SUCCESS)
}

fn cmd_compare(args: CompareArgs) -> Result<i32, CliError> {
    let mut outcome = compare_corpus(&args.dir, &args.scenario.settings(), args.oracle_cap)?;
    if args.omit_timing {
        outcome.rows.iter_mut().for_each(|r| r.wall = None);
    }
    let csv = to_csv_string(&outcome.rows);
    match &args.out {
        Some(path) => write_out(path, &csv)?,
        None => print!("{csv}"),
    }
    let violations = outcome.count(Status::Violation);
    if violations > 0 {
        eprintln!("latesched: {}", CliError::RatioViolation(violations));
    }
    Ok(outcome.exit_code())
}
