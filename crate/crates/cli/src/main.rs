use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nct_core::ncat::gaunt::is_gaunt;
use nct_core::ncat::json::{from_json, to_json};
use nct_core::ncat::standard::{standard_object, StandardKind};
use nct_core::theta::theta_enumerate_objects;
use nct_core::verifier::{error_exit_code, exit_code, report_render, run_suite, run_suite_timed, Format, Suite, SuiteConfig};
use nct_core::{Budget, Ctx, NctError};

#[derive(Parser)]
#[command(name = "nct", about = "Finite strict n-categories, Θ_n presheaves and the verification suites")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a named object as JSON.
    Build {
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Cell dimension for `cell` and `boundary`, top vertex for `simplex`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Check a property of an object file.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window: Option<usize>,
        /// Search-node budget per functor enumeration; defaults to NCT_BUDGET.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Inject the suite's fault; the run must then fail.
        #[arg(long)]
        fault: bool,
        /// Record elapsed time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Enumerate objects.
    Enum {
        #[command(subcommand)]
        what: EnumCmd,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    Gaunt { file: PathBuf },
}

#[derive(Subcommand)]
enum EnumCmd {
    Theta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_size: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cell,
    Boundary,
    #[value(alias = "E")]
    WalkingIso,
    #[value(alias = "delta")]
    Simplex,
    K,
    Empty,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}

fn need_k(k: Option<usize>, kind: &str) -> Result<usize, NctError> {
    k.ok_or_else(|| NctError::input(format!("`{kind}` needs --k")))
}

fn write(path: &PathBuf, text: &str) -> Result<(), NctError> {
    std::fs::write(path, text).map_err(|e| NctError::input(format!("cannot write {}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<i32, NctError> {
    match cmd {
        Cmd::Build { kind, n, k, output } => {
            let kind = match kind {
                Kind::Cell => StandardKind::Cell(need_k(k, "cell")?),
                Kind::Boundary => StandardKind::Boundary(need_k(k, "boundary")?),
                Kind::WalkingIso => StandardKind::WalkingIso,
                Kind::Simplex => StandardKind::Simplex((0..=need_k(k, "simplex")?).collect()),
                Kind::K => StandardKind::K,
                Kind::Empty => StandardKind::Empty,
            };
            let x = standard_object(&kind, n)?;
            write(&output, &to_json(&x))?;
            Ok(0)
        }
        Cmd::Check { what: CheckCmd::Gaunt { file } } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| NctError::input(format!("cannot read {}: {e}", file.display())))?;
            let x = from_json(&text)?;
            let report = is_gaunt(&x, &Ctx::new(Budget::from_env()))?;
            println!("{}", serde_json::to_string_pretty(&report).map_err(|e| NctError::internal(e.to_string()))?);
            Ok(if report.gaunt { 0 } else { 1 })
        }
        Cmd::Verify { suite, n, window, budget, seed, report, format, fault, timing } => {
            let mut cfg = SuiteConfig::new(suite, n);
            cfg.window = window;
            cfg.budget = Budget::from_env();
            if let Some(b) = budget {
                cfg.budget.max_nodes = b;
            }
            cfg.seed = seed;
            cfg.fault = fault;
            let outcome = if timing { run_suite_timed(&cfg) } else { run_suite(&cfg) };
            let code = exit_code(&outcome);
            let r = outcome?;
            let text = report_render(&r, format);
            match report {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(code)
        }
        Cmd::Enum { what: EnumCmd::Theta { n, max_size } } => {
            if n == 0 {
                return Err(NctError::input("n must be at least 1"));
            }
            for o in theta_enumerate_objects(n, max_size) {
                println!("{o}");
            }
            Ok(0)
        }
    }
}
