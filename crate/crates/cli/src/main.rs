//! `odelin`: decide linearizability of a quasi-linear ODE by point
//! transformations.

mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use odelin_core::liealg::linearization_test_1_with;
use odelin_core::{linearization_test_2_with, parse_ode, Error, Limits, ODEProblem};
use report::Report;

const EXIT_LINEARIZABLE: u8 = 0;
const EXIT_NOT_LINEARIZABLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "odelin", version, about = "Linearization tests for quasi-linear ODEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetry-algebra test (no parameters or undetermined functions).
    Test1(Common),
    /// Differential Thomas decomposition of the linearizing system.
    Test2(Common),
}

#[derive(Args)]
struct Common {
    /// The equation, e.g. "y'' + y'^2/y = 0".
    ode: String,
    /// Constant parameter name (repeatable).
    #[arg(long = "param", value_name = "NAME")]
    params: Vec<String>,
    /// Undetermined function of (x, y) (repeatable); `h` or `h(x,y)`.
    #[arg(long = "func", value_name = "NAME")]
    funcs: Vec<String>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timings: bool,
    #[arg(long, value_name = "N", default_value_t = Limits::default().max_branches)]
    max_branches: usize,
    #[arg(long, value_name = "N", default_value_t = Limits::default().max_terms)]
    max_terms: usize,
    /// Minimum truncation order of the power series in test I.
    #[arg(long, value_name = "N")]
    series_order: Option<u32>,
}

fn func_name(s: &str) -> &str {
    s.trim().strip_suffix("(x,y)").unwrap_or(s.trim())
}

impl Common {
    fn problem(&self) -> odelin_core::Result<ODEProblem> {
        let params: Vec<&str> = self.params.iter().map(|s| s.trim()).collect();
        let funcs: Vec<&str> = self.funcs.iter().map(|s| func_name(s)).collect();
        parse_ode(&self.ode, &params, &funcs)
    }

    fn limits(&self) -> Limits {
        Limits {
            max_branches: self.max_branches,
            max_terms: self.max_terms,
        }
    }
}

fn run(cmd: &Command) -> Result<Report, Error> {
    let start = Instant::now();
    let (opts, test1) = match cmd {
        Command::Test1(c) => (c, true),
        Command::Test2(c) => (c, false),
    };
    let q = opts.problem()?;
    let elapsed = || opts.timings.then(|| start.elapsed().as_millis() as u64);
    if test1 {
        let r = linearization_test_1_with(&q, opts.series_order, 0)?;
        Ok(Report::from_test1(&r, elapsed()))
    } else {
        let r = linearization_test_2_with(&q, opts.limits())?;
        Ok(Report::from_test2(q.order, &r, elapsed()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = match &cli.command {
        Command::Test1(c) | Command::Test2(c) => c.json,
    };
    match run(&cli.command) {
        Ok(report) => {
            let text = if json {
                serde_json::to_string_pretty(&report).expect("serializable") + "\n"
            } else {
                report.human()
            };
            // a closed pipe is not an error for a report writer
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(if report.linearizable() {
                EXIT_LINEARIZABLE
            } else {
                EXIT_NOT_LINEARIZABLE
            })
        }
        Err(e @ Error::ResourceLimit(_)) => {
            eprintln!("odelin: {e}");
            ExitCode::from(EXIT_RESOURCE)
        }
        Err(e) => {
            eprintln!("odelin: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
