//! Command line front-end. Exit codes: 0 pass, 1 spec failure, 2 protocol
//! error, 3 malformed input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::demo::{run_demo, DemoName};
use crate::engine::{trace_from_jsonl, trace_to_jsonl, RunTrace};
use crate::geometry::Tolerance;
use crate::render::render_svg;
use crate::scenario::{classification_report, Scenario, ScenarioError};
use crate::verify::{check_k_step_spec, Spec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_SPEC_FAIL: i32 = 1;
pub const EXIT_PROTOCOL_ERROR: i32 = 2;
pub const EXIT_MALFORMED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "robot-permute",
    version,
    about = "Permutation protocols for oblivious robots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symmetry data and protocol feasibility of a scenario's configuration.
    Classify {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Run a scenario and write its JSONL trace.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        /// Output path; stdout when absent.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a trace against Move-All or Visit-All.
    Verify {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_parser = parse_spec)]
        spec: Spec,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = Tolerance::DEFAULT_EPS)]
        tolerance: f64,
    },
    /// Draw a trace as SVG.
    Render {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Run one of the impossibility demos: thm2, thm3, thm5 or thm9.
    Demo {
        name: String,
        /// Bypass the feasibility guard.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json: bool,
    },
}

fn parse_spec(s: &str) -> Result<Spec, String> {
    s.parse()
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_MALFORMED,
            message: message.into(),
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        let code = match e {
            ScenarioError::Geometry(_) => EXIT_PROTOCOL_ERROR,
            _ => EXIT_MALFORMED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: EXIT_PROTOCOL_ERROR,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn load_trace(path: &Path) -> Result<RunTrace, Failure> {
    trace_from_jsonl(&read(path)?)
        .map_err(|e| Failure::malformed(format!("malformed trace {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) {
    // A closed stdout is not worth a panic.
    let _ = out.write_all(text.as_bytes());
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Classify { scenario } => {
            let s = Scenario::load(&scenario)?;
            let report = classification_report(&s.points, s.tol()).map_err(ScenarioError::from)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            emit(out, &format!("{text}\n"));
            Ok(EXIT_PASS)
        }
        Command::Simulate {
            scenario,
            trace,
            rounds,
            seed,
        } => {
            let mut s = Scenario::load(&scenario)?;
            if let Some(r) = rounds {
                s.rounds = r;
            }
            if let Some(seed) = seed {
                s = s.with_seed(seed);
            }
            s.validate()?;
            let result = s.run()?;
            let text = trace_to_jsonl(&result);
            match trace {
                Some(path) => write_file(&path, &text)?,
                None => emit(out, &text),
            }
            match &result.error {
                Some(e) => {
                    emit(err, &format!("round {}: {e}\n", e.round));
                    Ok(EXIT_PROTOCOL_ERROR)
                }
                None => Ok(EXIT_PASS),
            }
        }
        Command::Verify {
            trace,
            spec,
            k,
            tolerance,
        } => {
            if tolerance.is_nan() || tolerance <= 0.0 {
                return Err(Failure::malformed("tolerance must be positive"));
            }
            let t = load_trace(&trace)?;
            let verdict = check_k_step_spec(&t, spec, k, Tolerance::new(tolerance));
            emit(out, &format!("{}\n", verdict.to_json()));
            Ok(if verdict.pass {
                EXIT_PASS
            } else {
                EXIT_SPEC_FAIL
            })
        }
        Command::Render { trace, svg } => {
            let t = load_trace(&trace)?;
            write_file(&svg, &render_svg(&t))?;
            Ok(EXIT_PASS)
        }
        Command::Demo { name, force, json } => {
            let demo: DemoName = name.parse().map_err(Failure::malformed)?;
            let report = run_demo(demo, force).map_err(|e| Failure {
                code: EXIT_PROTOCOL_ERROR,
                message: format!("{}: {e}", e.name()),
            })?;
            if json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                emit(out, &format!("{text}\n"));
            } else {
                emit(out, &report.to_text());
            }
            Ok(if report.as_predicted() {
                EXIT_PASS
            } else {
                EXIT_SPEC_FAIL
            })
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_MALFORMED
            } else {
                EXIT_PASS
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            emit(target, &e.render().to_string());
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            emit(err, &format!("error: {}\n", f.message));
            f.code
        }
    }
}
