//! Command-line driver: `parse`, `explore`, `check` and `scenario`.
//!
//! Exit codes are [`EXIT_OK`], [`EXIT_FAILS`] (some property fails),
//! [`EXIT_ERROR`] and [`EXIT_TRUNCATED`]. Diagnostics go to standard error
//! as `WARN:` lines, errors as a single `error:` line.

pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::explorer::{explore, export_aut, ExploreOptions, Lts, DEFAULT_MAX_STATES};
use crate::logic::{check, parse_props, CheckError, FormulaError, Verdict};
use crate::scenario::{tollbooth_source, ParamsError, TollboothParams};
use crate::syntax::{dump_ast, parse_model, Model, ParseError};
use report::{trace_lines, PropertyReport, RunReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILS: u8 = 1;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_TRUNCATED: u8 = 3;

/// Environment variable overriding the default state bound.
pub const MAX_STATES_VAR: &str = "COWS_ADAPT_MAX_STATES";

pub const SCENARIOS: &[&str] = &["tollbooth"];

#[derive(Parser, Debug)]
#[command(name = "cows-adapt", version, about = "Explore and model-check service orchestration models")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a model and report syntax errors.
    Parse {
        /// Model file, `-` for standard input.
        model: String,
        #[arg(long)]
        dump_ast: bool,
    },
    /// Build the state space and write it in Aldebaran format.
    Explore {
        model: String,
        #[command(flatten)]
        bounds: Bounds,
        /// Output `.aut` file, `-` for standard output.
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Explore a model and check every property of a `.prop` file.
    Check {
        model: String,
        #[arg(long)]
        prop: PathBuf,
        /// Print the witness or counterexample under each verdict.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Emit a bundled model.
    Scenario {
        name: String,
        #[arg(long, default_value = "0,4,10,60")]
        params: String,
        /// Destination file, `-` for standard output.
        #[arg(long, default_value = "-")]
        emit: String,
    },
}

#[derive(Args, Debug)]
struct Bounds {
    #[arg(long, value_parser = positive)]
    max_states: Option<usize>,
    #[arg(long, value_parser = positive)]
    max_depth: Option<usize>,
    /// Keep definition unfoldings as `tau` steps.
    #[arg(long)]
    keep_tau: bool,
    #[arg(long, default_value_t = 1, value_parser = positive)]
    workers: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got `{}`", s)),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}:{line}:{column}: invalid UTF-8")]
    Encoding { path: String, line: usize, column: usize },
    #[error("{path}:{source}")]
    Formula { path: String, source: FormulaError },
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("unknown scenario `{0}` (available: tollbooth)")]
    UnknownScenario(String),
    #[error("{MAX_STATES_VAR} must be a positive integer, got `{0}`")]
    MaxStatesVar(String),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Standard streams and environment of one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    /// Value of [`MAX_STATES_VAR`], if set.
    pub max_states_var: Option<String>,
}

fn io_err(path: &str) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_string(),
        source,
    }
}

fn display_path(path: &str) -> String {
    if path == "-" {
        "<stdin>".into()
    } else {
        path.into()
    }
}

fn read_source(path: &str, io: &mut Io) -> Result<String, CliError> {
    let bytes = if path == "-" {
        let mut b = Vec::new();
        io.stdin.read_to_end(&mut b).map_err(io_err("<stdin>"))?;
        b
    } else {
        fs::read(path).map_err(io_err(path))?
    };
    String::from_utf8(bytes).map_err(|e| {
        let valid = &e.as_bytes()[..e.utf8_error().valid_up_to()];
        let line = 1 + valid.iter().filter(|&&b| b == b'\n').count();
        let last = valid.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        let column = 1 + String::from_utf8_lossy(&valid[last..]).chars().count();
        CliError::Encoding {
            path: display_path(path),
            line,
            column,
        }
    })
}

fn load_model(path: &str, io: &mut Io) -> Result<Model, CliError> {
    let src = read_source(path, io)?;
    parse_model(&src).map_err(|source| CliError::Parse {
        path: display_path(path),
        source,
    })
}

fn options(b: &Bounds, io: &Io) -> Result<ExploreOptions, CliError> {
    let default = match &io.max_states_var {
        Some(v) => positive(v.trim()).map_err(|_| CliError::MaxStatesVar(v.clone()))?,
        None => DEFAULT_MAX_STATES,
    };
    Ok(ExploreOptions {
        max_states: b.max_states.unwrap_or(default),
        max_depth: b.max_depth,
        keep_tau: b.keep_tau,
        workers: b.workers,
    })
}

fn warn(io: &mut Io, msg: &str) -> std::io::Result<()> {
    writeln!(io.stderr, "WARN: {}", msg)
}

fn explore_reporting(model: &Model, opts: &ExploreOptions, io: &mut Io) -> Result<Lts, CliError> {
    let lts = explore(model, opts);
    for d in &lts.diagnostics {
        warn(io, d).map_err(io_err("<stderr>"))?;
    }
    if lts.is_truncated() {
        warn(
            io,
            &format!(
                "state space truncated ({}) after {} states; results may be unsound",
                lts.truncated,
                lts.states.len()
            ),
        )
        .map_err(io_err("<stderr>"))?;
    }
    Ok(lts)
}

fn write_report(path: &Option<PathBuf>, report: &RunReport) -> Result<(), CliError> {
    if let Some(p) = path {
        fs::write(p, report.to_key_values()).map_err(io_err(&p.display().to_string()))?;
    }
    Ok(())
}

fn base_report(command: &'static str, source: &str, opts: &ExploreOptions, lts: &Lts, start: Instant) -> RunReport {
    RunReport {
        command,
        source: source.to_string(),
        max_states: opts.max_states,
        max_depth: opts.max_depth,
        keep_tau: opts.keep_tau,
        workers: opts.workers,
        states: lts.states.len(),
        transitions: lts.transitions.len(),
        truncated: lts.truncated,
        duration: start.elapsed(),
        properties: Vec::new(),
    }
}

fn cmd_parse(path: &str, dump: bool, io: &mut Io) -> Result<u8, CliError> {
    let m = load_model(path, io)?;
    let out = if dump {
        dump_ast(&m)
    } else {
        format!("ok: {} definitions\n", m.definitions.len())
    };
    io.stdout.write_all(out.as_bytes()).map_err(io_err("<stdout>"))?;
    Ok(EXIT_OK)
}

fn cmd_explore(
    path: &str,
    bounds: &Bounds,
    out: &Option<String>,
    report: &Option<PathBuf>,
    io: &mut Io,
) -> Result<u8, CliError> {
    let start = Instant::now();
    let model = load_model(path, io)?;
    let opts = options(bounds, io)?;
    let lts = explore_reporting(&model, &opts, io)?;
    let counts = format!(
        "states: {}\ntransitions: {}\ntruncated: {}\n",
        lts.states.len(),
        lts.transitions.len(),
        lts.truncated
    );
    match out.as_deref() {
        Some("-") => {
            io.stdout
                .write_all(export_aut(&lts).as_bytes())
                .map_err(io_err("<stdout>"))?;
            io.stderr.write_all(counts.as_bytes()).map_err(io_err("<stderr>"))?;
        }
        Some(file) => {
            fs::write(file, export_aut(&lts)).map_err(io_err(file))?;
            io.stdout.write_all(counts.as_bytes()).map_err(io_err("<stdout>"))?;
        }
        None => io.stdout.write_all(counts.as_bytes()).map_err(io_err("<stdout>"))?,
    }
    write_report(report, &base_report("explore", path, &opts, &lts, start))?;
    Ok(if lts.is_truncated() { EXIT_TRUNCATED } else { EXIT_OK })
}

fn cmd_check(
    path: &str,
    prop: &PathBuf,
    trace: bool,
    bounds: &Bounds,
    report: &Option<PathBuf>,
    io: &mut Io,
) -> Result<u8, CliError> {
    let start = Instant::now();
    let prop_path = prop.display().to_string();
    let props_src = fs::read_to_string(prop).map_err(io_err(&prop_path))?;
    let props = parse_props(&props_src).map_err(|source| CliError::Formula {
        path: prop_path.clone(),
        source,
    })?;
    let model = load_model(path, io)?;
    let opts = options(bounds, io)?;
    let lts = explore_reporting(&model, &opts, io)?;
    let mut rep = base_report("check", path, &opts, &lts, start);
    let mut all_hold = true;
    let mut text = String::new();
    for p in &props {
        let r = check(&lts, &p.formula)?;
        for w in r.warnings.iter().filter(|w| !w.starts_with("state space truncated")) {
            warn(io, &format!("{}: {}", p.name, w)).map_err(io_err("<stderr>"))?;
        }
        text.push_str(&format!("{}: {}\n", p.name, r.verdict));
        if trace && !r.evidence.steps.is_empty() {
            for line in trace_lines(&r.evidence) {
                text.push_str(&format!("  {}\n", line));
            }
        }
        all_hold &= r.verdict == Verdict::Holds;
        rep.properties.push(PropertyReport {
            name: p.name.clone(),
            verdict: r.verdict,
            evidence: r.evidence,
        });
    }
    io.stdout.write_all(text.as_bytes()).map_err(io_err("<stdout>"))?;
    rep.duration = start.elapsed();
    write_report(report, &rep)?;
    Ok(if lts.is_truncated() {
        EXIT_TRUNCATED
    } else if all_hold {
        EXIT_OK
    } else {
        EXIT_FAILS
    })
}

fn cmd_scenario(name: &str, params: &str, emit: &str, io: &mut Io) -> Result<u8, CliError> {
    if !SCENARIOS.contains(&name) {
        return Err(CliError::UnknownScenario(name.to_string()));
    }
    let p: TollboothParams = params.parse()?;
    let text = tollbooth_source(&p);
    if emit == "-" {
        io.stdout.write_all(text.as_bytes()).map_err(io_err("<stdout>"))?;
    } else {
        fs::write(emit, text).map_err(io_err(emit))?;
    }
    Ok(EXIT_OK)
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, io: &mut Io) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                io.stderr.write_all(rendered.as_bytes())
            } else {
                io.stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Parse { model, dump_ast } => cmd_parse(model, *dump_ast, io),
        Command::Explore {
            model,
            bounds,
            out,
            report,
        } => cmd_explore(model, bounds, out, report, io),
        Command::Check {
            model,
            prop,
            trace,
            bounds,
            report,
        } => cmd_check(model, prop, *trace, bounds, report, io),
        Command::Scenario { name, params, emit } => cmd_scenario(name, params, emit, io),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {}", e);
            EXIT_ERROR
        }
    }
}
