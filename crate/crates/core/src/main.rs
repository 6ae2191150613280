use std::io;
use std::process::ExitCode;

use cows_adapt::cli::{run, Io, MAX_STATES_VAR};

fn main() -> ExitCode {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut io = Io {
        stdin: &mut stdin.lock(),
        stdout: &mut stdout.lock(),
        stderr: &mut stderr.lock(),
        max_states_var: std::env::var(MAX_STATES_VAR).ok(),
    };
    ExitCode::from(run(std::env::args_os(), &mut io))
}
