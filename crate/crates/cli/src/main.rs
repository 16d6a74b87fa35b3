use std::process::ExitCode;

use tcs_ising::{ProblemRegistry, SolverRegistry};
use tcs_ising_cli::{parse_args, run, CliError};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let problems = ProblemRegistry::with_builtins();
    let solvers = SolverRegistry::with_builtins();
    let outcome = parse_args(std::env::args_os(), &problems, &solvers)
        .and_then(|config| run(&config, &problems, &solvers));
    match outcome {
        Ok(out) => {
            println!("{}", out.results_path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            match &e {
                CliError::Clap(c) => {
                    let _ = c.print();
                }
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(code as u8)
        }
    }
}
