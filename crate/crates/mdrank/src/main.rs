use std::process::ExitCode;

fn main() -> ExitCode {
    mdrank::cli::run(std::env::args_os())
}
