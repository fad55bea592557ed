use std::process::ExitCode;

fn main() -> ExitCode {
    dicing::cli::main_with_args(std::env::args_os())
}
