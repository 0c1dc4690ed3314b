use std::process::ExitCode;

fn main() -> ExitCode {
    ltpsurv::cli::main_with_args(std::env::args_os())
}
