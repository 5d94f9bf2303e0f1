use std::process::ExitCode;

fn main() -> ExitCode {
    lqfi_cli::run(std::env::args_os().collect())
}
