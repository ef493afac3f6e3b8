use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qframe_core::cli::run(std::env::args_os()))
}
