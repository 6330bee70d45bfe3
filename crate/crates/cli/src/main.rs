use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(strictlyap_cli::app::run_args(std::env::args_os()) as u8)
}
