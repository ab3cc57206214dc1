use std::process::ExitCode;

fn main() -> ExitCode {
    muntzlab_cli::run(std::env::args_os())
}
