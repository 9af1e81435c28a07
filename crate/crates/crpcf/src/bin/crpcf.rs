use std::process::ExitCode;

fn main() -> ExitCode {
    crpcf::harness::cli::run()
}
