use std::process::ExitCode;

fn main() -> ExitCode {
    joint_spectra::cli::run()
}
