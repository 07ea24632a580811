use std::process::ExitCode;

fn main() -> ExitCode {
    pppps::cli::main()
}
