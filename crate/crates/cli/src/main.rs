use std::process::ExitCode;

use clap::Parser;
use umbra_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = umbra_cli::execute(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code)
}
