use std::io::Write;
use std::process::ExitCode;

use bsp::Cli;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = bsp::run(&cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    ExitCode::from(out.code as u8)
}
