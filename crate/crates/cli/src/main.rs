use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use intlocus_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = execute(&cli);
    if code == 2 && !cli.json {
        eprint!("{text}");
    } else {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(text.as_bytes());
    }
    ExitCode::from(code as u8)
}
