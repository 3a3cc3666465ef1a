use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use polyheis_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut input = String::new();
    if cli.reads_stdin() {
        if let Err(e) = std::io::stdin().read_to_string(&mut input) {
            eprintln!("cannot read standard input: {e}");
            return ExitCode::from(2);
        }
    }
    let out = run(&cli, &input);
    println!("{}", out.output);
    ExitCode::from(out.code as u8)
}
