use std::io::{IsTerminal, Read};
use std::process::ExitCode;

use clap::Parser;
use orthocolor_cli::{run, Cli, Command};

fn wants_stdin(cli: &Cli) -> bool {
    let missing = |p: &Option<std::path::PathBuf>| p.as_ref().is_none_or(|p| p.as_os_str() == "-");
    match &cli.command {
        Command::Chroma(a) => missing(&a.input),
        Command::Search(a) => missing(&a.input),
        Command::SnarkScan(a) => missing(&a.input),
        Command::Linegraph { input } => missing(input),
        _ => false,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut stdin = String::new();
    if wants_stdin(&cli) {
        let mut handle = std::io::stdin();
        if handle.is_terminal() {
            eprintln!("reading graph6 records from stdin");
        }
        if let Err(e) = handle.read_to_string(&mut stdin) {
            eprintln!("error: reading stdin: {e}");
            return ExitCode::from(2);
        }
    }
    let out = run(&cli, &stdin);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
