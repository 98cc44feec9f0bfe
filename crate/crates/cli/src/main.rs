use clap::Parser;

use mirror_cli::commands::{run, Cli, CliError};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            let code = e.exit_code();
            match e {
                CliError::Input(msg) => eprintln!("error: {msg}"),
                CliError::Verification(report) => print!("{report}"),
            }
            std::process::exit(code);
        }
    }
}
