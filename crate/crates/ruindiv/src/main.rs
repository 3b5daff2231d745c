use clap::error::ErrorKind;
use clap::Parser;

use ruindiv::cli::{self, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = cli::run(&cli) {
        eprintln!("{err}");
        std::process::exit(cli::exit_code(&err));
    }
}
