use clap::Parser;
use schurdist_cli::{execute_and_write, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = execute_and_write(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
