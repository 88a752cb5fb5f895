use std::process::exit;

use clap::Parser;
use schreier_ising::cli::{run, Cli};
use schreier_ising::Error;

fn main() {
    // clap itself exits 2 on usage errors.
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::BudgetExceeded { .. } => 3,
                _ => 1,
            };
            exit(code);
        }
    }
}
