use clap::Parser;

use ice_core::cli::{run, Cli};

fn main() {
    // clap exits with code 2 on usage errors and 0 for --help/--version.
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => print!("{output}"),
        Err(e) => {
            eprintln!("error: {}: {e}", e.code());
            std::process::exit(1);
        }
    }
}
