use std::io::{self, Write};

use clap::Parser;

use graphk_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(doc) => {
            let json = serde_json::to_string_pretty(&doc).expect("document serializes");
            // Exit quietly when the reader closes the pipe (e.g. `graphk … | head`).
            if let Err(e) = writeln!(io::stdout(), "{json}") {
                if e.kind() == io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                eprintln!("error: {e}");
                std::process::exit(2);
            }
            if !doc.all_checks_pass() {
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
