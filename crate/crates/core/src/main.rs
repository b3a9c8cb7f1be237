use clap::Parser;
use tpctf::cli::{run, Cli, EXIT_IO, EXIT_VALIDATION};
use tpctf::Error;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version on stdout with success status
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Io(_) | Error::Image(_) => EXIT_IO,
                _ => EXIT_VALIDATION,
            };
            std::process::exit(code);
        }
    }
}
