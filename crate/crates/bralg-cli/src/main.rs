use bralg_cli::{run, Cli};
use clap::Parser;

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(result) => {
            if cli.json {
                println!("{}", result.json);
            } else {
                print!("{}", result.text);
            }
        }
        Err(e) => {
            eprintln!("{}", e);
            std::process::exit(e.exit_code());
        }
    }
}
