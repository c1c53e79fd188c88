use clap::Parser;

fn main() {
    let cli = thermoflux_harness::cli::Cli::parse();
    match thermoflux_harness::cli::run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
