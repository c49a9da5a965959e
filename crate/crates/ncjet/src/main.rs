use clap::Parser;

fn main() {
    std::process::exit(ncjet::cli::run(ncjet::cli::Cli::parse()));
}
