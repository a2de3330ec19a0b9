use clap::Parser;

fn main() {
    let cli = weil::cli::Cli::parse();
    std::process::exit(weil::cli::run(cli));
}
