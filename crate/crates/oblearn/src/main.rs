use clap::Parser;

fn main() {
    let cli = oblearn::cli::Cli::parse();
    std::process::exit(oblearn::cli::run(cli));
}
