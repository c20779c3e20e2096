use clap::Parser;

fn main() {
    let cli = absinv::cli::Cli::parse();
    if let Err(e) = absinv::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(if e.is_validation() { 2 } else { 1 });
    }
}
