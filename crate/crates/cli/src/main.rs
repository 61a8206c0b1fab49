use clap::Parser;

fn main() {
    let args = acidlab::cli::Cli::parse();
    if let Err(e) = acidlab::run(args) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}
